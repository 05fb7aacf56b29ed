#pragma once

#include <memory>

#include "symcurve/graded.hpp"
#include "symcurve/matjet.hpp"

namespace symcurve {

/// Parametrized curve in the Lagrangian Grassmannian: a 2m x m frame jet in
/// the standard symplectic basis (e_1..e_m, f_1..f_m), sigma(e_i, f_j) = d_ij,
/// whose columns span the moving subspace.
struct CurveSpec {
  int m = 0;
  MatrixJet frame;
  std::string name;

  int jet_order() const { return frame.order(); }
  const Scalar& t0() const { return frame.t0(); }
};

/// Validates column count, rank at t0 and the isotropy of the span.
void validate_curve(const CurveSpec& c);

/// Symmetric matrix of the velocity quadratic form in the column basis at t.
Mat velocity_form(const CurveSpec& c, const Scalar& t);

enum class Monotone { nondecreasing, nonincreasing, indefinite, degenerate };

struct FlagJets {
  std::map<int, MatrixJet> span;  // j -> columns spanning the flag space
  std::map<int, int> dims;
  int extension_depth = 0;  // flag reaches the whole space at j = -depth
  bool ample = false;
};

/// Derivative-span extensions and skew-complement contractions as jets.
/// An optional noise floor widens rank thresholds (used when sampling
/// truncated curves away from their base point); contractions can be skipped
/// when only dimensions are needed.
FlagJets osculating_flag(const CurveSpec& c, const Scalar* noise_floor = nullptr,
                         bool with_contractions = true);

struct RegularityReport {
  bool equiregular = false;
  std::vector<std::pair<std::string, std::vector<int>>> sampled_dims;
  bool ample = false;
  int ample_witness_p = 0;  // Lambda^{(p)} = V
  Monotone monotone = Monotone::degenerate;
  std::vector<Scalar> velocity_eigenvalues;
  YoungDiagram young_diagram{std::vector<int>{}};
};

/// Flag dimensions at t0 and sample points; monotonicity by inertia of the
/// velocity form. Equiregularity is certified at the samples only.
RegularityReport regularity_report(const CurveSpec& c, const std::vector<Scalar>& samples);

struct SymbolResult {
  ReducedDiagram diagram;
  int monotone_sign = 0;  // +1 nondecreasing, -1 nonincreasing
  std::map<int, Mat> delta_t;  // graded pieces V_j -> V_{j-1}, naive flag bases
  Mat Q;  // graded isomorphism: naive gr coordinates -> model coordinates
  Scalar conjugation_residual = Scalar::exact(0);  // |Q delta_t - delta Q|
  Scalar symplectic_residual = Scalar::exact(0);   // |Q^t J_gr-model Q - gram|
  std::shared_ptr<SymplecticModel> model;
};

/// Graded symbol at a parameter value with the conjugator onto the normal form.
SymbolResult symbol_at(const CurveSpec& c, const Scalar& t);

/// Frame jet adapted to the curve: columns grouped by diagram boxes span the
/// osculating flag, the Gram matrix of the effective form equals the model
/// pairing exactly (to jet order), and the structure function starts at the
/// normal degree -1 generator.
struct AdaptedLift {
  std::shared_ptr<SymplecticModel> model;
  std::shared_ptr<GradedContext> ctx;
  MatrixJet gamma;        // 2m x 2m, standard coordinates, model slot order
  int monotone_sign = -1; // curves of the opposite sign are analyzed under -sigma
  ReducedDiagram reduced;
};

AdaptedLift adapted_lift(const CurveSpec& c);

/// Converts a lift in model slot coordinates to the standard-basis curve frame
/// (the nonnegative-degree slots span the moving Lagrangian subspace).
CurveSpec curve_from_model_lift(const SymplecticModel& model, const MatrixJet& gamma_model,
                                const std::string& name);

}  // namespace symcurve
