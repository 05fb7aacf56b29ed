#pragma once

#include "symcurve/curve.hpp"

namespace symcurve {

/// Structure function C = Gamma^{-1} Gamma' of a lift, slot-indexed.
struct StructureFunction {
  MatrixJet C;
  const SymplecticModel* model = nullptr;
};

/// Computes the structure function and checks algebra membership per
/// coefficient. Throws NonInvertibleJet if the lift is singular at the base.
StructureFunction structure_function(const MatrixJet& gamma, const SymplecticModel& model);

struct StageTrace {
  int k = 0;
  int residual_gauge_dim = 0;  // dim u_0 + dim g^{k+1} after the stage
  Scalar gauge_magnitude = Scalar::exact(0);
  Scalar ode_magnitude = Scalar::exact(0);
  Scalar split_residual = Scalar::exact(0);
};

struct CanonicalFrameResult {
  std::shared_ptr<SymplecticModel> model;
  std::shared_ptr<GradedContext> ctx;
  std::shared_ptr<NormalizationSpace> nspace;
  MatrixJet gamma;  // normal lift
  MatrixJet C;      // normalized structure function, C - delta in N
  std::map<int, MatrixJet> n_free;  // degree -> free-coefficient column jets
  std::vector<StageTrace> trace;
  Mat fiber_choice;
  int monotone_sign = -1;
  Scalar membership_residual = Scalar::exact(0);
  int result_order = 0;
};

/// Degree-by-degree gauge fixing of a lift whose structure function starts at
/// the normal degree -1 generator: cancels the image part by nilpotent right
/// gauges and the stabilizer part by a jet ODE, leaving C - delta in N.
CanonicalFrameResult normalize_lift(const MatrixJet& gamma0,
                                    std::shared_ptr<SymplecticModel> model,
                                    std::shared_ptr<GradedContext> ctx,
                                    std::shared_ptr<NormalizationSpace> nspace,
                                    const Mat* fiber_choice = nullptr);

/// Full pipeline: adapted lift of the curve, then normalization under phi0
/// (or a caller-provided normalization space).
CanonicalFrameResult normalize_curve(const CurveSpec& curve,
                                     const Mat* fiber_choice = nullptr);

/// Blocks of the normal structure function per box pair, with membership data.
struct CurvatureMap {
  Box b, a;
  MatrixJet value;  // block jet
  bool in_normalization_space = false;
};
std::vector<CurvatureMap> curvature_maps(const CanonicalFrameResult& result);

struct InvariantFingerprint {
  bool complete = false;  // true on multiplicity-one diagrams
  // scalar entries: label -> jet (free blocks with canonical signs, or traces)
  std::vector<std::pair<std::string, Jet>> entries;
};

/// Free-block jets in the order of nspace.free_blocks(), rebuilt from the
/// per-degree free-coefficient jets.
std::vector<MatrixJet> normalized_block_jets(const NormalizationSpace& nspace,
                                             const std::map<int, MatrixJet>& n_free);

InvariantFingerprint fingerprint_from_data(const NormalizationSpace& nspace,
                                           const std::map<int, MatrixJet>& n_free);
InvariantFingerprint invariant_fingerprint(const CanonicalFrameResult& result);

enum class EquivalenceVerdict { equivalent, inequivalent, undecided_partial };

struct EquivalenceResult {
  EquivalenceVerdict verdict;
  std::string detail;
  Scalar distance = Scalar::exact(0);
};

/// Decides symplectic equivalence: complete on multiplicity-one diagrams via
/// the finite residual sign group, invariant-based evidence otherwise.
EquivalenceResult equivalence_test(const CurveSpec& c1, const CurveSpec& c2);

/// Jet-mode reconstruction: the unique Gamma with Gamma' = Gamma C, Gamma(t0) = init.
MatrixJet reconstruct_jet(const MatrixJet& C, const Mat& initial);

struct SampledFrame {
  std::vector<Scalar> times;
  std::vector<Mat> frames;
  Scalar max_symplectic_defect = Scalar::exact(0);
};

/// Fixed-step fourth-order integration of Gamma' = Gamma C(t) with
/// symplectic-defect monitoring against the supplied form matrix.
SampledFrame reconstruct_sampled(const MatrixJet& C, const Mat& initial, const Mat& J,
                                 const Scalar& t_end, int steps, double defect_budget);

/// Draws polynomial normalized data n(t) in N_phi0, reconstructs the flat-plus-n
/// lift exactly and returns the curve in standard coordinates.
struct GeneratedCurve {
  CurveSpec curve;
  std::map<int, MatrixJet> n_free;  // the drawn free coefficients per degree
  std::shared_ptr<SymplecticModel> model;
  std::shared_ptr<GradedContext> ctx;
  std::shared_ptr<NormalizationSpace> nspace;
};

GeneratedCurve random_curve(const ReducedDiagram& red, std::uint64_t seed, int poly_degree,
                            int jet_order = -1);
/// The flat curve of the diagram: exp((t - t0) delta) applied to the reference.
GeneratedCurve flat_curve(const ReducedDiagram& red, int jet_order = -1);

/// Jet order with enough slack for analysis plus normalization of the diagram.
int recommended_jet_order(const ReducedDiagram& red, int poly_degree);

}  // namespace symcurve
