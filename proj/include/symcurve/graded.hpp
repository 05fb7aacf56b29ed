#pragma once

#include <map>
#include <memory>

#include "symcurve/model.hpp"

namespace symcurve {

/// Flat coordinates for pure-degree-k block matrices: all block positions
/// (b, a) with deg(b) - deg(a) = k in lexicographic box order, entries
/// row-major inside each block.
struct DegreeCoords {
  std::vector<std::pair<int, int>> positions;  // box indices into diagram().boxes()
  std::vector<int> offsets;
  int total = 0;
};

/// Per-model cache of exact graded-algebra data: bases of the degree
/// components g_k, the matrix of ad(delta) on them, and coordinate maps.
/// All stored data is rational; floating callers convert on demand.
class GradedContext {
 public:
  explicit GradedContext(const SymplecticModel& model);

  const SymplecticModel& model() const { return *model_; }
  const DoubleDiagram& diagram() const { return model_->diagram(); }
  int top_degree() const { return 2 * model_->diagram().p1() - 1; }
  const BlockEndomorphism& delta() const { return delta_; }

  const DegreeCoords& coords(int k) const;
  Mat to_coords(const Mat& dense, int k) const;
  Mat from_coords(const Mat& column, int k) const;

  /// Basis of g_k = degree-k part of the symplectic algebra.
  const std::vector<BlockEndomorphism>& g_basis(int k) const;
  const Mat& g_basis_coords(int k) const;  // coords x dim, columns = basis
  int dim_g(int k) const;

  /// Matrix of ad(delta): g_k -> coordinates of degree k-1, basis -> coords.
  const Mat& ad_delta(int k) const;

  /// Unique X in g_k with [delta, X] matching the degree-(k-1) coordinate
  /// target; valid for k >= 1 where ad(delta) is injective.
  BlockEndomorphism ad_preimage(int k, const Mat& target_coords);

  /// Random element of g_k (exact backend) from the seeded generator.
  BlockEndomorphism random_gk(int k, Rng& rng);
  /// Random element of g^0 = sum of nonnegative degrees.
  BlockEndomorphism random_g0plus(Rng& rng);

 private:
  const SymplecticModel* model_;
  BlockEndomorphism delta_;
  mutable std::map<int, DegreeCoords> coords_;
  mutable std::map<int, std::vector<BlockEndomorphism>> bases_;
  mutable std::map<int, Mat> basis_coords_;
  mutable std::map<int, Mat> ad_;
  mutable std::map<int, Mat> ad_solver_inv_;           // pseudo-solve for ad_delta
  mutable std::map<int, std::vector<int>> ad_solver_rows_;
};

/// Graded subspace with per-degree exact bases, in coordinates and dense form.
struct GradedSubspace {
  std::map<int, Mat> coords;  // degree -> (coords x dim) basis columns
  int dim(int k) const {
    auto it = coords.find(k);
    return it == coords.end() ? 0 : it->second.cols();
  }
  int total_dim() const {
    int d = 0;
    for (const auto& [k, m] : coords) d += m.cols();
    return d;
  }
};

struct Prolongation {
  GradedSubspace u;
  bool closed_form_ok = false;
};

/// Kernel recursion for the universal algebraic prolongation of the normal
/// symbol, cross-checked against the closed form (equal skew diagonal blocks
/// along each row, nothing in positive degrees). ClosedFormMismatch on drift.
Prolongation prolongation(GradedContext& ctx);

/// Same recursion seeded with span{delta} in degree -1 (symmetries of the
/// unparametrized flat curve).
GradedSubspace unparametrized_prolongation(GradedContext& ctx);

/// True iff all iterated brackets (ad delta)^k y stay in nonnegative degrees.
bool flat_symmetry_check(const BlockEndomorphism& y, GradedContext& ctx);

/// Blockwise commutator [delta, X] via the shift formula
/// Y_{ba} = eps(l(b)) X_{l(b) a} - eps(a) X_{b r(a)} (missing boxes = 0).
BlockEndomorphism bracket_blocks(const BlockEndomorphism& delta,
                                 const BlockEndomorphism& X);

/// Alternating chain sum D(Y)_{ba} = sum_j (prod_s eps(l^s b)/eps(l^s a)) Y_{l^j b, l^j a}.
Mat d_operator(const BlockEndomorphism& Y, const Box& b, const Box& a);

struct CoboundaryCertificate {
  bool member = false;
  BlockEndomorphism X;  // preimage when member
  Box witness_b, witness_rho;
  Mat witness_value;  // nonzero D(Y)_{b rho} when not a member
};

/// Membership of Y in [delta, g^0] cap g^0 via the chain conditions; on
/// success the preimage is reconstructed blockwise and verified exactly.
CoboundaryCertificate coboundary_test(const BlockEndomorphism& Y, GradedContext& ctx);

/// Normalization space N attached to an assignment: per-degree free blocks
/// with the parity symmetry class, complementary to u_k + [delta, g_{k+1}].
class NormalizationSpace {
 public:
  NormalizationSpace(GradedContext& ctx, const Assignment& phi);

  struct FreeBlock {
    Box b, rho;      // chain key
    Box pos_b, pos_a;  // selected pair
    int degree;
    int k_index;       // left index of b (parity decides the symmetry class)
    bool same_row;
    int param_count;
  };

  GradedContext& ctx() const { return *ctx_; }
  const Assignment& assignment() const { return phi_; }
  const std::vector<FreeBlock>& free_blocks() const { return free_blocks_; }
  const GradedSubspace& n_space() const { return n_; }
  const GradedSubspace& u_space() const { return u_; }
  const GradedSubspace& im_space() const { return im_; }
  int dim_n(int k) const { return n_.dim(k); }

  struct Split {
    Mat u_part, im_part, n_part;  // degree-k coordinate columns
    Mat u_coeffs, im_coeffs, n_coeffs;
    Scalar residual = Scalar::exact(0);
  };
  /// Splits a degree-k coordinate vector along u_k + [delta, g_{k+1}] + N_k.
  Split split(const Mat& coords_y, int k) const;

  /// Exact (or tolerance) membership of a dense matrix in N = sum N_k.
  bool contains(const Mat& dense, Scalar* residual_out = nullptr) const;

  /// Dense element of N_k with the given free coefficients.
  Mat n_from_coeffs(const Mat& coeffs, int k) const;

 private:
  GradedContext* ctx_;
  Assignment phi_;
  std::vector<FreeBlock> free_blocks_;
  GradedSubspace n_, u_, im_;
  struct DegreeSolver {
    Mat M;                  // [U | I | N] columns, rational
    std::vector<int> rows;  // pivot rows making M[rows, :] invertible
    Mat inv;                // inverse of that square submatrix
    int du = 0, di = 0, dn = 0;
    mutable std::unique_ptr<Mat> M_f, inv_f;  // floating copies on demand
  };
  std::map<int, DegreeSolver> solvers_;
  const DegreeSolver* solver(int k) const;
};

struct ComplementarityReport {
  struct DegreeRow {
    int k, dim_g, dim_u, dim_im, dim_n;
    bool direct_sum;
  };
  std::vector<DegreeRow> degrees;
  bool dimensions_ok = true;
  int ad_checks = 0;
  int ad_failures = 0;
  bool ok() const { return dimensions_ok && ad_failures == 0; }
};

/// Per-degree dimension audit of the direct sum plus exact Ad-invariance of N
/// under random rational orthogonal residual elements (Cayley transforms).
ComplementarityReport complementarity_audit(const NormalizationSpace& N, int ad_samples,
                                            std::uint64_t seed);

/// Rational orthogonal matrix via the Cayley transform of a random skew matrix.
Mat random_cayley_orthogonal(int n, Rng& rng);
/// Block-diagonal residual-group element: one orthogonal factor per diagram
/// row, repeated over the row's boxes.
Mat random_residual_element(const SymplecticModel& model, Rng& rng);
/// Rational symplectic matrix via the Cayley transform of a Hamiltonian one.
Mat random_symplectic(const SymplecticModel& model, Rng& rng);
/// Same, in the standard basis of the given half-dimension.
Mat random_symplectic_standard(int m, Rng& rng);

}  // namespace symcurve
