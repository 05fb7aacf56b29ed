#pragma once

#include <map>

#include "symcurve/diagram.hpp"
#include "symcurve/matrix.hpp"

namespace symcurve {

/// The symplectic space built from a double diagram: basis slots grouped by
/// boxes (row-major, mirror side first), explicit form matrix J, and the
/// conversion to the standard symplectic basis sigma(e_i, f_j) = delta_ij.
///
/// Sign audit: with the pairing, sign and normal-form conventions used here,
/// the quadratic form sigma(delta x, x) on the degree-0 part is negative
/// definite; `definiteness_sign` records that as -1 and the curve pipeline
/// matches inputs against it.
class SymplecticModel {
 public:
  explicit SymplecticModel(DoubleDiagram dd);

  const DoubleDiagram& diagram() const { return dd_; }
  int half_dim() const { return m_; }
  int dim() const { return 2 * m_; }
  const Mat& J() const { return J_; }
  Mat J_float() const { return J_.to_float(); }
  int definiteness_sign() const { return -1; }

  int slot(const Box& b) const { return slots_[static_cast<size_t>(dd_.index_of(b))]; }
  int block_size(const Box& b) const { return dd_.block_size(b); }
  /// Degree of the slot's box, indexed by basis position.
  int slot_degree(int basis_index) const { return slot_deg_[static_cast<size_t>(basis_index)]; }

  /// Basis change T with columns = standard-basis coordinates of the model
  /// basis vectors; T^t J_std T = J. Mirror/original pairs map to (e_q, f_q).
  const Mat& to_standard() const { return T_; }
  static Mat standard_J(int m, Backend b = Backend::exact);

  bool operator==(const SymplecticModel& o) const {
    return dd_.reduced() == o.dd_.reduced();
  }

 private:
  DoubleDiagram dd_;
  int m_;
  std::vector<int> slots_;
  std::vector<int> slot_deg_;
  Mat J_;
  Mat T_;
};

SymplecticModel darboux_model(const DoubleDiagram& dd);

/// Endomorphism of the model space as a dense matrix with box-block access.
class BlockEndomorphism {
 public:
  BlockEndomorphism(const SymplecticModel* model, Mat m);
  static BlockEndomorphism zero(const SymplecticModel* model,
                                Backend b = Backend::exact);

  const SymplecticModel& model() const { return *model_; }
  const Mat& dense() const { return m_; }
  Mat& dense() { return m_; }
  Backend backend() const { return m_.backend(); }

  Mat block(const Box& b, const Box& a) const;
  void set_block(const Box& b, const Box& a, const Mat& value);
  void add_block(const Box& b, const Box& a, const Mat& value);

  BlockEndomorphism operator-() const { return {model_, -m_}; }
  friend BlockEndomorphism operator+(const BlockEndomorphism& x, const BlockEndomorphism& y);
  friend BlockEndomorphism operator-(const BlockEndomorphism& x, const BlockEndomorphism& y);
  BlockEndomorphism scaled(const Scalar& s) const { return {model_, m_.scaled(s)}; }
  friend BlockEndomorphism bracket(const BlockEndomorphism& x, const BlockEndomorphism& y);

 private:
  const SymplecticModel* model_;
  Mat m_;
};

BlockEndomorphism operator+(const BlockEndomorphism& x, const BlockEndomorphism& y);
BlockEndomorphism operator-(const BlockEndomorphism& x, const BlockEndomorphism& y);
BlockEndomorphism bracket(const BlockEndomorphism& x, const BlockEndomorphism& y);

struct SpCheckResult {
  bool ok = true;
  Box b, a;       // first violating block pair when !ok
  Scalar residual = Scalar::exact(0);
};

/// Membership test for the symplectic algebra: blockwise transpose relations
/// and the dense criterion (J X symmetric), cross-checked against each other.
SpCheckResult sp_check(const BlockEndomorphism& X, const Scalar* tol = nullptr);

/// Degree components keyed by k: only blocks with deg(b) - deg(a) = k.
using GradedDecomposition = std::map<int, BlockEndomorphism>;
GradedDecomposition degree_split(const BlockEndomorphism& X);
/// Single degree component of a dense matrix (zeroes the other blocks).
Mat degree_component(const SymplecticModel& model, const Mat& dense, int k);
/// Smallest k with a nonzero component, or nullopt for the zero map.
std::optional<int> min_degree(const BlockEndomorphism& X, const Scalar* tol = nullptr);

/// The normal-form degree -1 generator: block (r(a), a) = eps(a) * identity.
BlockEndomorphism delta_normal(const SymplecticModel& model);

/// Skew-orthogonal complement of the column span of S.
Mat skew_complement(const Mat& S, const SymplecticModel& model);

}  // namespace symcurve
