#pragma once

#include <vector>

#include "symcurve/scalar.hpp"

namespace symcurve {

/// Truncated Taylor expansion of a scalar function of t at a base parameter.
/// Coefficients c[0..K] give sum c_k (t - t0)^k; arithmetic truncates to K.
/// Binary operations require matching (t0, K); callers align explicitly.
class Jet {
 public:
  Jet() : t0_(Scalar::exact(0)), c_(1, Scalar::exact(0)) {}
  Jet(Scalar t0, std::vector<Scalar> coeffs);
  static Jet constant(const Scalar& value, const Scalar& t0, int order);
  static Jet zero(const Scalar& t0, int order, Backend b);
  /// The jet of t itself: t0 + (t - t0).
  static Jet variable(const Scalar& t0, int order);

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const Scalar& t0() const { return t0_; }
  Backend backend() const { return c_[0].backend(); }
  const Scalar& coeff(int k) const { return c_[static_cast<size_t>(k)]; }
  Scalar& coeff(int k) { return c_[static_cast<size_t>(k)]; }
  const std::vector<Scalar>& coeffs() const { return c_; }

  Jet operator-() const;
  bool operator==(const Jet& o) const {
    return backend() == o.backend() && same_frame(o) && c_ == o.c_;
  }
  bool operator!=(const Jet& o) const { return !(*this == o); }
  friend Jet operator+(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a, const Jet& b);
  friend Jet operator*(const Jet& a, const Jet& b);
  Jet scaled(const Scalar& s) const;
  /// Multiplicative inverse; requires c_0 != 0 (NonInvertibleJet otherwise).
  Jet invert() const;
  friend Jet operator/(const Jet& a, const Jet& b) { return a * b.invert(); }

  /// Termwise derivative; lowers the order by one.
  Jet derivative() const;
  /// Antiderivative with zero constant term; raises the order by one.
  Jet antiderivative() const;
  /// Square root with positive constant term (floating backend).
  Jet sqrt() const;
  /// Composition self(g(s)) where g's value at its base point equals t0.
  Jet compose(const Jet& g) const;
  /// Compositional inverse of a jet with c_0 = 0, c_1 != 0.
  Jet reversion() const;

  Jet truncated(int new_order) const;
  /// Re-expansion of the stored polynomial at a new base point, same order.
  Jet rebased(const Scalar& new_t0) const;
  Jet to_float() const;

  Scalar evaluate(const Scalar& t) const;
  bool is_zero() const;
  Scalar max_abs_coeff() const;

  bool same_frame(const Jet& o) const { return order() == o.order() && t0_ == o.t0_; }

 private:
  Scalar t0_;
  std::vector<Scalar> c_;
  void check(const Jet& o) const {
    if (!same_frame(o)) throw OrderMismatch("jet (t0, K) mismatch");
  }
};

/// kind in {add, mul, invert, differentiate}; b unused for the unary kinds.
Jet jet_field_ops(const std::string& kind, const Jet& a, const Jet* b = nullptr);

/// Aligns two jets to their common (minimal) order.
void align(Jet& a, Jet& b);

}  // namespace symcurve
