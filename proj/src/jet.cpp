#include "symcurve/jet.hpp"

namespace symcurve {

Jet::Jet(Scalar t0, std::vector<Scalar> coeffs) : t0_(std::move(t0)), c_(std::move(coeffs)) {
  if (c_.empty()) throw OrderMismatch("jet needs at least the constant coefficient");
  for (const auto& c : c_)
    if (c.backend() != c_[0].backend()) throw BackendMismatch("mixed jet coefficients");
}

Jet Jet::constant(const Scalar& value, const Scalar& t0, int order) {
  std::vector<Scalar> c(static_cast<size_t>(order) + 1, Scalar::zero(value.backend()));
  c[0] = value;
  return Jet(t0, std::move(c));
}

Jet Jet::zero(const Scalar& t0, int order, Backend b) {
  return constant(Scalar::zero(b), t0, order);
}

Jet Jet::variable(const Scalar& t0, int order) {
  Jet j = constant(t0, t0, order);
  if (order >= 1) j.coeff(1) = Scalar::one(t0.backend());
  return j;
}

Jet Jet::operator-() const {
  Jet j = *this;
  for (auto& c : j.c_) c = -c;
  return j;
}

Jet operator+(const Jet& a, const Jet& b) {
  a.check(b);
  Jet r = a;
  for (int k = 0; k <= a.order(); ++k) r.coeff(k) += b.coeff(k);
  return r;
}

Jet operator-(const Jet& a, const Jet& b) {
  a.check(b);
  Jet r = a;
  for (int k = 0; k <= a.order(); ++k) r.coeff(k) -= b.coeff(k);
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  a.check(b);
  const int K = a.order();
  Jet r = Jet::zero(a.t0(), K, a.backend());
  for (int i = 0; i <= K; ++i) {
    if (a.coeff(i).is_zero()) continue;
    for (int j = 0; i + j <= K; ++j) {
      if (b.coeff(j).is_zero()) continue;
      r.coeff(i + j) += a.coeff(i) * b.coeff(j);
    }
  }
  return r;
}

Jet Jet::scaled(const Scalar& s) const {
  Jet r = *this;
  for (auto& c : r.c_) c *= s;
  return r;
}

Jet Jet::invert() const {
  const int K = order();
  if (c_[0].is_zero()) throw NonInvertibleJet();
  if (backend() == Backend::floating) {
    Scalar tol = Scalar(rank_tolerance()) * max_abs_coeff();
    if (c_[0].abs() <= tol) throw NonInvertibleJet("constant coefficient below tolerance");
  }
  Jet r = zero(t0_, K, backend());
  Scalar inv0 = c_[0].inv();
  r.coeff(0) = inv0;
  for (int k = 1; k <= K; ++k) {
    Scalar s = Scalar::zero(backend());
    for (int i = 1; i <= k; ++i) s += c_[i] * r.coeff(k - i);
    r.coeff(k) = -s * inv0;
  }
  return r;
}

Jet Jet::derivative() const {
  if (order() == 0) return zero(t0_, 0, backend());
  std::vector<Scalar> c(static_cast<size_t>(order()), Scalar::zero(backend()));
  for (int k = 1; k <= order(); ++k) c[k - 1] = c_[k] * Scalar::exact(k).to_backend(backend());
  return Jet(t0_, std::move(c));
}

Jet Jet::antiderivative() const {
  std::vector<Scalar> c(static_cast<size_t>(order()) + 2, Scalar::zero(backend()));
  for (int k = 0; k <= order(); ++k)
    c[k + 1] = c_[k] / Scalar::exact(k + 1).to_backend(backend());
  return Jet(t0_, std::move(c));
}

Jet Jet::sqrt() const {
  // s_0 = sqrt(c_0); 2 s_0 s_k = c_k - sum_{1<=i<k} s_i s_{k-i}
  Jet r = zero(t0_, order(), backend());
  Scalar s0 = c_[0].sqrt();
  if (s0.is_zero()) throw NonInvertibleJet("sqrt of jet with vanishing constant term");
  r.coeff(0) = s0;
  Scalar half_inv_s0 = (s0 + s0).inv();
  for (int k = 1; k <= order(); ++k) {
    Scalar s = c_[k];
    for (int i = 1; i < k; ++i) s -= r.coeff(i) * r.coeff(k - i);
    r.coeff(k) = s * half_inv_s0;
  }
  return r;
}

Jet Jet::compose(const Jet& g) const {
  if (g.coeff(0) != t0_) throw OrderMismatch("composition base point mismatch");
  const int K = g.order();
  Jet x = g;
  x.coeff(0) = Scalar::zero(backend());  // g - t0
  Jet r = Jet::constant(Scalar::zero(backend()), g.t0(), K);
  // Horner over the (t - t0)-polynomial of *this.
  int top = std::min(order(), K);
  for (int k = top; k >= 0; --k) {
    r = r * x;
    r.coeff(0) += c_[k];
  }
  return r;
}

Jet Jet::reversion() const {
  if (!c_[0].is_zero() || order() < 1 || c_[1].is_zero())
    throw NonInvertibleJet("reversion needs c0 = 0, c1 != 0");
  const int K = order();
  // Newton-free fixed point: g = (x - sum_{k>=2} c_k g^k)/c_1, iterated K times.
  Jet x = Jet::variable(Scalar::zero(backend()), K);
  x.coeff(0) = Scalar::zero(backend());
  Jet g = x.scaled(c_[1].inv());
  Jet tail = *this;
  tail.coeff(0) = Scalar::zero(backend());
  tail.coeff(1) = Scalar::zero(backend());
  for (int it = 0; it < K; ++it) {
    Jet t = tail.compose(g);  // tail has zero base coefficient
    g = (x - t).scaled(c_[1].inv());
  }
  return g;
}

Jet Jet::truncated(int new_order) const {
  if (new_order >= order()) return *this;
  std::vector<Scalar> c(c_.begin(), c_.begin() + new_order + 1);
  return Jet(t0_, std::move(c));
}

Jet Jet::rebased(const Scalar& new_t0) const {
  const int K = order();
  Scalar h = new_t0 - t0_;
  // Taylor shift by Horner: p(x + h) evaluated as jets in x.
  Jet r = zero(new_t0, K, backend());
  for (int k = K; k >= 0; --k) {
    // r = r * (x + h) + c_k
    Jet rx = zero(new_t0, K, backend());
    for (int i = 0; i < K; ++i) rx.coeff(i + 1) = r.coeff(i);
    for (int i = 0; i <= K; ++i) rx.coeff(i) += r.coeff(i) * h;
    rx.coeff(0) += c_[k];
    r = rx;
  }
  return r;
}

Jet Jet::to_float() const {
  std::vector<Scalar> c;
  c.reserve(c_.size());
  for (const auto& x : c_) c.push_back(x.to_float());
  return Jet(t0_.to_float(), std::move(c));
}

Scalar Jet::evaluate(const Scalar& t) const {
  Scalar h = t - t0_;
  Scalar r = Scalar::zero(backend());
  for (int k = order(); k >= 0; --k) r = r * h + c_[k];
  return r;
}

bool Jet::is_zero() const {
  for (const auto& c : c_)
    if (!c.is_zero()) return false;
  return true;
}

Scalar Jet::max_abs_coeff() const {
  Scalar m = Scalar::zero(backend());
  for (const auto& c : c_) {
    Scalar v = c.abs();
    if (v > m) m = v;
  }
  return m;
}

Jet jet_field_ops(const std::string& kind, const Jet& a, const Jet* b) {
  if (kind == "add") {
    if (!b) throw Error("add needs two jets");
    return a + *b;
  }
  if (kind == "mul") {
    if (!b) throw Error("mul needs two jets");
    return a * *b;
  }
  if (kind == "invert") return a.invert();
  if (kind == "differentiate") return a.derivative();
  throw Error("unknown jet operation: " + kind);
}

void align(Jet& a, Jet& b) {
  int K = std::min(a.order(), b.order());
  a = a.truncated(K);
  b = b.truncated(K);
}

}  // namespace symcurve
