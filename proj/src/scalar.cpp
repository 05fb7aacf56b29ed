#include "symcurve/scalar.hpp"

#include <cmath>

namespace symcurve {

namespace {
thread_local unsigned g_precision_bits = 192;
thread_local double g_rank_tol_override = 0.0;

unsigned bits_to_digits10(unsigned bits) {
  return static_cast<unsigned>(bits * 0.30103) + 3;
}
}  // namespace

void set_float_precision_bits(unsigned bits) {
  if (bits < 64) bits = 64;
  g_precision_bits = bits;
  FloatMP::default_precision(bits_to_digits10(bits));
}

unsigned float_precision_bits() { return g_precision_bits; }

FloatMP rank_tolerance() {
  if (g_rank_tol_override > 0.0) return FloatMP(g_rank_tol_override);
  FloatMP t = mp::pow(FloatMP(2), -static_cast<int>(g_precision_bits / 2));
  return t;
}

void set_rank_tolerance_override(double rel) { g_rank_tol_override = rel; }

Scalar Scalar::parse(const std::string& s) {
  if (s.empty()) throw BadFormat("empty scalar string");
  if (s.find_first_of(".eE") != std::string::npos &&
      s.find('/') == std::string::npos) {
    return Scalar(FloatMP(s));
  }
  try {
    return Scalar(Rational(s));
  } catch (const std::exception&) {
    throw BadFormat("cannot parse scalar: " + s);
  }
}

const Rational& Scalar::rat() const {
  if (!is_exact()) throw BackendMismatch("rat() on floating scalar");
  return std::get<Rational>(v_);
}

const FloatMP& Scalar::flt() const {
  if (is_exact()) throw BackendMismatch("flt() on exact scalar");
  return std::get<FloatMP>(v_);
}

Scalar Scalar::to_float() const {
  if (!is_exact()) return *this;
  FloatMP f(std::get<Rational>(v_));
  return Scalar(f);
}

Scalar Scalar::operator-() const {
  if (is_exact()) return Scalar(Rational(-std::get<Rational>(v_)));
  return Scalar(FloatMP(-std::get<FloatMP>(v_)));
}

Scalar& Scalar::operator+=(const Scalar& o) {
  check_same(o);
  if (is_exact())
    std::get<Rational>(v_) += std::get<Rational>(o.v_);
  else
    std::get<FloatMP>(v_) += std::get<FloatMP>(o.v_);
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  check_same(o);
  if (is_exact())
    std::get<Rational>(v_) -= std::get<Rational>(o.v_);
  else
    std::get<FloatMP>(v_) -= std::get<FloatMP>(o.v_);
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  check_same(o);
  if (is_exact())
    std::get<Rational>(v_) *= std::get<Rational>(o.v_);
  else
    std::get<FloatMP>(v_) *= std::get<FloatMP>(o.v_);
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  check_same(o);
  if (o.is_zero()) throw Error("scalar division by zero");
  if (is_exact())
    std::get<Rational>(v_) /= std::get<Rational>(o.v_);
  else
    std::get<FloatMP>(v_) /= std::get<FloatMP>(o.v_);
  return *this;
}

bool Scalar::operator==(const Scalar& o) const {
  check_same(o);
  if (is_exact()) return std::get<Rational>(v_) == std::get<Rational>(o.v_);
  return std::get<FloatMP>(v_) == std::get<FloatMP>(o.v_);
}

bool Scalar::operator<(const Scalar& o) const {
  check_same(o);
  if (is_exact()) return std::get<Rational>(v_) < std::get<Rational>(o.v_);
  return std::get<FloatMP>(v_) < std::get<FloatMP>(o.v_);
}

bool Scalar::is_zero() const {
  if (is_exact()) return std::get<Rational>(v_) == 0;
  return std::get<FloatMP>(v_) == 0;
}

int Scalar::sign() const {
  if (is_exact()) {
    const auto& q = std::get<Rational>(v_);
    return q == 0 ? 0 : (q > 0 ? 1 : -1);
  }
  const auto& f = std::get<FloatMP>(v_);
  return f == 0 ? 0 : (f > 0 ? 1 : -1);
}

Scalar Scalar::abs() const { return sign() < 0 ? -*this : *this; }

Scalar Scalar::sqrt() const {
  if (is_exact()) throw BackendMismatch("sqrt requires the floating backend");
  const auto& f = std::get<FloatMP>(v_);
  if (f < 0) throw Error("sqrt of negative scalar");
  return Scalar(FloatMP(mp::sqrt(f)));
}

Scalar Scalar::inv() const {
  if (is_zero()) throw Error("inverse of zero scalar");
  return Scalar::one(backend()) / *this;
}

double Scalar::to_double() const {
  if (is_exact()) return std::get<Rational>(v_).convert_to<double>();
  return std::get<FloatMP>(v_).convert_to<double>();
}

std::string Scalar::str() const {
  if (is_exact()) return std::get<Rational>(v_).str();
  return std::get<FloatMP>(v_).str();
}

std::uint64_t Rng::next() {
  // splitmix64
  state_ += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

long Rng::integer(long lo, long hi) {
  if (hi <= lo) return lo;
  return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
}

Scalar Rng::rational(long num_max, long den_max) {
  long n = integer(-num_max, num_max);
  long d = integer(1, den_max);
  return Scalar(n, d);
}

}  // namespace symcurve
