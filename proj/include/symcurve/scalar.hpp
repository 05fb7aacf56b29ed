#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

namespace symcurve {

namespace mp = boost::multiprecision;
using Rational = mp::mpq_rational;
using FloatMP = mp::number<mp::mpfr_float_backend<0>, mp::et_off>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define SYMCURVE_ERROR(name)                   \
  struct name : Error {                        \
    using Error::Error;                        \
    name() : Error(#name) {}                   \
  }

SYMCURVE_ERROR(BackendMismatch);
SYMCURVE_ERROR(OrderMismatch);
SYMCURVE_ERROR(NonInvertibleJet);
SYMCURVE_ERROR(NilpotencyViolated);
SYMCURVE_ERROR(ShapeMismatch);
SYMCURVE_ERROR(RankDeficientInput);
SYMCURVE_ERROR(EmptyDiagram);
SYMCURVE_ERROR(BoxOutOfRange);
SYMCURVE_ERROR(NotLastBox);
SYMCURVE_ERROR(RowOrderViolated);
SYMCURVE_ERROR(AssignmentAmbiguous);
SYMCURVE_ERROR(ModelMismatch);
SYMCURVE_ERROR(ClosedFormMismatch);
SYMCURVE_ERROR(InconsistentReconstruction);
SYMCURVE_ERROR(NotComplementary);
SYMCURVE_ERROR(NotLagrangian);
SYMCURVE_ERROR(RankDeficientFrame);
SYMCURVE_ERROR(BadFormat);
SYMCURVE_ERROR(NotMonotone);
SYMCURVE_ERROR(NotAmple);
SYMCURVE_ERROR(PrecisionExhausted);
SYMCURVE_ERROR(NotArcLength);
SYMCURVE_ERROR(RegularityFailed);
SYMCURVE_ERROR(StepSizeTooLarge);
SYMCURVE_ERROR(StageResidualTooLarge);

#undef SYMCURVE_ERROR

enum class Backend { exact, floating };

/// Sets the working precision (in bits) of the floating backend for this thread.
void set_float_precision_bits(unsigned bits);
unsigned float_precision_bits();

/// Relative rank tolerance 2^(-bits/2) at the current precision.
FloatMP rank_tolerance();
/// Replaces the derived rank tolerance for this thread; 0 restores the default.
void set_rank_tolerance_override(double rel);

/// Arbitrary-precision scalar: exact rational or binary float, tagged.
/// Mixing the two backends in one arithmetic expression is rejected.
class Scalar {
 public:
  Scalar() : v_(Rational(0)) {}
  explicit Scalar(Rational q) : v_(std::move(q)) {}
  explicit Scalar(FloatMP f) : v_(std::move(f)) {}
  Scalar(long n, long d) : v_(Rational(n, d)) {}

  static Scalar exact(long n) { return Scalar(Rational(n)); }
  static Scalar zero(Backend b) {
    return b == Backend::exact ? Scalar(Rational(0)) : Scalar(FloatMP(0));
  }
  static Scalar one(Backend b) {
    return b == Backend::exact ? Scalar(Rational(1)) : Scalar(FloatMP(1));
  }
  /// Parses "p/q", "p", or a decimal string (decimal point forces the float backend).
  static Scalar parse(const std::string& s);

  Backend backend() const {
    return std::holds_alternative<Rational>(v_) ? Backend::exact : Backend::floating;
  }
  bool is_exact() const { return backend() == Backend::exact; }

  const Rational& rat() const;
  const FloatMP& flt() const;

  /// Exact value converted to the floating backend at the current precision.
  Scalar to_float() const;
  Scalar to_backend(Backend b) const { return b == Backend::exact ? *this : to_float(); }

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }
  bool operator<(const Scalar& o) const;
  bool operator<=(const Scalar& o) const { return *this == o || *this < o; }
  bool operator>(const Scalar& o) const { return o < *this; }
  bool operator>=(const Scalar& o) const { return o <= *this; }

  bool is_zero() const;
  int sign() const;
  Scalar abs() const;
  /// Square root; floating backend only (exact values have no closed root in general).
  Scalar sqrt() const;
  Scalar inv() const;

  double to_double() const;
  /// Lossless string form: "p/q" for exact values, full-precision decimal otherwise.
  std::string str() const;

 private:
  std::variant<Rational, FloatMP> v_;
  void check_same(const Scalar& o) const {
    if (backend() != o.backend()) throw BackendMismatch();
  }
};

inline Scalar abs(const Scalar& s) { return s.abs(); }

/// Deterministic pseudo-random small rationals/ints for test data and audits.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  std::uint64_t next();
  /// Uniform integer in [lo, hi].
  long integer(long lo, long hi);
  /// Small exact rational with numerator in [-num_max, num_max], denominator in [1, den_max].
  Scalar rational(long num_max = 9, long den_max = 4);

 private:
  std::uint64_t state_;
};

}  // namespace symcurve
