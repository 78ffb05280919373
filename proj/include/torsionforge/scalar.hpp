#ifndef TORSIONFORGE_SCALAR_HPP
#define TORSIONFORGE_SCALAR_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace torsionforge {

/// Arbitrary-precision rational scalar. Thin wrapper around
/// boost::multiprecision::cpp_rational with a constructor set narrow enough
/// to coexist with Eigen's scalar-promotion machinery.
class Rational {
public:
  using rep = boost::multiprecision::cpp_rational;

  Rational() : v_(0) {}
  Rational(int n) : v_(n) {}
  Rational(long n) : v_(n) {}
  Rational(long long n) : v_(static_cast<long>(n)) {}
  Rational(long long num, long long den) : v_(rep(num) / rep(den)) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
  }
  explicit Rational(rep v) : v_(std::move(v)) {}

  /// Parses "p", "p/q" or a decimal literal like "-1.25".
  static Rational parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
      rep num(s.substr(0, slash));
      rep den(s.substr(slash + 1));
      if (den == 0) throw std::domain_error("Rational::parse: zero denominator");
      return Rational(num / den);
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      rep num(digits);
      rep den(1);
      for (std::size_t k = dot + 1; k < s.size(); ++k) den *= 10;
      return Rational(num / den);
    }
    return Rational(rep(s));
  }

  const rep& value() const { return v_; }
  double to_double() const { return v_.convert_to<double>(); }
  bool is_zero() const { return v_ == 0; }
  bool is_integer() const { return boost::multiprecision::denominator(v_) == 1; }

  std::string str() const { return v_.str(); }

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(a.v_ + b.v_); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(a.v_ - b.v_); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(a.v_ * b.v_); }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.v_ == 0) throw std::domain_error("Rational: division by zero");
    return Rational(a.v_ / b.v_);
  }
  Rational operator-() const { return Rational(-v_); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.v_ == 0) throw std::domain_error("Rational: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.v_; }

private:
  rep v_;
};

inline Rational abs(const Rational& r) { return r < Rational(0) ? -r : r; }
inline double conj(double x) { return x; }
inline const Rational& conj(const Rational& r) { return r; }
inline const Rational& real(const Rational& r) { return r; }
inline Rational imag(const Rational&) { return Rational(0); }
inline Rational abs2(const Rational& r) { return r * r; }

/// Exact complex scalar over Rational. Only the field operations are
/// provided; anything transcendental belongs to the double path.
struct RationalComplex {
  Rational re, im;

  RationalComplex() = default;
  RationalComplex(int n) : re(n), im(0) {}
  RationalComplex(Rational r) : re(std::move(r)), im(0) {}
  RationalComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }

  friend RationalComplex operator+(const RationalComplex& a, const RationalComplex& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend RationalComplex operator-(const RationalComplex& a, const RationalComplex& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend RationalComplex operator*(const RationalComplex& a, const RationalComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend RationalComplex operator/(const RationalComplex& a, const RationalComplex& b) {
    Rational n = b.re * b.re + b.im * b.im;
    if (n.is_zero()) throw std::domain_error("RationalComplex: division by zero");
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  RationalComplex operator-() const { return {-re, -im}; }
  RationalComplex& operator+=(const RationalComplex& o) { *this = *this + o; return *this; }
  RationalComplex& operator-=(const RationalComplex& o) { *this = *this - o; return *this; }
  RationalComplex& operator*=(const RationalComplex& o) { *this = *this * o; return *this; }
  RationalComplex& operator/=(const RationalComplex& o) { *this = *this / o; return *this; }
  friend bool operator==(const RationalComplex& a, const RationalComplex& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const RationalComplex& a, const RationalComplex& b) { return !(a == b); }
  friend std::ostream& operator<<(std::ostream& os, const RationalComplex& z) {
    return os << "(" << z.re << "," << z.im << ")";
  }
};

inline RationalComplex conj(const RationalComplex& z) { return {z.re, -z.im}; }
inline Rational real(const RationalComplex& z) { return z.re; }
inline Rational imag(const RationalComplex& z) { return z.im; }
inline Rational abs2(const RationalComplex& z) { return z.re * z.re + z.im * z.im; }

/// Per-scalar glue: exactness flag, pivot magnitude, zero test.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  using real_type = double;
  static bool is_zero(double v, double tol) { return std::abs(v) <= tol; }
  static double pivot_size(double v) { return std::abs(v); }
  static double from_rational(const Rational& r) { return r.to_double(); }
};

template <>
struct scalar_traits<std::complex<double>> {
  static constexpr bool exact = false;
  using real_type = double;
  static bool is_zero(const std::complex<double>& v, double tol) { return std::abs(v) <= tol; }
  static double pivot_size(const std::complex<double>& v) { return std::abs(v); }
  static std::complex<double> from_rational(const Rational& r) { return {r.to_double(), 0.0}; }
};

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  using real_type = Rational;
  static bool is_zero(const Rational& v, double) { return v.is_zero(); }
  static double pivot_size(const Rational& v) { return std::abs(v.to_double()); }
  static Rational from_rational(const Rational& r) { return r; }
};

template <>
struct scalar_traits<RationalComplex> {
  static constexpr bool exact = true;
  using real_type = Rational;
  static bool is_zero(const RationalComplex& v, double) { return v.is_zero(); }
  static double pivot_size(const RationalComplex& v) { return std::abs(v.to_complex()); }
  static RationalComplex from_rational(const Rational& r) { return {r, Rational(0)}; }
};

template <class S>
double to_double(const S& v) { return v; }
inline double to_double(const Rational& v) { return v.to_double(); }

}  // namespace torsionforge

namespace Eigen {

template <>
struct NumTraits<torsionforge::Rational> {
  using Self = torsionforge::Rational;
  using Real = Self;
  using NonInteger = Self;
  using Literal = Self;
  using Nested = Self;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 60,
    MulCost = 60
  };
  static Self epsilon() { return Self(0); }
  static Self dummy_precision() { return Self(0); }
  static int digits10() { return 0; }
  static Self highest() { return Self(1); }
  static Self lowest() { return Self(-1); }
};

template <>
struct NumTraits<torsionforge::RationalComplex> {
  using Self = torsionforge::RationalComplex;
  using Real = torsionforge::Rational;
  using NonInteger = Self;
  using Literal = Self;
  using Nested = Self;
  enum {
    IsComplex = 1,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 16,
    AddCost = 120,
    MulCost = 240
  };
  static Real epsilon() { return Real(0); }
  static Real dummy_precision() { return Real(0); }
  static int digits10() { return 0; }
};

}  // namespace Eigen

#endif
