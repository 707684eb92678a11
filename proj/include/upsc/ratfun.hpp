#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <vector>

#include "upsc/errors.hpp"

namespace upsc {

/// Polynomial in the Laplace variable s, coefficients stored ascending in
/// power. Trailing zero coefficients are trimmed on construction so the
/// leading coefficient of a nonzero polynomial is nonzero; the zero
/// polynomial is kept as the single coefficient {0}.
template <typename Scalar>
class Polynomial {
 public:
  Polynomial() : coeffs_{Scalar{0}} {}

  Polynomial(std::initializer_list<Scalar> coeffs)
      : coeffs_(coeffs.begin(), coeffs.end()) {
    trim();
  }

  explicit Polynomial(std::vector<Scalar> coeffs) : coeffs_(std::move(coeffs)) {
    trim();
  }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  bool is_zero() const {
    return coeffs_.size() == 1 && coeffs_[0] == Scalar{0};
  }

  const std::vector<Scalar>& coeffs() const { return coeffs_; }

  /// Horner evaluation at a complex point.
  std::complex<double> eval(std::complex<double> s) const {
    std::complex<double> acc{0.0, 0.0};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
      acc = acc * s + std::complex<double>(*it);
    }
    return acc;
  }

  /// Largest coefficient magnitude; scale reference for pole guards.
  double max_coeff_magnitude() const {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, std::abs(std::complex<double>(c)));
    return m;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Scalar> out(std::max(a.coeffs_.size(), b.coeffs_.size()), Scalar{0});
    for (std::size_t k = 0; k < a.coeffs_.size(); ++k) out[k] += a.coeffs_[k];
    for (std::size_t k = 0; k < b.coeffs_.size(); ++k) out[k] += b.coeffs_[k];
    return Polynomial(std::move(out));
  }

  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<Scalar> out(std::max(a.coeffs_.size(), b.coeffs_.size()), Scalar{0});
    for (std::size_t k = 0; k < a.coeffs_.size(); ++k) out[k] += a.coeffs_[k];
    for (std::size_t k = 0; k < b.coeffs_.size(); ++k) out[k] -= b.coeffs_[k];
    return Polynomial(std::move(out));
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial();
    std::vector<Scalar> out(a.coeffs_.size() + b.coeffs_.size() - 1, Scalar{0});
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
        out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Polynomial(std::move(out));
  }

  friend Polynomial operator*(const Polynomial& a, Scalar c) {
    std::vector<Scalar> out = a.coeffs_;
    for (auto& v : out) v *= c;
    return Polynomial(std::move(out));
  }

 private:
  void trim() {
    while (coeffs_.size() > 1 && coeffs_.back() == Scalar{0}) coeffs_.pop_back();
    if (coeffs_.empty()) coeffs_.push_back(Scalar{0});
  }

  std::vector<Scalar> coeffs_;
};

/// Relative guard below which |den(s)| is treated as a pole hit.
inline constexpr double kPoleGuardRel = 1e-12;

/// Ratio of two polynomials in s. No pole-zero cancellation is attempted:
/// arithmetic works on cross-multiplied forms and callers evaluate pointwise.
template <typename Scalar>
class RationalFunction {
 public:
  /// Zero function 0/1.
  RationalFunction() : num_(), den_({Scalar{1}}) {}

  RationalFunction(Polynomial<Scalar> num, Polynomial<Scalar> den)
      : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw DivisionByZeroFunction();
  }

  const Polynomial<Scalar>& num() const { return num_; }
  const Polynomial<Scalar>& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }

  /// num(s)/den(s); raises PoleProximity when |den(s)| falls below the
  /// guard relative to the largest denominator coefficient.
  std::complex<double> eval(std::complex<double> s) const {
    const std::complex<double> d = den_.eval(s);
    const double guard = kPoleGuardRel * den_.max_coeff_magnitude();
    if (std::abs(d) < guard) throw PoleProximity(s, std::abs(d));
    return num_.eval(s) / d;
  }

  friend RationalFunction operator+(const RationalFunction& f, const RationalFunction& g) {
    return RationalFunction(f.num_ * g.den_ + g.num_ * f.den_, f.den_ * g.den_);
  }

  friend RationalFunction operator-(const RationalFunction& f, const RationalFunction& g) {
    return RationalFunction(f.num_ * g.den_ - g.num_ * f.den_, f.den_ * g.den_);
  }

  friend RationalFunction operator*(const RationalFunction& f, const RationalFunction& g) {
    return RationalFunction(f.num_ * g.num_, f.den_ * g.den_);
  }

  friend RationalFunction operator/(const RationalFunction& f, const RationalFunction& g) {
    if (g.num_.is_zero()) throw DivisionByZeroFunction();
    return RationalFunction(f.num_ * g.den_, f.den_ * g.num_);
  }

 private:
  Polynomial<Scalar> num_;
  Polynomial<Scalar> den_;
};

template <typename Scalar>
RationalFunction<Scalar> add(const RationalFunction<Scalar>& f, const RationalFunction<Scalar>& g) {
  return f + g;
}

template <typename Scalar>
RationalFunction<Scalar> mul(const RationalFunction<Scalar>& f, const RationalFunction<Scalar>& g) {
  return f * g;
}

template <typename Scalar>
RationalFunction<Scalar> div(const RationalFunction<Scalar>& f, const RationalFunction<Scalar>& g) {
  return f / g;
}

template <typename Scalar>
RationalFunction<Scalar> scale(const RationalFunction<Scalar>& f, Scalar c) {
  return RationalFunction<Scalar>(f.num() * c, f.den());
}

template <typename Scalar>
std::complex<double> eval(const RationalFunction<Scalar>& f, std::complex<double> s) {
  return f.eval(s);
}

using Polynomiald = Polynomial<double>;
using RationalFunctiond = RationalFunction<double>;

/// Constant function c/1.
inline RationalFunctiond constant(double c) {
  return RationalFunctiond(Polynomiald{c}, Polynomiald{1.0});
}

/// The monomial s.
inline RationalFunctiond monomial_s() {
  return RationalFunctiond(Polynomiald{0.0, 1.0}, Polynomiald{1.0});
}

/// First-order low pass alpha/(s + alpha).
inline RationalFunctiond lowpass(double alpha) {
  if (!(alpha > 0.0)) throw InvalidBandwidth(alpha);
  return RationalFunctiond(Polynomiald{alpha}, Polynomiald{alpha, 1.0});
}

}  // namespace upsc
