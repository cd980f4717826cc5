#pragma once

// Exact polynomials in the power basis and in the probabilists' Hermite basis.
//
// Normalization: H_0 = 1, H_1 = x, H_{k+1}(x) = x H_k(x) - k H_{k-1}(x), so
// that E[H_j(Z) H_k(Z)] = delta_jk * k! for Z ~ N(0,1). The physicists'
// polynomials (H_{k+1} = 2x H_k - 2k H_{k-1}) give different coefficients
// everywhere and must not be mixed in.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace hermrank {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Largest degree any exact operation will produce before refusing.
inline constexpr std::size_t kDefaultDegreeCap = 64;

class DegreeCapError : public std::length_error {
 public:
  DegreeCapError(std::size_t degree, std::size_t cap)
      : std::length_error("polynomial degree " + std::to_string(degree) +
                          " exceeds the degree cap " + std::to_string(cap)),
        degree_(degree),
        cap_(cap) {}
  std::size_t degree() const noexcept { return degree_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t degree_;
  std::size_t cap_;
};

struct MonomialBasis {
  static constexpr const char* symbol = "x^";
};
struct HermiteBasis {
  static constexpr const char* symbol = "H";
};

/// Polynomial with exact rational coefficients in a fixed basis. Index k of
/// coeffs() multiplies the k-th basis element (x^k or H_k). Trailing zeros
/// are never stored, so the zero polynomial has an empty coefficient vector.
template <typename Basis>
class Polynomial {
 public:
  using basis_type = Basis;

  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }
  Polynomial(std::initializer_list<Rational> coeffs) : coeffs_(coeffs) { trim(); }

  /// The single basis element of index k (x^k or H_k).
  static Polynomial basis(std::size_t k) {
    std::vector<Rational> c(k + 1);
    c[k] = 1;
    return Polynomial(std::move(c));
  }
  static Polynomial constant(Rational c) { return Polynomial({std::move(c)}); }

  const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }

  /// Coefficient of the k-th basis element; zero past the degree.
  Rational coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Rational(0); }

  bool is_zero() const noexcept { return coeffs_.empty(); }
  bool is_constant() const noexcept { return coeffs_.size() <= 1; }
  /// Index of the highest nonzero coefficient; 0 for the zero polynomial.
  std::size_t degree() const noexcept { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    trim();
    return *this;
  }
  Polynomial& operator*=(const Rational& s) {
    for (auto& c : coeffs_) c *= s;
    trim();
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
  friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }
  friend Polynomial operator-(Polynomial a) { return a *= Rational(-1); }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

  /// Human-readable form, e.g. "2*H2 + 1/3*H1 - 1" or "x^3 - 3*x".
  std::string to_string() const;

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  std::vector<Rational> coeffs_;
};

using MonomialPoly = Polynomial<MonomialBasis>;
using HermitePoly = Polynomial<HermiteBasis>;

inline void check_degree_cap(std::size_t degree, std::size_t cap) {
  if (degree > cap) throw DegreeCapError(degree, cap);
}

namespace detail {

inline std::string basis_term(MonomialBasis, std::size_t k) {
  if (k == 0) return "";
  if (k == 1) return "x";
  return "x^" + std::to_string(k);
}
inline std::string basis_term(HermiteBasis, std::size_t k) {
  return k == 0 ? "" : "H" + std::to_string(k);
}

}  // namespace detail

template <typename Basis>
std::string Polynomial<Basis>::to_string() const {
  if (coeffs_.empty()) return "0";
  std::string out;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    const Rational& c = coeffs_[i];
    if (c == 0) continue;
    const bool negative = c < 0;
    const Rational mag = negative ? Rational(-c) : c;
    if (out.empty()) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    const std::string term = detail::basis_term(Basis{}, i);
    if (term.empty()) {
      out += mag.str();
    } else if (mag == 1) {
      out += term;
    } else {
      out += mag.str() + "*" + term;
    }
  }
  return out;
}

inline MonomialPoly operator*(const MonomialPoly& a, const MonomialPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> c(a.coeffs().size() + b.coeffs().size() - 1);
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    if (a.coeffs()[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs().size(); ++j) c[i + j] += a.coeffs()[i] * b.coeffs()[j];
  }
  return MonomialPoly(std::move(c));
}

}  // namespace hermrank
