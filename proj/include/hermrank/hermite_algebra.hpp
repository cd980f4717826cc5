#pragma once

// Exact Hermite-basis algebra: basis changes, products via the
// linearization formula, composition, Hermite rank and Gaussian moments.

#include <cstddef>
#include <optional>
#include <vector>

#include "hermrank/polynomial.hpp"

namespace hermrank {

inline Integer factorial(unsigned n) {
  Integer r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

inline Integer binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  Integer r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

/// Power-basis form of p, built from H_{k+1} = x H_k - k H_{k-1}.
inline MonomialPoly hermite_to_monomial(const HermitePoly& p) {
  if (p.is_zero()) return {};
  const std::size_t n = p.degree();
  std::vector<Rational> out(n + 1);
  std::vector<Rational> prev;       // H_{k-1}
  std::vector<Rational> cur{1};     // H_k, starting at k = 0
  for (std::size_t k = 0;; ++k) {
    const Rational& ck = p.coeffs()[k];
    if (ck != 0)
      for (std::size_t j = 0; j < cur.size(); ++j) out[j] += ck * cur[j];
    if (k == n) break;
    std::vector<Rational> next(cur.size() + 1);
    for (std::size_t j = 0; j < cur.size(); ++j) next[j + 1] += cur[j];
    for (std::size_t j = 0; j < prev.size(); ++j) next[j] -= Rational(static_cast<long long>(k)) * prev[j];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return MonomialPoly(std::move(out));
}

/// Multiply a Hermite-basis polynomial by x using x H_k = H_{k+1} + k H_{k-1}.
inline HermitePoly times_x(const HermitePoly& h) {
  if (h.is_zero()) return {};
  std::vector<Rational> out(h.coeffs().size() + 1);
  for (std::size_t k = 0; k < h.coeffs().size(); ++k) {
    const Rational& c = h.coeffs()[k];
    if (c == 0) continue;
    out[k + 1] += c;
    if (k > 0) out[k - 1] += Rational(static_cast<long long>(k)) * c;
  }
  return HermitePoly(std::move(out));
}

/// Hermite-basis form of p by Horner's scheme in the Hermite basis.
inline HermitePoly monomial_to_hermite(const MonomialPoly& p) {
  HermitePoly acc;
  for (std::size_t i = p.coeffs().size(); i-- > 0;) {
    acc = times_x(acc);
    acc += HermitePoly::constant(p.coeffs()[i]);
  }
  return acc;
}

/// Exact product in the Hermite basis via
/// H_j H_k = sum_{r=0}^{min(j,k)} r! C(j,r) C(k,r) H_{j+k-2r}.
inline HermitePoly multiply(const HermitePoly& a, const HermitePoly& b,
                            std::size_t degree_cap = kDefaultDegreeCap) {
  if (a.is_zero() || b.is_zero()) return {};
  check_degree_cap(a.degree() + b.degree(), degree_cap);
  std::vector<Rational> out(a.degree() + b.degree() + 1);
  for (unsigned j = 0; j <= a.degree(); ++j) {
    const Rational& aj = a.coeffs()[j];
    if (aj == 0) continue;
    for (unsigned k = 0; k <= b.degree(); ++k) {
      const Rational& bk = b.coeffs()[k];
      if (bk == 0) continue;
      const Rational ab = aj * bk;
      for (unsigned r = 0; r <= std::min(j, k); ++r) {
        const Integer w = factorial(r) * binomial(j, r) * binomial(k, r);
        out[j + k - 2 * r] += ab * Rational(w);
      }
    }
  }
  return HermitePoly(std::move(out));
}

inline HermitePoly operator*(const HermitePoly& a, const HermitePoly& b) { return multiply(a, b); }

/// Hermite expansion of q(p(x)). The composition is carried out in the power
/// basis (Horner over polynomials) and converted back.
inline HermitePoly compose(const MonomialPoly& q, const HermitePoly& p,
                           std::size_t degree_cap = kDefaultDegreeCap) {
  if (!p.is_constant()) check_degree_cap(q.degree() * p.degree(), degree_cap);
  const MonomialPoly inner = hermite_to_monomial(p);
  MonomialPoly acc;
  for (std::size_t i = q.coeffs().size(); i-- > 0;) {
    acc = acc * inner;
    acc += MonomialPoly::constant(q.coeffs()[i]);
  }
  return monomial_to_hermite(acc);
}

/// Smallest k >= 1 with a nonzero H_k coefficient; empty for constants.
inline std::optional<unsigned> hermite_rank(const HermitePoly& p) {
  for (std::size_t k = 1; k < p.coeffs().size(); ++k)
    if (p.coeffs()[k] != 0) return static_cast<unsigned>(k);
  return std::nullopt;
}

/// H_m^2 = sum_{k=0}^m k! C(m,k)^2 H_{2m-2k}, evaluated term by term.
inline HermitePoly square_hermite(unsigned m) {
  std::vector<Rational> out(2 * m + 1);
  for (unsigned k = 0; k <= m; ++k) {
    const Integer b = binomial(m, k);
    out[2 * m - 2 * k] += Rational(factorial(k) * b * b);
  }
  return HermitePoly(std::move(out));
}

/// H_m^3 from the double sum over (k1, k2) with index 3m - 2k1 - 2k2.
inline HermitePoly cube_hermite(unsigned m) {
  std::vector<Rational> out(3 * m + 1);
  for (unsigned k1 = 0; k1 <= m; ++k1) {
    const Integer b1 = binomial(m, k1);
    const unsigned inner = 2 * m - 2 * k1;
    for (unsigned k2 = 0; k2 <= std::min(inner, m); ++k2) {
      const Integer w = factorial(k1) * factorial(k2) * b1 * b1 * binomial(inner, k2) * binomial(m, k2);
      out[3 * m - 2 * k1 - 2 * k2] += Rational(w);
    }
  }
  return HermitePoly(std::move(out));
}

struct GaussianMoments {
  Rational mean;
  Rational variance;
};

/// Mean and variance of p(Z), Z ~ N(0,1): c_0 and sum_{k>=1} c_k^2 k!.
inline GaussianMoments gaussian_moments(const HermitePoly& p) {
  GaussianMoments m{p.coeff(0), 0};
  for (unsigned k = 1; k < p.coeffs().size(); ++k) {
    const Rational& c = p.coeffs()[k];
    if (c != 0) m.variance += c * c * Rational(factorial(k));
  }
  return m;
}

/// Floating-point copy of the coefficients, for evaluation and covariance work.
template <typename Real, typename Basis>
std::vector<Real> coefficients_as(const Polynomial<Basis>& p) {
  std::vector<Real> out;
  out.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) out.push_back(static_cast<Real>(c));
  return out;
}

}  // namespace hermrank
