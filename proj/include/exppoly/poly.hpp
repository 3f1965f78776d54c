#pragma once

#include <algorithm>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "exppoly/numeric.hpp"

namespace exppoly {

/// Dense univariate polynomial with complex coefficients in ascending degree.
/// The empty coefficient list is the zero polynomial. After trim() the leading
/// coefficient always clears the zero threshold relative to the largest one.
struct Poly {
  std::vector<Cx> coeffs;

  Poly() = default;
  explicit Poly(std::vector<Cx> c) : coeffs(std::move(c)) { trim(); }

  static Poly constant(Cx c) { return Poly(std::vector<Cx>{c}); }

  static Poly monomial(Cx c, int degree) {
    std::vector<Cx> v(static_cast<std::size_t>(degree) + 1, Cx(0.0));
    v.back() = c;
    return Poly(std::move(v));
  }

  bool is_zero() const { return coeffs.empty(); }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }

  /// Largest coefficient magnitude, 0 for the zero polynomial.
  double sup() const {
    double s = 0.0;
    for (const Cx& c : coeffs) s = std::max(s, std::abs(c));
    return s;
  }

  /// Drop trailing coefficients that fall below 1e-12 + 1e-10 * sup().
  void trim() {
    const double thresh = kAbsFloor + kRelEps * sup();
    while (!coeffs.empty() && std::abs(coeffs.back()) <= thresh) coeffs.pop_back();
  }

  Cx eval(Cx z) const {
    Cx acc(0.0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  Poly derivative() const {
    if (coeffs.size() <= 1) return Poly{};
    std::vector<Cx> d(coeffs.size() - 1);
    for (std::size_t i = 1; i < coeffs.size(); ++i) d[i - 1] = coeffs[i] * static_cast<double>(i);
    return Poly(std::move(d));
  }
};

inline Poly add(const Poly& p, const Poly& q) {
  std::vector<Cx> out(std::max(p.coeffs.size(), q.coeffs.size()), Cx(0.0));
  for (std::size_t i = 0; i < p.coeffs.size(); ++i) out[i] += p.coeffs[i];
  for (std::size_t i = 0; i < q.coeffs.size(); ++i) out[i] += q.coeffs[i];
  return Poly(std::move(out));
}

inline Poly scale(const Poly& p, Cx s) {
  if (s == Cx(0.0)) return Poly{};
  std::vector<Cx> out(p.coeffs);
  for (Cx& c : out) c *= s;
  return Poly(std::move(out));
}

inline Poly sub(const Poly& p, const Poly& q) { return add(p, scale(q, Cx(-1.0))); }

inline Poly mul(const Poly& p, const Poly& q) {
  if (p.is_zero() || q.is_zero()) return Poly{};
  std::vector<Cx> out(p.coeffs.size() + q.coeffs.size() - 1, Cx(0.0));
  for (std::size_t i = 0; i < p.coeffs.size(); ++i)
    for (std::size_t j = 0; j < q.coeffs.size(); ++j) out[i + j] += p.coeffs[i] * q.coeffs[j];
  return Poly(std::move(out));
}

namespace detail {

inline bool cx_less(Cx u, Cx v) {
  if (u.real() != v.real()) return u.real() < v.real();
  return u.imag() < v.imag();
}

}  // namespace detail

/// All complex roots of p, with multiplicity, found by Aberth-Ehrlich
/// simultaneous iteration (initial guesses on a Cauchy-bound circle, at most
/// 200 sweeps) followed by a short Newton polish. Every returned root r is
/// certified against |p(r)| <= tol * sum|c_i| * max(1,|r|)^deg; if any root
/// misses that bound the call fails with numeric_error rather than returning
/// unreliable values. The zero or constant polynomial is rejected.
inline std::vector<Cx> poly_roots(const Poly& p_in, double tol) {
  Poly p = p_in;
  p.trim();
  if (p.is_zero()) throw std::invalid_argument("poly_roots: zero polynomial");
  const int n = p.degree();
  if (n < 1) throw std::invalid_argument("poly_roots: constant polynomial has no roots");

  std::vector<Cx> roots;
  if (n == 1) {
    roots.push_back(-p.coeffs[0] / p.coeffs[1]);
  } else {
    const Poly dp = p.derivative();
    double max_low = 0.0;
    for (int i = 0; i < n; ++i) max_low = std::max(max_low, std::abs(p.coeffs[i]));
    const double radius = 1.0 + max_low / std::abs(p.coeffs[n]);

    roots.resize(n);
    for (int j = 0; j < n; ++j) {
      // fixed angular offset so real-coefficient symmetry cannot trap the sweep
      const double th = 2.0 * std::numbers::pi * j / n + 0.4;
      roots[j] = radius * Cx(std::cos(th), std::sin(th));
    }

    const int max_iter = 200;
    for (int it = 0; it < max_iter; ++it) {
      double worst = 0.0;
      for (int i = 0; i < n; ++i) {
        const Cx pv = p.eval(roots[i]);
        if (pv == Cx(0.0)) continue;
        Cx dv = dp.eval(roots[i]);
        if (dv == Cx(0.0)) dv = Cx(kAbsFloor);
        const Cx ratio = pv / dv;
        Cx repulsion(0.0);
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          Cx d = roots[i] - roots[j];
          if (std::abs(d) < 1e-300) d = Cx(1e-300);
          repulsion += Cx(1.0) / d;
        }
        const Cx denom = Cx(1.0) - ratio * repulsion;
        const Cx step = std::abs(denom) > 1e-300 ? ratio / denom : ratio;
        roots[i] -= step;
        worst = std::max(worst, std::abs(step) / (1.0 + std::abs(roots[i])));
      }
      if (worst < 1e-14) break;
    }

    for (Cx& r : roots) {
      for (int t = 0; t < 3; ++t) {
        const Cx pv = p.eval(r);
        const Cx dv = dp.eval(r);
        if (std::abs(dv) < 1e-300) break;
        const Cx cand = r - pv / dv;
        if (std::abs(p.eval(cand)) <= std::abs(pv)) r = cand;
        else break;
      }
    }
  }

  double coeff_sum = 0.0;
  for (const Cx& c : p.coeffs) coeff_sum += std::abs(c);
  for (const Cx& r : roots) {
    const double bound = tol * coeff_sum * std::pow(std::max(1.0, std::abs(r)), n);
    if (!(std::abs(p.eval(r)) <= bound) || !is_finite(r))
      throw numeric_error("poly_roots: iteration did not reach the residual certificate");
  }

  std::sort(roots.begin(), roots.end(), detail::cx_less);
  return roots;
}

/// The n distinct n-th roots of w (just {0} for w = 0), listed from the
/// principal root in order of increasing argument. Each root gets one Newton
/// touch-up so |r^n - w| stays within 1e-12 * |w|.
inline std::vector<Cx> nth_roots(Cx w, int n) {
  if (n < 1) throw std::invalid_argument("nth_roots: n must be >= 1");
  if (w == Cx(0.0)) return {Cx(0.0)};
  const double mag = std::pow(std::abs(w), 1.0 / n);
  const double th0 = std::arg(w) / n;
  std::vector<Cx> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    Cx r = std::polar(mag, th0 + 2.0 * std::numbers::pi * j / n);
    if (n > 1) {
      const Cx rn1 = std::pow(r, n - 1);
      const Cx f = rn1 * r - w;
      r -= f / (static_cast<double>(n) * rn1);
    }
    out.push_back(r);
  }
  return out;
}

/// Greedy clustering of near-coincident roots; each cluster is reported as its
/// centroid with the cluster size as multiplicity.
inline std::vector<std::pair<Cx, int>> cluster_roots(const std::vector<Cx>& roots,
                                                     double tol = 1e-6) {
  std::vector<std::pair<Cx, int>> clusters;
  for (const Cx& r : roots) {
    bool placed = false;
    for (auto& [rep, count] : clusters) {
      if (std::abs(r - rep) <= tol) {
        rep = (rep * static_cast<double>(count) + r) / static_cast<double>(count + 1);
        ++count;
        placed = true;
        break;
      }
    }
    if (!placed) clusters.emplace_back(r, 1);
  }
  return clusters;
}

}  // namespace exppoly
