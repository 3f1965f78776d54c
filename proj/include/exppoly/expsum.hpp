#pragma once

#include <algorithm>
#include <initializer_list>
#include <vector>

#include "exppoly/numeric.hpp"
#include "exppoly/poly.hpp"

namespace exppoly {

/// One term p(z) * exp(freq * z) of an exponential sum.
struct ExpTerm {
  Cx freq;
  Poly poly;
};

/// Canonical finite sum of ExpTerms. Invariants maintained by every operation:
///   * frequencies pairwise distinct (merge tolerance 1e-9 * (1 + max|freq|)),
///   * terms sorted by (Re freq, Im freq),
///   * no zero coefficient polynomials; the zero function is the empty sum.
/// A constant is a single term with frequency 0 and a degree-0 polynomial.
struct ExpSum {
  std::vector<ExpTerm> terms;
};

// Powering is exponential in principle; fail loudly instead of crawling.
inline constexpr int kMaxPolyDegree = 64;
inline constexpr int kMaxTerms = 4096;

/// Largest coefficient magnitude over all terms; 1 for the empty sum, so it
/// can always serve as the reference scale of a relative zero test.
inline double sup_scale(const ExpSum& f) {
  if (f.terms.empty()) return 1.0;
  double s = 0.0;
  for (const ExpTerm& t : f.terms) s = std::max(s, t.poly.sup());
  return s;
}

/// Largest coefficient magnitude; 0 for the empty sum.
inline double coeff_sup(const ExpSum& f) {
  double s = 0.0;
  for (const ExpTerm& t : f.terms) s = std::max(s, t.poly.sup());
  return s;
}

namespace detail {

inline bool term_less(const ExpTerm& u, const ExpTerm& v) { return cx_less(u.freq, v.freq); }

}  // namespace detail

/// Rebuild the canonical form from an arbitrary term list: merge frequencies
/// within tolerance, drop coefficients below 1e-12 of their own polynomial's
/// sup, drop empty polynomials, sort. All stored values must be finite.
inline ExpSum canonicalize(std::vector<ExpTerm> raw) {
  double fmax = 0.0;
  for (const ExpTerm& t : raw) {
    if (!is_finite(t.freq)) throw numeric_error("ExpSum: non-finite frequency");
    fmax = std::max(fmax, std::abs(t.freq));
  }
  const double tau = 1e-9 * (1.0 + fmax);

  std::vector<ExpTerm> groups;
  for (ExpTerm& t : raw) {
    if (t.poly.is_zero()) continue;
    bool merged = false;
    for (ExpTerm& g : groups) {
      if (std::abs(t.freq - g.freq) <= tau) {
        g.poly = add(g.poly, t.poly);
        merged = true;
        break;
      }
    }
    if (!merged) groups.push_back(std::move(t));
  }

  ExpSum out;
  for (ExpTerm& g : groups) {
    const double drop = 1e-12 * g.poly.sup();
    for (Cx& c : g.poly.coeffs) {
      if (!is_finite(c)) throw numeric_error("ExpSum: non-finite coefficient");
      if (std::abs(c) <= drop) c = Cx(0.0);
    }
    g.poly.trim();
    if (!g.poly.is_zero()) out.terms.push_back(std::move(g));
  }
  std::sort(out.terms.begin(), out.terms.end(), detail::term_less);
  if (static_cast<int>(out.terms.size()) > kMaxTerms)
    throw numeric_error("ExpSum: term count cap exceeded");
  return out;
}

/// Building block of make(): coeff * z^degree * exp(freq * z).
struct MakePart {
  Cx coeff;
  Cx freq;
  int degree = 0;
};

inline ExpSum make(const std::vector<MakePart>& parts) {
  std::vector<ExpTerm> raw;
  raw.reserve(parts.size());
  for (const MakePart& p : parts) {
    if (p.degree < 0) throw std::invalid_argument("make: negative degree");
    if (p.degree > kMaxPolyDegree) throw numeric_error("make: degree cap exceeded");
    raw.push_back({p.freq, Poly::monomial(p.coeff, p.degree)});
  }
  return canonicalize(std::move(raw));
}

inline ExpSum make(std::initializer_list<MakePart> parts) {
  return make(std::vector<MakePart>(parts));
}

inline ExpSum from_const(Cx c) {
  if (c == Cx(0.0)) return ExpSum{};
  return ExpSum{{ExpTerm{Cx(0.0), Poly::constant(c)}}};
}

inline ExpSum add(const ExpSum& f, const ExpSum& g) {
  std::vector<ExpTerm> raw = f.terms;
  raw.insert(raw.end(), g.terms.begin(), g.terms.end());
  return canonicalize(std::move(raw));
}

inline ExpSum scale(const ExpSum& f, Cx s) {
  if (s == Cx(0.0)) return ExpSum{};
  std::vector<ExpTerm> raw = f.terms;
  for (ExpTerm& t : raw) t.poly = scale(t.poly, s);
  return canonicalize(std::move(raw));
}

inline ExpSum sub(const ExpSum& f, const ExpSum& g) { return add(f, scale(g, Cx(-1.0))); }

inline ExpSum mul(const ExpSum& f, const ExpSum& g) {
  if (f.terms.empty() || g.terms.empty()) return ExpSum{};
  if (f.terms.size() * g.terms.size() > (1u << 20))
    throw numeric_error("mul: term pair count cap exceeded");
  std::vector<ExpTerm> raw;
  raw.reserve(f.terms.size() * g.terms.size());
  for (const ExpTerm& tf : f.terms) {
    for (const ExpTerm& tg : g.terms) {
      if (tf.poly.degree() + tg.poly.degree() > kMaxPolyDegree)
        throw numeric_error("mul: degree cap exceeded");
      raw.push_back({tf.freq + tg.freq, mul(tf.poly, tg.poly)});
    }
  }
  return canonicalize(std::move(raw));
}

/// f^n by repeated squaring; pow(f, 0) is the constant 1.
inline ExpSum pow(const ExpSum& f, int n) {
  if (n < 0) throw std::invalid_argument("pow: negative exponent");
  ExpSum result = from_const(Cx(1.0));
  ExpSum base = f;
  while (n > 0) {
    if (n & 1) result = mul(result, base);
    n >>= 1;
    if (n) base = mul(base, base);
  }
  return result;
}

/// n-fold exact differentiation: d/dz [p(z) e^{mu z}] = (p' + mu p) e^{mu z}.
inline ExpSum derivative(const ExpSum& f, int n = 1) {
  if (n < 1) throw std::invalid_argument("derivative: order must be positive");
  ExpSum cur = f;
  for (int rep = 0; rep < n; ++rep) {
    std::vector<ExpTerm> raw;
    raw.reserve(cur.terms.size());
    for (const ExpTerm& t : cur.terms)
      raw.push_back({t.freq, add(t.poly.derivative(), scale(t.poly, t.freq))});
    cur = canonicalize(std::move(raw));
  }
  return cur;
}

/// True iff every coefficient magnitude is at most eps_rel * scale + 1e-12.
/// The caller passes the sup_scale of whatever inputs produced f.
inline bool is_zero(const ExpSum& f, double scale, double eps_rel) {
  if (!(scale > 0.0)) throw std::invalid_argument("is_zero: scale must be positive");
  const double bound = eps_rel * scale + kAbsFloor;
  for (const ExpTerm& t : f.terms)
    for (const Cx& c : t.poly.coeffs)
      if (std::abs(c) > bound) return false;
  return true;
}

/// Pointwise value sum p_j(z) exp(mu_j z). Overflow to a non-finite value is
/// reported as numeric_error, never returned.
inline Cx eval(const ExpSum& f, Cx z) {
  Cx acc(0.0);
  for (const ExpTerm& t : f.terms) {
    const Cx v = t.poly.eval(z) * std::exp(t.freq * z);
    if (!is_finite(v)) throw numeric_error("eval: overflow");
    acc += v;
  }
  if (!is_finite(acc)) throw numeric_error("eval: overflow");
  return acc;
}

/// Constant detection: empty sum or a single frequency-0 degree-0 term.
inline bool is_const(const ExpSum& f) {
  if (f.terms.empty()) return true;
  return f.terms.size() == 1 && near_zero(f.terms[0].freq) && f.terms[0].poly.degree() == 0;
}

inline Cx const_value(const ExpSum& f) {
  if (f.terms.empty()) return Cx(0.0);
  if (!is_const(f)) throw std::invalid_argument("const_value: not a constant");
  return f.terms[0].poly.coeffs[0];
}

}  // namespace exppoly
