#pragma once

#include <optional>
#include <vector>

#include "exppoly/expsum.hpp"
#include "exppoly/numeric.hpp"

namespace exppoly {

/// Data of the equation f'(f - L(f)) - phi (f - a)(f - b) = 0 with
/// L(f) = sum_{i=0}^{k} a_i f^{(i)}, a_k = 1 and a != b.
struct OdeSpec {
  int k = 1;
  std::vector<Cx> a_coeffs;  // a_0 .. a_k, ascending derivative order
  Cx a;
  Cx b;
  std::optional<Cx> phi;

  void validate() const {
    if (k < 1) throw std::invalid_argument("OdeSpec: k must be a positive integer");
    if (static_cast<int>(a_coeffs.size()) != k + 1)
      throw std::invalid_argument("OdeSpec: a_coeffs must have length k + 1");
    for (const Cx& c : a_coeffs)
      if (!is_finite(c)) throw std::invalid_argument("OdeSpec: non-finite coefficient");
    if (a_coeffs.back() != Cx(1.0))
      throw std::invalid_argument("OdeSpec: leading coefficient a_k must be exactly 1");
    if (!is_finite(a) || !is_finite(b))
      throw std::invalid_argument("OdeSpec: non-finite target value");
    if (!(std::abs(a - b) > 0.0)) throw std::invalid_argument("OdeSpec: targets a and b must differ");
    if (phi && !is_finite(*phi)) throw std::invalid_argument("OdeSpec: non-finite phi");
  }
};

/// L(f) = sum a_i f^{(i)}.
inline ExpSum apply_L(const OdeSpec& spec, const ExpSum& f) {
  spec.validate();
  ExpSum acc = scale(f, spec.a_coeffs[0]);
  ExpSum d = f;
  for (int i = 1; i <= spec.k; ++i) {
    d = derivative(d, 1);
    acc = add(acc, scale(d, spec.a_coeffs[i]));
  }
  return acc;
}

/// Residual of the equation together with the magnitude scale of its two
/// constituent products, the reference for every relative zero test on it.
struct Residual {
  ExpSum value;
  double scale = 1.0;
};

inline Residual residual(const OdeSpec& spec, const ExpSum& f, Cx phi) {
  spec.validate();
  const ExpSum p1 = mul(derivative(f, 1), sub(f, apply_L(spec, f)));
  const ExpSum p2 =
      scale(mul(sub(f, from_const(spec.a)), sub(f, from_const(spec.b))), phi);
  return {sub(p1, p2), std::max(sup_scale(p1), sup_scale(p2))};
}

struct VerifyReport {
  double residual_norm = 0.0;  // max coefficient magnitude of the residual
  double scale = 1.0;
  double tolerance = 1e-8;
  bool pass = false;
  ExpSum residual;
};

inline VerifyReport verify(const OdeSpec& spec, const ExpSum& f, Cx phi,
                           double eps_rel = 1e-8) {
  Residual r = residual(spec, f, phi);
  VerifyReport report;
  report.residual_norm = coeff_sup(r.value);
  report.scale = r.scale;
  report.tolerance = eps_rel;
  report.pass = report.residual_norm <= eps_rel * r.scale + kAbsFloor;
  report.residual = std::move(r.value);
  return report;
}

namespace detail {

/// Coefficient-matching estimate of the constant phi: divide the numerator
/// product f'(f - L(f)) by (f - a)(f - b) at the dominant coefficient of the
/// latter. Returns nothing when (f - a)(f - b) is identically zero. No global
/// check is performed here.
inline std::optional<Cx> match_phi(const OdeSpec& spec, const ExpSum& f) {
  const ExpSum q = mul(sub(f, from_const(spec.a)), sub(f, from_const(spec.b)));
  if (q.terms.empty()) return std::nullopt;

  std::size_t best_term = 0, best_idx = 0;
  double best_mag = -1.0;
  for (std::size_t t = 0; t < q.terms.size(); ++t) {
    const auto& cs = q.terms[t].poly.coeffs;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const double m = std::abs(cs[i]);
      if (m > best_mag) {
        best_mag = m;
        best_term = t;
        best_idx = i;
      }
    }
  }

  const ExpSum n = mul(derivative(f, 1), sub(f, apply_L(spec, f)));
  const Cx freq = q.terms[best_term].freq;
  double fmax = std::abs(freq);
  for (const ExpTerm& t : n.terms) fmax = std::max(fmax, std::abs(t.freq));
  const double tau = 1e-9 * (1.0 + fmax);

  Cx num(0.0);  // a missing frequency or degree slot matches as zero
  for (const ExpTerm& t : n.terms) {
    if (std::abs(t.freq - freq) <= tau) {
      if (best_idx < t.poly.coeffs.size()) num = t.poly.coeffs[best_idx];
      break;
    }
  }
  return num / q.terms[best_term].poly.coeffs[best_idx];
}

}  // namespace detail

/// The unique constant phi with residual(spec, f, phi) identically zero, if
/// one exists: coefficient matching at the dominant frequency of
/// (f - a)(f - b), then a full verification of every coefficient. Returns
/// nothing when (f - a)(f - b) vanishes identically or no constant matches.
inline std::optional<Cx> infer_phi(const OdeSpec& spec, const ExpSum& f,
                                   double eps_rel = 1e-8) {
  spec.validate();
  if (is_const(f)) throw std::invalid_argument("infer_phi: f must be non-constant");
  const std::optional<Cx> candidate = detail::match_phi(spec, f);
  if (!candidate) return std::nullopt;
  if (!verify(spec, f, *candidate, eps_rel).pass) return std::nullopt;
  return candidate;
}

}  // namespace exppoly
