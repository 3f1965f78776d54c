#pragma once

#include <array>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "exppoly/ode.hpp"
#include "exppoly/poly.hpp"

namespace exppoly {

/// Solution family tags. C1..C6 are the inhomogeneous families; HOM is the
/// phi == 0 branch L(f) == f governed by the characteristic polynomial.
enum class CaseTag { C1, C2, C3, C4, C5, C6, HOM };

inline const char* to_string(CaseTag t) {
  switch (t) {
    case CaseTag::C1: return "C1";
    case CaseTag::C2: return "C2";
    case CaseTag::C3: return "C3";
    case CaseTag::C4: return "C4";
    case CaseTag::C5: return "C5";
    case CaseTag::C6: return "C6";
    case CaseTag::HOM: return "HOM";
  }
  return "?";
}

inline std::optional<CaseTag> case_tag_from_string(const std::string& s) {
  for (CaseTag t : {CaseTag::C1, CaseTag::C2, CaseTag::C3, CaseTag::C4, CaseTag::C5,
                    CaseTag::C6, CaseTag::HOM})
    if (s == to_string(t)) return t;
  return std::nullopt;
}

/// One enumerated solution family instance. Free parameters are pinned to the
/// recorded defaults; `verified` is set exactly when the residual check at
/// eps_rel passes.
struct SolutionCandidate {
  CaseTag case_tag = CaseTag::C1;
  std::map<std::string, Cx> params;
  std::optional<int> m;  // two-frequency branch index (C5 only)
  ExpSum f;
  Cx phi;
  std::vector<std::pair<std::string, double>> constraint_residuals;
  bool verified = false;
};

struct ClassifyOptions {
  Cx c1_default = Cx(1.0);   // free coefficient of the C5 family
  int branch_bound = 3;      // logarithm branch scan range for C5 coupling
  double eps_rel = 1e-8;     // residual verification tolerance
  double tol_constraint = 1e-8;  // over-determined constraint filters (C3..C5)
  double root_tol = 1e-10;   // certificate tolerance handed to poly_roots
  double zero_guard = 1e-12; // |x| below this counts as a vanishing parameter
  double dedup_tol = 1e-8;
};

namespace detail {

inline double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

inline Cx horner_sum(const std::vector<Cx>& coeffs, Cx x) {
  Cx acc(0.0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

inline bool all_zero(const std::vector<Cx>& cs, std::size_t lo, std::size_t hi, double guard) {
  for (std::size_t i = lo; i < hi && i < cs.size(); ++i)
    if (std::abs(cs[i]) > guard) return false;
  return true;
}

inline void log_line(std::vector<std::string>* log, std::string msg) {
  if (log) log->push_back(std::move(msg));
}

/// Distinct nonzero roots of the degree-k constraint polynomial
/// sum a_i x^i - target, clusters collapsed to a single representative.
/// Root-finder failure surfaces as an empty list plus a log entry, so the
/// enumerations themselves never throw on valid specs.
inline std::vector<Cx> constraint_roots(const OdeSpec& spec, Cx target,
                                        const ClassifyOptions& opts,
                                        std::vector<std::string>* log = nullptr) {
  std::vector<Cx> coeffs = spec.a_coeffs;
  coeffs[0] -= target;
  std::vector<Cx> out;
  try {
    for (const auto& [root, mult] : cluster_roots(poly_roots(Poly(coeffs), opts.root_tol)))
      if (std::abs(root) > 1e-8) out.push_back(root);
  } catch (const numeric_error& e) {
    log_line(log, std::string("constraint roots unavailable: ") + e.what());
  }
  return out;
}

}  // namespace detail

/// Families f = A e^{lz} + a with sum a_i l^i = (b - a a_0)/(b - a), and
/// f = A e^{lz} + b with sum a_i l^i = (a - a_0 b)/(a - b). A defaults to 1;
/// phi comes from coefficient matching and the verified flag from the full
/// residual check.
inline std::vector<SolutionCandidate> enumerate_case12(const OdeSpec& spec,
                                                       const ClassifyOptions& opts = {}) {
  spec.validate();
  std::vector<SolutionCandidate> out;
  const Cx a0 = spec.a_coeffs[0];
  const struct {
    CaseTag tag;
    Cx target;
    Cx base;
  } branches[2] = {
      {CaseTag::C1, (spec.b - spec.a * a0) / (spec.b - spec.a), spec.a},
      {CaseTag::C2, (spec.a - a0 * spec.b) / (spec.a - spec.b), spec.b},
  };
  for (const auto& br : branches) {
    for (const Cx& lambda : detail::constraint_roots(spec, br.target, opts)) {
      SolutionCandidate cand;
      cand.case_tag = br.tag;
      cand.params = {{"A", Cx(1.0)}, {"lambda", lambda}};
      cand.f = add(make({{Cx(1.0), lambda, 0}}), from_const(br.base));
      const std::optional<Cx> phi = detail::match_phi(spec, cand.f);
      cand.phi = phi.value_or(Cx(0.0));
      cand.constraint_residuals = {
          {"constraint_poly", std::abs(detail::horner_sum(spec.a_coeffs, lambda) - br.target)}};
      cand.verified = verify(spec, cand.f, cand.phi, opts.eps_rel).pass;
      out.push_back(std::move(cand));
    }
  }
  return out;
}

/// Family f = ((d0/l) e^{lz} + d1)^{k+1} + a with phi = l, where
/// l^k = (-1)^{k+1} / ((k+1)(k+1)!), d1^{k+1} = b - a, and the operator must
/// satisfy sum a_i ((k+1) l)^i = k. Requires k >= 2 and (a_1..a_{k-1}) != 0.
/// d0 defaults to l, which makes the leading coefficient 1.
inline std::vector<SolutionCandidate> enumerate_case3(const OdeSpec& spec,
                                                      const ClassifyOptions& opts = {}) {
  spec.validate();
  std::vector<SolutionCandidate> out;
  if (spec.k < 2) return out;
  if (detail::all_zero(spec.a_coeffs, 1, static_cast<std::size_t>(spec.k), opts.zero_guard))
    return out;

  const int k = spec.k;
  const double sign = (k % 2 == 0) ? -1.0 : 1.0;  // (-1)^{k+1}
  const Cx rhs = Cx(sign / ((k + 1) * detail::factorial(k + 1)));
  for (const Cx& lambda : nth_roots(rhs, k)) {
    const Cx op_sum = detail::horner_sum(spec.a_coeffs, Cx(k + 1.0) * lambda);
    const double op_resid = std::abs(op_sum - Cx(static_cast<double>(k)));
    if (op_resid > opts.tol_constraint) continue;
    for (const Cx& d1 : nth_roots(spec.b - spec.a, k + 1)) {
      try {
        SolutionCandidate cand;
        cand.case_tag = CaseTag::C3;
        cand.params = {{"lambda", lambda}, {"d0", lambda}, {"d1", d1}};
        cand.f = add(pow(add(make({{Cx(1.0), lambda, 0}}), from_const(d1)), k + 1),
                     from_const(spec.a));
        cand.phi = lambda;
        cand.constraint_residuals = {
            {"lambda_pow_k", std::abs(std::pow(lambda, k) - rhs)},
            {"operator_sum", op_resid},
            {"d1_pow_k1", std::abs(std::pow(d1, k + 1) - (spec.b - spec.a))}};
        cand.verified = verify(spec, cand.f, cand.phi, opts.eps_rel).pass;
        out.push_back(std::move(cand));
      } catch (const numeric_error&) {
        // cap overrun while powering; the family is skipped, not fatal
      }
    }
  }
  return out;
}

/// Family f = (c0 e^{lz} + c1)^k + a with phi = c, where
/// c^k = (-1)^k a (1 - a_0)(b - a a_0)^k / (k! (b - a)^{k+1}),
/// l = (b - a) c / (b - a a_0), c1^k = b - a, and the operator must satisfy
/// k l - k l sum a_i (k l)^i - c = 0. c0 defaults to 1.
inline std::vector<SolutionCandidate> enumerate_case4(const OdeSpec& spec,
                                                      const ClassifyOptions& opts = {},
                                                      std::vector<std::string>* log = nullptr) {
  spec.validate();
  std::vector<SolutionCandidate> out;
  const int k = spec.k;
  const Cx a0 = spec.a_coeffs[0];
  if (std::abs(spec.a) <= opts.zero_guard) {
    detail::log_line(log, "C4: skipped, a == 0");
    return out;
  }
  if (std::abs(a0 - Cx(1.0)) <= opts.zero_guard) {
    detail::log_line(log, "C4: skipped, a_0 == 1");
    return out;
  }
  if (detail::all_zero(spec.a_coeffs, 0, static_cast<std::size_t>(k), opts.zero_guard)) {
    detail::log_line(log, "C4: skipped, a_0..a_{k-1} all zero");
    return out;
  }
  const Cx b_minus_aa0 = spec.b - spec.a * a0;
  if (std::abs(b_minus_aa0) <= opts.zero_guard) {
    detail::log_line(log, "C4: skipped, b - a a_0 == 0");
    return out;
  }

  const double sign = (k % 2 == 0) ? 1.0 : -1.0;  // (-1)^k
  const Cx rhs = Cx(sign) * spec.a * (Cx(1.0) - a0) * std::pow(b_minus_aa0, k) /
                 (detail::factorial(k) * std::pow(spec.b - spec.a, k + 1));
  for (const Cx& c : nth_roots(rhs, k)) {
    if (std::abs(c) <= opts.zero_guard) continue;
    const Cx lambda = (spec.b - spec.a) * c / b_minus_aa0;
    if (std::abs(lambda) <= opts.zero_guard) continue;
    const Cx kl = Cx(static_cast<double>(k)) * lambda;
    const Cx filt = kl - kl * detail::horner_sum(spec.a_coeffs, kl) - c;
    if (std::abs(filt) > opts.tol_constraint) continue;
    for (const Cx& c1 : nth_roots(spec.b - spec.a, k)) {
      try {
        SolutionCandidate cand;
        cand.case_tag = CaseTag::C4;
        cand.params = {{"c0", Cx(1.0)}, {"c1", c1}, {"c", c}, {"lambda", lambda}};
        cand.f = add(pow(add(make({{Cx(1.0), lambda, 0}}), from_const(c1)), k),
                     from_const(spec.a));
        cand.phi = c;
        cand.constraint_residuals = {{"phi_pow_k", std::abs(std::pow(c, k) - rhs)},
                                     {"operator_sum", std::abs(filt)},
                                     {"c1_pow_k", std::abs(std::pow(c1, k) - (spec.b - spec.a))}};
        cand.verified = verify(spec, cand.f, cand.phi, opts.eps_rel).pass;
        out.push_back(std::move(cand));
      } catch (const numeric_error& e) {
        detail::log_line(log, std::string("C4: candidate construction failed: ") + e.what());
      }
    }
  }
  return out;
}

namespace detail {

/// Quadratic constraints on phi = c for the two-frequency family, indexed by
/// m. Coefficients are (c^2, c^1, c^0).
inline std::vector<std::array<Cx, 3>> case5_quadratics(const OdeSpec& spec, int m) {
  const double k = spec.k;
  const Cx a0 = spec.a_coeffs[0];
  const Cx akm1 = spec.a_coeffs[spec.k - 1];
  const Cx akm2 = spec.a_coeffs[spec.k - 2];
  const Cx ba = spec.b - spec.a;
  const Cx one_a0 = Cx(1.0) - a0;
  const double mm = m * (m - k) / ((2.0 * m - k) * (2.0 * m - k));
  const Cx a2 = spec.a * spec.a;

  std::vector<std::array<Cx, 3>> quads;
  quads.push_back({Cx(4.0 * mm - 2.0 * k * k + 2.0 * k) * ba * ba,
                   Cx(-k) * Cx(8.0 * mm + k * k * k - 2.0 * k * k + 3.0 * k + 2.0) * spec.a *
                       ba * akm1,
                   Cx(k * k) * Cx(4.0 * k * mm + k * k * k - 2.0 * k * k + 3.0 * k + 2.0) *
                           a2 * one_a0 * akm1 * akm1 -
                       Cx(k * k * k * (k + 1.0) * (k + 1.0)) * a2 * one_a0 * one_a0 * akm2});
  quads.push_back({Cx(4.0 * mm + k * (k + 1.0) * (k * k + k + 2.0)) * ba * ba,
                   Cx(-k) * Cx(8.0 * mm + 2.0 * k * (k + 1.0)) * spec.a * ba * akm1,
                   Cx(4.0 * k * k * k * mm) * a2 * one_a0 * one_a0 * akm1 * akm1});
  quads.push_back({Cx(4.0) * Cx(mm - k * k - 1.0) * ba * ba,
                   Cx(-k) * Cx(8.0 * mm + k * k * k - 6.0 * k * k + 5.0 * k - 4.0) * spec.a *
                       ba * akm1,
                   Cx(k * k) * Cx(4.0 * k * mm + k * k * k - 2.0 * k * k + 3.0 * k - 2.0) *
                           a2 * one_a0 * akm1 * akm1 +
                       Cx(2.0 * k * (k + 1.0)) * spec.a * ba * akm1 -
                       Cx(k * k * k * (k + 1.0) * (k + 1.0)) * a2 * one_a0 * akm2});
  return quads;
}

}  // namespace detail

/// Family f = (c1 e^{l1 z} + c2 e^{l2 z})^k + a with phi = c, for branch
/// indices 1 <= m <= k-1, 2m != k. The frequencies follow from c and m, c
/// solves one of three quadratics, and c2 is pinned by the coupling relation
///   (a(1-a_0) / (k! c2^k (l2-l1)^k))^{l1} = (a(1-a_0) / (k! c1^k (l1-l2)^k))^{l2},
/// solved for each logarithm branch 2 pi i n, |n| <= branch_bound, by complex
/// Newton on the principal-branch log form. Only candidates that pass the
/// residual check are returned; skipped branches go to the log.
inline std::vector<SolutionCandidate> enumerate_case5(const OdeSpec& spec, Cx c1_default,
                                                      int branch_bound,
                                                      const ClassifyOptions& opts = {},
                                                      std::vector<std::string>* log = nullptr) {
  spec.validate();
  std::vector<SolutionCandidate> out;
  const int k = spec.k;
  const Cx a0 = spec.a_coeffs[0];
  if (k < 2) return out;
  if (std::abs(spec.a) <= opts.zero_guard || std::abs(a0 - Cx(1.0)) <= opts.zero_guard)
    return out;
  if (std::abs(spec.a_coeffs[k - 1]) <= opts.zero_guard &&
      std::abs(spec.a_coeffs[k - 2]) <= opts.zero_guard)
    return out;
  if (std::abs(c1_default) <= opts.zero_guard)
    throw std::invalid_argument("enumerate_case5: c1_default must be nonzero");

  const Cx one_a0 = Cx(1.0) - a0;
  const double kfac = detail::factorial(k);
  static const char* quad_names[3] = {"quadratic_i", "quadratic_ii", "quadratic_iii"};

  for (int m = 1; m <= k - 1; ++m) {
    if (2 * m == k) continue;  // frequency formulas divide by 2m - k
    const auto quads = detail::case5_quadratics(spec, m);
    for (std::size_t qi = 0; qi < quads.size(); ++qi) {
      const auto& [qa, qb, qc] = quads[qi];
      std::vector<Cx> roots;
      if (std::abs(qa) > opts.zero_guard) {
        try {
          roots = poly_roots(Poly({qc, qb, qa}), opts.root_tol);
        } catch (const numeric_error& e) {
          detail::log_line(log, std::string("C5: quadratic root failure: ") + e.what());
          continue;
        } catch (const std::invalid_argument&) {
          continue;  // coefficients trimmed to a constant
        }
      } else if (std::abs(qb) > opts.zero_guard) {
        roots = {-qc / qb};
      } else {
        continue;
      }
      for (const Cx& c : roots) {
        if (std::abs(c) <= opts.zero_guard) continue;
        const Cx num = Cx(2.0) * (spec.b - spec.a) * c -
                       Cx(2.0 * k) * spec.a * one_a0 * spec.a_coeffs[k - 1];
        const Cx den = Cx(static_cast<double>(k) * k * (k + 1) * (2 * m - k)) * spec.a * one_a0;
        const Cx lambda1 = Cx(static_cast<double>(m - k)) * num / den;
        const Cx lambda2 = Cx(static_cast<double>(m)) * num / den;
        if (std::abs(lambda1) <= opts.zero_guard || std::abs(lambda2) <= opts.zero_guard ||
            std::abs(lambda1 - lambda2) <= opts.zero_guard)
          continue;

        const Cx diff = lambda1 - lambda2;
        const Cx y = spec.a * one_a0 / (kfac * std::pow(c1_default, k) * std::pow(diff, k));
        const Cx x0 = spec.a * one_a0 / (kfac * std::pow(-diff, k));
        if (!is_finite(y) || !is_finite(x0) || y == Cx(0.0) || x0 == Cx(0.0)) continue;

        for (int n = -branch_bound; n <= branch_bound; ++n) {
          const Cx target = Cx(0.0, 2.0 * std::numbers::pi * n);
          // l1 Log(x0 c2^{-k}) - l2 Log(y) = 2 pi i n, Newton in c2 from the
          // direct principal-branch solution
          Cx c2 = std::exp((lambda1 * std::log(x0) - lambda2 * std::log(y) - target) /
                           (Cx(static_cast<double>(k)) * lambda1));
          if (!is_finite(c2) || c2 == Cx(0.0)) {
            detail::log_line(log, "C5: branch seed overflow, m=" + std::to_string(m));
            continue;
          }
          bool converged = false;
          for (int it = 0; it < 30; ++it) {
            const Cx xc = x0 / std::pow(c2, k);
            if (!is_finite(xc) || xc == Cx(0.0)) break;
            const Cx g = lambda1 * std::log(xc) - lambda2 * std::log(y) - target;
            if (std::abs(g) <= 1e-13 * (1.0 + std::abs(lambda1))) {
              converged = true;
              break;
            }
            c2 -= g * c2 / (Cx(-static_cast<double>(k)) * lambda1);
            if (!is_finite(c2) || c2 == Cx(0.0)) break;
          }
          if (!converged) {
            detail::log_line(log, "C5: Newton did not converge, m=" + std::to_string(m) +
                                      " n=" + std::to_string(n));
            continue;
          }
          const Cx lhs = std::pow(x0 / std::pow(c2, k), lambda1);
          const Cx rhs = std::pow(y, lambda2);
          const double coupling =
              std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + kAbsFloor);
          if (!(coupling <= 1e-8)) continue;

          try {
            SolutionCandidate cand;
            cand.case_tag = CaseTag::C5;
            cand.params = {{"c1", c1_default},
                           {"c2", c2},
                           {"lambda1", lambda1},
                           {"lambda2", lambda2},
                           {"c", c}};
            cand.m = m;
            cand.f = add(pow(make({{c1_default, lambda1, 0}, {c2, lambda2, 0}}), k),
                         from_const(spec.a));
            cand.phi = c;
            cand.constraint_residuals = {
                {quad_names[qi], std::abs((qa * c + qb) * c + qc)},
                {"coupling", coupling}};
            if (!verify(spec, cand.f, cand.phi, opts.eps_rel).pass) continue;
            cand.verified = true;
            out.push_back(std::move(cand));
          } catch (const numeric_error& e) {
            detail::log_line(log, std::string("C5: candidate construction failed: ") + e.what());
          }
        }
      }
    }
  }
  return out;
}

/// Family f = c0 e^z + c1 e^{-z} with phi = 0, only for k = 2 with
/// (a_0, a_1) = (0, 0) and a != 0; the product constraint c0 c1 = a^2 / 4
/// pins c1 once c0 defaults to 1.
inline std::vector<SolutionCandidate> enumerate_case6(const OdeSpec& spec,
                                                      const ClassifyOptions& opts = {}) {
  spec.validate();
  std::vector<SolutionCandidate> out;
  if (spec.k != 2) return out;
  if (std::abs(spec.a_coeffs[0]) > opts.zero_guard ||
      std::abs(spec.a_coeffs[1]) > opts.zero_guard)
    return out;
  if (std::abs(spec.a) <= opts.zero_guard) return out;

  const Cx c1 = spec.a * spec.a / Cx(4.0);
  SolutionCandidate cand;
  cand.case_tag = CaseTag::C6;
  cand.params = {{"c0", Cx(1.0)}, {"c1", c1}};
  cand.f = make({{Cx(1.0), Cx(1.0), 0}, {c1, Cx(-1.0), 0}});
  cand.phi = Cx(0.0);
  cand.constraint_residuals = {
      {"product_constraint", std::abs(Cx(1.0) * c1 - spec.a * spec.a / Cx(4.0))}};
  cand.verified = verify(spec, cand.f, cand.phi, opts.eps_rel).pass;
  out.push_back(std::move(cand));
  return out;
}

/// phi == 0 branch L(f) == f. Roots of the characteristic polynomial
/// x^k + a_{k-1} x^{k-1} + ... + a_1 x + (a_0 - 1) give single exponentials
/// f = A e^{lz} (+ a exactly when a_0 == 1, the branch where f - a stays
/// zero-free); for k = 2 with (a_0, a_1) = (0, 0) and a != 0 the two-term
/// combination c0 e^z + c1 e^{-z} with c0 c1 = a^2 / 4 joins them.
inline std::vector<SolutionCandidate> homogeneous_solutions(const OdeSpec& spec,
                                                            const ClassifyOptions& opts = {}) {
  spec.validate();
  std::vector<SolutionCandidate> out;
  std::vector<Cx> chi = spec.a_coeffs;
  chi[0] -= Cx(1.0);
  const bool a0_is_one = std::abs(chi[0]) <= opts.zero_guard;
  const Cx shift = a0_is_one ? spec.a : Cx(0.0);

  const Poly char_poly{std::vector<Cx>(chi)};
  std::vector<std::pair<Cx, int>> char_roots;
  if (!char_poly.is_zero() && char_poly.degree() >= 1) {
    try {
      char_roots = cluster_roots(poly_roots(char_poly, opts.root_tol));
    } catch (const numeric_error&) {
      char_roots.clear();
    }
  }
  {
    for (const auto& [lambda, mult] : char_roots) {
      if (std::abs(lambda) <= 1e-8) continue;
      SolutionCandidate cand;
      cand.case_tag = CaseTag::HOM;
      cand.params = {{"A", Cx(1.0)}, {"lambda", lambda}, {"shift", shift}};
      cand.f = add(make({{Cx(1.0), lambda, 0}}), from_const(shift));
      cand.phi = Cx(0.0);
      cand.constraint_residuals = {{"char_poly", std::abs(detail::horner_sum(chi, lambda))}};
      cand.verified = verify(spec, cand.f, cand.phi, opts.eps_rel).pass;
      out.push_back(std::move(cand));
    }
  }

  if (spec.k == 2 && std::abs(spec.a_coeffs[0]) <= opts.zero_guard &&
      std::abs(spec.a_coeffs[1]) <= opts.zero_guard && std::abs(spec.a) > opts.zero_guard) {
    const Cx c1 = spec.a * spec.a / Cx(4.0);
    SolutionCandidate cand;
    cand.case_tag = CaseTag::HOM;
    cand.params = {{"c0", Cx(1.0)}, {"c1", c1}};
    cand.f = make({{Cx(1.0), Cx(1.0), 0}, {c1, Cx(-1.0), 0}});
    cand.phi = Cx(0.0);
    cand.constraint_residuals = {
        {"product_constraint", std::abs(Cx(1.0) * c1 - spec.a * spec.a / Cx(4.0))}};
    cand.verified = verify(spec, cand.f, cand.phi, opts.eps_rel).pass;
    out.push_back(std::move(cand));
  }
  return out;
}

namespace detail {

inline bool candidate_less(const SolutionCandidate& u, const SolutionCandidate& v) {
  if (u.case_tag != v.case_tag) return static_cast<int>(u.case_tag) < static_cast<int>(v.case_tag);
  const int um = u.m.value_or(-1), vm = v.m.value_or(-1);
  if (um != vm) return um < vm;
  auto ui = u.params.begin(), vi = v.params.begin();
  for (; ui != u.params.end() && vi != v.params.end(); ++ui, ++vi) {
    if (ui->first != vi->first) return ui->first < vi->first;
    if (ui->second.real() != vi->second.real()) return ui->second.real() < vi->second.real();
    if (ui->second.imag() != vi->second.imag()) return ui->second.imag() < vi->second.imag();
  }
  return u.params.size() < v.params.size();
}

inline bool candidate_duplicate(const SolutionCandidate& u, const SolutionCandidate& v,
                                double tol) {
  if (u.case_tag != v.case_tag || u.m != v.m) return false;
  if (u.params.size() != v.params.size()) return false;
  for (const auto& [name, value] : u.params) {
    const auto it = v.params.find(name);
    if (it == v.params.end() || std::abs(value - it->second) > tol) return false;
  }
  return true;
}

}  // namespace detail

/// Every family enumeration for the given equation, deduplicated (same tag and
/// all parameters within dedup_tol) and deterministically ordered by tag then
/// parameters. Enumeration failures of individual branches are reported in the
/// optional log, never thrown.
inline std::vector<SolutionCandidate> classify(const OdeSpec& spec,
                                               const ClassifyOptions& opts = {},
                                               std::vector<std::string>* log = nullptr) {
  spec.validate();
  std::vector<SolutionCandidate> all;
  const auto absorb = [&all](std::vector<SolutionCandidate>&& v) {
    for (SolutionCandidate& c : v) all.push_back(std::move(c));
  };
  absorb(enumerate_case12(spec, opts));
  absorb(enumerate_case3(spec, opts));
  absorb(enumerate_case4(spec, opts, log));
  absorb(enumerate_case5(spec, opts.c1_default, opts.branch_bound, opts, log));
  absorb(enumerate_case6(spec, opts));
  absorb(homogeneous_solutions(spec, opts));

  std::sort(all.begin(), all.end(), detail::candidate_less);
  std::vector<SolutionCandidate> unique;
  for (SolutionCandidate& c : all) {
    bool dup = false;
    for (const SolutionCandidate& kept : unique)
      if (detail::candidate_duplicate(kept, c, opts.dedup_tol)) {
        dup = true;
        break;
      }
    if (!dup) unique.push_back(std::move(c));
  }
  return unique;
}

}  // namespace exppoly
