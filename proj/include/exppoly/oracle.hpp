#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "exppoly/expsum.hpp"
#include "exppoly/ode.hpp"

namespace exppoly {

/// Axis-aligned rectangle in the complex plane, corners lo (lower left) and
/// hi (upper right).
struct Rect {
  Cx lo;
  Cx hi;

  void validate() const {
    if (!is_finite(lo) || !is_finite(hi)) throw std::invalid_argument("Rect: non-finite corner");
    if (!(lo.real() < hi.real() && lo.imag() < hi.imag()))
      throw std::invalid_argument("Rect: lo must be strictly below-left of hi");
  }
};

struct LocatedZero {
  Cx location;
  int multiplicity = 1;
};

/// Zero census of a function on a rectangle. total_count comes from the
/// boundary winding integral and always equals the sum of multiplicities;
/// winding_total keeps the raw integral value before rounding.
struct ZeroReport {
  Rect rect;
  int total_count = 0;
  std::vector<LocatedZero> zeros;
  double winding_total = 0.0;
};

/// Pointwise residual sampling summary. residual_max is the largest sampled
/// residual magnitude; scale is the matching local magnitude of the two
/// products, the reference for relative comparisons.
struct SampleReport {
  double residual_max = 0.0;
  double scale = 0.0;
  int points_used = 0;
  int points_skipped = 0;
};

namespace detail {

// splitmix64: tiny deterministic generator, identical on every platform
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

inline Cx unit_disk_point(SplitMix64& rng) {
  for (;;) {
    const double re = 2.0 * rng.uniform() - 1.0;
    const double im = 2.0 * rng.uniform() - 1.0;
    if (re * re + im * im <= 1.0) return Cx(re, im);
  }
}

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Largest |freq| of f, the frequency scale that bounds how fast pointwise
/// values vary; used to pick finite-difference steps.
inline double freq_scale(const ExpSum& f) {
  double s = 0.0;
  for (const ExpTerm& t : f.terms) s = std::max(s, std::abs(t.freq));
  return s;
}

/// Symmetric central stencil for the order-th derivative at step h:
/// h^{-order} sum_j (-1)^j C(order, j) f(z + (order/2 - j) h). Error expands
/// in even powers of h, so one Richardson level removes the h^2 term.
inline Cx central_stencil(const ExpSum& f, Cx z, int order, double h) {
  Cx acc(0.0);
  double sign = 1.0;
  for (int j = 0; j <= order; ++j) {
    const double offset = 0.5 * order - j;
    acc += sign * binomial(order, j) * eval(f, z + Cx(offset * h));
    sign = -sign;
  }
  return acc / std::pow(h, order);
}

/// Richardson-extrapolated central difference of eval(f, .). The first
/// derivative uses the fixed step 1e-5; higher orders use a step inversely
/// proportional to the frequency scale, since rounding error grows like
/// h^{-order} and the fixed step would drown orders three and above in noise.
/// The step also widens with the order (rounding dominates truncation there);
/// past order five the scheme bottoms out near 1e-5 relative accuracy, the
/// double-precision floor of symmetric stencils.
inline Cx fd_derivative(const ExpSum& f, Cx z, int order) {
  if (order == 0) return eval(f, z);
  double h = 1e-5;
  if (order >= 2) {
    const double width = order <= 4 ? 0.06 : (order == 5 ? 0.09 : 0.13);
    h = width / (1.0 + freq_scale(f));
  }
  const Cx coarse = central_stencil(f, z, order, h);
  const Cx fine = central_stencil(f, z, order, 0.5 * h);
  return (Cx(4.0) * fine - coarse) / Cx(3.0);
}

}  // namespace detail

/// Residual of the equation re-derived numerically at n_points seeded
/// pseudo-random points of the unit disk: every derivative comes from
/// Richardson-extrapolated central differences of eval(f, .), never from the
/// exact differentiation path. Points where evaluation overflows are skipped
/// and counted; more than half skipped is a failure.
inline SampleReport sample_residual_report(const OdeSpec& spec, const ExpSum& f, Cx phi,
                                           int n_points, std::uint64_t seed) {
  spec.validate();
  if (n_points < 1) throw std::invalid_argument("sample_residual: n_points must be positive");
  detail::SplitMix64 rng(seed);
  SampleReport report;
  for (int p = 0; p < n_points; ++p) {
    const Cx z = detail::unit_disk_point(rng);
    try {
      const Cx fz = eval(f, z);
      const Cx dfz = detail::fd_derivative(f, z, 1);
      Cx lz = spec.a_coeffs[0] * fz;
      double lmag = std::abs(spec.a_coeffs[0] * fz);
      for (int i = 1; i <= spec.k; ++i) {
        const Cx di = detail::fd_derivative(f, z, i);
        lz += spec.a_coeffs[i] * di;
        lmag += std::abs(spec.a_coeffs[i] * di);
      }
      const Cx resid = dfz * (fz - lz) - phi * (fz - spec.a) * (fz - spec.b);
      if (!is_finite(resid)) throw numeric_error("sample_residual: overflow");
      const double local = std::abs(dfz) * (std::abs(fz) + lmag) +
                           std::abs(phi) * (std::abs(fz) + std::abs(spec.a)) *
                               (std::abs(fz) + std::abs(spec.b));
      report.residual_max = std::max(report.residual_max, std::abs(resid));
      report.scale = std::max(report.scale, local);
      ++report.points_used;
    } catch (const numeric_error&) {
      ++report.points_skipped;
    }
  }
  if (2 * report.points_skipped > n_points)
    throw numeric_error("sample_residual: more than half of the sample points overflowed");
  report.scale = std::max(report.scale, 1e-300);
  return report;
}

inline double sample_residual(const OdeSpec& spec, const ExpSum& f, Cx phi, int n_points,
                              std::uint64_t seed) {
  return sample_residual_report(spec, f, phi, n_points, seed).residual_max;
}

namespace detail {

struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// 16-point Gauss-Legendre rule on [-1, 1], nodes found by Newton iteration
/// on the Legendre polynomial.
inline const GaussLegendre& gl16() {
  static const GaussLegendre rule = [] {
    GaussLegendre r;
    const int n = 16;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= n; ++j) {
          const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      r.nodes[i] = x;
      r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
  }();
  return rule;
}

struct ContourStats {
  double min_abs_f = std::numeric_limits<double>::infinity();
  double max_abs_f = 0.0;
};

/// Integral of fp/f over the straight segment [p, q] by 16-point
/// Gauss-Legendre, tracking how close f comes to zero along the way.
inline Cx segment_quadrature(const ExpSum& f, const ExpSum& fp, Cx p, Cx q, bool with_moment,
                             Cx* moment, ContourStats* stats) {
  const GaussLegendre& rule = gl16();
  const Cx mid = 0.5 * (p + q);
  const Cx half = 0.5 * (q - p);
  Cx acc(0.0), macc(0.0);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const Cx z = mid + half * rule.nodes[i];
    const Cx fz = eval(f, z);
    const Cx fpz = eval(fp, z);
    const double mag = std::abs(fz);
    if (stats) {
      stats->min_abs_f = std::min(stats->min_abs_f, mag);
      stats->max_abs_f = std::max(stats->max_abs_f, mag);
    }
    if (mag == 0.0) throw numeric_error("winding: zero of f on the contour");
    const Cx g = fpz / fz;
    acc += rule.weights[i] * g;
    if (with_moment) macc += rule.weights[i] * z * g;
  }
  if (moment) *moment += half * macc;
  return half * acc;
}

/// Adaptive composite integral of fp/f over [p, q]: bisect until parent and
/// children agree. Depth is generous because a zero just off the contour
/// makes the integrand spike.
inline Cx segment_integral(const ExpSum& f, const ExpSum& fp, Cx p, Cx q, double tol,
                           bool with_moment, Cx* moment, ContourStats* stats, int depth = 0) {
  Cx parent_moment(0.0);
  const Cx parent = segment_quadrature(f, fp, p, q, with_moment, &parent_moment, stats);
  const Cx mid = 0.5 * (p + q);
  Cx child_moment(0.0);
  const Cx left = segment_quadrature(f, fp, p, mid, with_moment, &child_moment, stats);
  const Cx right = segment_quadrature(f, fp, mid, q, with_moment, &child_moment, stats);
  const Cx children = left + right;
  if (std::abs(children - parent) <= tol * (1.0 + std::abs(children)) || depth >= 24) {
    if (depth >= 24 && std::abs(children - parent) > 1e3 * tol * (1.0 + std::abs(children)))
      throw numeric_error("winding: contour integral did not converge");
    if (moment) *moment += child_moment;
    return children;
  }
  Cx lm(0.0), rm(0.0);
  const Cx l = segment_integral(f, fp, p, mid, tol, with_moment, &lm, stats, depth + 1);
  const Cx r = segment_integral(f, fp, mid, q, tol, with_moment, &rm, stats, depth + 1);
  if (moment) *moment += lm + rm;
  return l + r;
}

/// (1 / 2 pi i) times the integral of fp/f around the rectangle boundary.
inline Cx rect_winding(const ExpSum& f, const ExpSum& fp, const Rect& rect,
                       ContourStats* stats) {
  const Cx c0 = rect.lo;
  const Cx c1 = Cx(rect.hi.real(), rect.lo.imag());
  const Cx c2 = rect.hi;
  const Cx c3 = Cx(rect.lo.real(), rect.hi.imag());
  const double tol = 2e-5;
  Cx acc(0.0);
  acc += segment_integral(f, fp, c0, c1, tol, false, nullptr, stats);
  acc += segment_integral(f, fp, c1, c2, tol, false, nullptr, stats);
  acc += segment_integral(f, fp, c2, c3, tol, false, nullptr, stats);
  acc += segment_integral(f, fp, c3, c0, tol, false, nullptr, stats);
  return acc / Cx(0.0, 2.0 * std::numbers::pi);
}

/// Winding number around the circle of radius r at center zc, with optional
/// first moment, which locates the center of mass of the enclosed zeros. The
/// circle is split into arcs that are bisected until the quadrature settles.
inline Cx circle_winding(const ExpSum& f, const ExpSum& fp, Cx zc, double r, Cx* moment) {
  const int panels = 8;
  const double tol = 2e-5;
  Cx acc(0.0);
  // integrate f'/f dz with dz = i w dt on w(t) = zc + r e^{it}
  const GaussLegendre& rule = gl16();
  struct Arc {
    double t0, t1;
    int depth;
  };
  std::vector<Arc> stack;
  for (int s = 0; s < panels; ++s)
    stack.push_back({2.0 * std::numbers::pi * s / panels,
                     2.0 * std::numbers::pi * (s + 1) / panels, 0});
  const auto arc_value = [&](double t0, double t1, Cx* marc) {
    const double mid = 0.5 * (t0 + t1);
    const double half = 0.5 * (t1 - t0);
    Cx a(0.0), ma(0.0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double t = mid + half * rule.nodes[i];
      const Cx offset = r * Cx(std::cos(t), std::sin(t));
      const Cx z = zc + offset;
      const Cx fz = eval(f, z);
      if (std::abs(fz) == 0.0) throw numeric_error("winding: zero of f on the circle");
      const Cx g = eval(fp, z) / fz * Cx(0.0, 1.0) * offset;
      a += rule.weights[i] * g;
      if (marc) ma += rule.weights[i] * z * g;
    }
    if (marc) *marc += half * ma;
    return half * a;
  };
  while (!stack.empty()) {
    const Arc arc = stack.back();
    stack.pop_back();
    Cx pm(0.0), cm(0.0);
    const Cx parent = arc_value(arc.t0, arc.t1, moment ? &pm : nullptr);
    const double mid = 0.5 * (arc.t0 + arc.t1);
    const Cx left = arc_value(arc.t0, mid, moment ? &cm : nullptr);
    const Cx right = arc_value(mid, arc.t1, moment ? &cm : nullptr);
    if (std::abs(left + right - parent) <= tol * (1.0 + std::abs(left + right)) ||
        arc.depth >= 16) {
      acc += left + right;
      if (moment) *moment += cm;
    } else {
      stack.push_back({arc.t0, mid, arc.depth + 1});
      stack.push_back({mid, arc.t1, arc.depth + 1});
    }
  }
  if (moment) *moment /= Cx(0.0, 2.0 * std::numbers::pi);
  return acc / Cx(0.0, 2.0 * std::numbers::pi);
}

}  // namespace detail

/// Count and locate the zeros of f inside a rectangle by the argument
/// principle. The boundary winding integral fixes the total (it must land
/// within 1e-3 of an integer); zeros are then located by grid-seeded Newton
/// refinement and each multiplicity certified by the winding number on a small
/// circle, with the first moment sharpening the reported location. If a zero
/// sits too close to the boundary the rectangle is nudged outward up to three
/// times before giving up. A located total that cannot be reconciled with the
/// boundary integral is a failure, never silently patched.
inline ZeroReport count_zeros(const ExpSum& f, Rect rect) {
  rect.validate();
  if (f.terms.empty()) throw std::invalid_argument("count_zeros: identically zero function");
  const ExpSum fp = derivative(f, 1);

  std::string last_failure;
  for (int attempt = 0; attempt <= 3; ++attempt) {
    if (attempt > 0) {
      const double dx = attempt * 3.7e-6 * (1.0 + rect.hi.real() - rect.lo.real());
      const double dy = attempt * 4.1e-6 * (1.0 + rect.hi.imag() - rect.lo.imag());
      rect.lo -= Cx(dx, dy);
      rect.hi += Cx(dx, dy);
    }
    try {
      detail::ContourStats stats;
      const Cx winding = detail::rect_winding(f, fp, rect, &stats);
      if (stats.min_abs_f <= 1e-7 * (1.0 + stats.max_abs_f))
        throw numeric_error("winding: f nearly vanishes on the boundary");
      const double total_raw = winding.real();
      const long rounded = std::lround(total_raw);
      if (std::abs(winding - Cx(static_cast<double>(rounded))) > 1e-3)
        throw numeric_error("winding: boundary integral is not within 1e-3 of an integer");
      if (rounded < 0) throw numeric_error("winding: negative zero count");

      ZeroReport report;
      report.rect = rect;
      report.total_count = static_cast<int>(rounded);
      report.winding_total = total_raw;
      if (rounded == 0) return report;

      const double fref = 1.0 + stats.max_abs_f;
      const auto newton_candidates = [&](double spacing) {
        std::vector<Cx> candidates;
        for (double x = rect.lo.real(); x <= rect.hi.real() + 1e-12; x += spacing) {
          for (double y = rect.lo.imag(); y <= rect.hi.imag() + 1e-12; y += spacing) {
            Cx z(x, y);
            // run to the stall floor and keep the best point seen; a zero of
            // multiplicity m only converges linearly and its endpoint noise
            // ball has radius about (eps)^{1/m}
            Cx best = z;
            double best_mag = std::numeric_limits<double>::infinity();
            for (int it = 0; it < 80; ++it) {
              Cx fz, dz;
              try {
                fz = eval(f, z);
                dz = eval(fp, z);
              } catch (const numeric_error&) {
                break;
              }
              const double mag = std::abs(fz);
              if (mag < best_mag) {
                best_mag = mag;
                best = z;
              }
              if (mag == 0.0) break;
              if (std::abs(dz) < 1e-300) break;
              const Cx step = fz / dz;
              z -= step;
              if (!is_finite(z)) break;
              if (std::abs(step) <= 1e-14 * (1.0 + std::abs(z))) break;
            }
            if (!(best_mag <= 1e-6 * fref)) continue;
            if (best.real() < rect.lo.real() || best.real() > rect.hi.real() ||
                best.imag() < rect.lo.imag() || best.imag() > rect.hi.imag())
              continue;
            bool known = false;
            for (const Cx& c : candidates)
              if (std::abs(c - best) <= 1e-7) {  // duplicate merge radius
                known = true;
                break;
              }
            if (!known) candidates.push_back(best);
          }
        }
        std::sort(candidates.begin(), candidates.end(), detail::cx_less);
        return candidates;
      };

      // A multiple zero scatters its Newton endpoints; absorb everything
      // inside each certification circle into one reported zero. Escalate the
      // grid resolution and the circle radius until the located multiplicities
      // reconcile with the boundary count.
      for (const double circle_r : {2e-3, 8e-3}) {
        for (const double spacing : {0.1, 0.05}) {
          report.zeros.clear();
          const std::vector<Cx> candidates = newton_candidates(spacing);
          std::vector<char> absorbed(candidates.size(), 0);
          int located_total = 0;
          for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (absorbed[i]) continue;
            Cx moment(0.0);
            const Cx w = detail::circle_winding(f, fp, candidates[i], circle_r, &moment);
            const long mult = std::lround(w.real());
            if (std::abs(w - Cx(static_cast<double>(mult))) > 1e-3)
              throw numeric_error("winding: multiplicity circle is not within 1e-3 of an integer");
            for (std::size_t j = i + 1; j < candidates.size(); ++j)
              if (std::abs(candidates[j] - candidates[i]) <= circle_r) absorbed[j] = 1;
            if (mult <= 0) continue;
            const Cx location = moment / static_cast<double>(mult);
            report.zeros.push_back({location, static_cast<int>(mult)});
            located_total += static_cast<int>(mult);
          }
          if (located_total == report.total_count) {
            std::sort(report.zeros.begin(), report.zeros.end(),
                      [](const LocatedZero& u, const LocatedZero& v) {
                        return detail::cx_less(u.location, v.location);
                      });
            return report;
          }
          last_failure = "located multiplicity total " + std::to_string(located_total) +
                         " does not match boundary count " + std::to_string(report.total_count);
        }
      }
      throw numeric_error("count_zeros: " + last_failure);
    } catch (const numeric_error& e) {
      last_failure = e.what();
      // retry with a nudged rectangle
    }
  }
  throw numeric_error("count_zeros: failed after boundary perturbation: " + last_failure);
}

/// True iff every zero of f - a inside the rectangle has multiplicity at
/// least k. Vacuously true when f - a has no zeros there.
inline bool check_multiplicity(const OdeSpec& spec, const ExpSum& f, Rect rect) {
  spec.validate();
  const ZeroReport report = count_zeros(sub(f, from_const(spec.a)), rect);
  for (const LocatedZero& z : report.zeros)
    if (z.multiplicity < spec.k) return false;
  return true;
}

}  // namespace exppoly
