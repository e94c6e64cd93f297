#include "lclab/discrete_pl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lclab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

long long floor_half(long long s) { return s >= 0 ? s / 2 : (s - 1) / 2; }

double exp_sum(const IntFn& f) {
  double acc = 0.0;
  for (double v : f.vals)
    if (v != kNegInf) acc += std::exp(v);
  return acc;
}

// E[e^{f(Y - n)}] for Y ~ Poisson(n); the window is finite so the sum is
// exact up to rounding.
double shifted_poisson_mean(const IntFn& f, long long n) {
  double acc = 0.0;
  for (long long x = f.lo; x <= f.hi(); ++x) {
    const double v = f.at(x);
    if (v == kNegInf) continue;
    const long long y = n + x;
    if (y < 0) continue;
    acc += std::exp(v) * poisson_pmf(static_cast<double>(n), y);
  }
  return acc;
}

}  // namespace

double IntFn::at(long long x) const {
  if (x < lo || x > hi()) return kNegInf;
  const double v = vals[static_cast<size_t>(x - lo)];
  if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
    throw std::invalid_argument("window values must be finite or -inf");
  return v;
}

HypothesisReport check_hypothesis(FourFunctions& q) {
  HypothesisReport report;
  for (long long x = q.f.lo; x <= q.f.hi(); ++x) {
    const double fx = q.f.at(x);
    if (fx == kNegInf) continue;
    for (long long y = q.g.lo; y <= q.g.hi(); ++y) {
      const double gy = q.g.at(y);
      if (gy == kNegInf) continue;
      const long long s = x + y;
      const long long z_lo = floor_half(s);
      const double lhs = fx + gy;
      const double rhs = q.h.at(z_lo) + q.k.at(s - z_lo);
      if (!(lhs <= rhs)) {
        report.pass = false;
        report.x = x;
        report.y = y;
        report.lhs = lhs;
        report.rhs = rhs;
        q.hypothesis_checked = false;
        return report;
      }
    }
  }
  report.pass = true;
  q.hypothesis_checked = true;
  return report;
}

std::pair<IntFn, IntFn> tight_hk(const IntFn& f, const IntFn& g) {
  if (f.empty() || g.empty())
    throw std::invalid_argument("tight_hk needs non-empty windows");
  const long long s_lo = f.lo + g.lo;
  const long long s_hi = f.hi() + g.hi();
  std::vector<double> m(static_cast<size_t>(s_hi - s_lo + 1), kNegInf);
  for (long long x = f.lo; x <= f.hi(); ++x) {
    const double fx = f.at(x);
    if (fx == kNegInf) continue;
    for (long long y = g.lo; y <= g.hi(); ++y) {
      const double gy = g.at(y);
      if (gy == kNegInf) continue;
      auto& slot = m[static_cast<size_t>(x + y - s_lo)];
      slot = std::max(slot, fx + gy);
    }
  }
  auto m_at = [&](long long s) {
    if (s < s_lo || s > s_hi) return kNegInf;
    return m[static_cast<size_t>(s - s_lo)];
  };
  const long long z_lo = floor_half(s_lo);
  const long long z_hi = floor_half(s_hi) + 1;
  IntFn h;
  h.lo = z_lo;
  h.vals.reserve(static_cast<size_t>(z_hi - z_lo + 1));
  for (long long z = z_lo; z <= z_hi; ++z) {
    const double top = std::max({m_at(2 * z - 1), m_at(2 * z), m_at(2 * z + 1)});
    h.vals.push_back(top == kNegInf ? kNegInf : 0.5 * top);
  }
  return {h, h};
}

ConclusionReport check_conclusion_counting(const FourFunctions& q,
                                           double rel_tol) {
  if (!q.hypothesis_checked)
    throw std::logic_error("conclusion requires a verified hypothesis");
  ConclusionReport r;
  r.lhs = exp_sum(q.f) * exp_sum(q.g);
  r.rhs = exp_sum(q.h) * exp_sum(q.k);
  r.pass = r.lhs <= r.rhs * (1.0 + rel_tol);
  return r;
}

ConclusionReport check_conclusion_poisson(const FourFunctions& q, double T,
                                          double rel_tol) {
  if (!q.hypothesis_checked)
    throw std::logic_error("conclusion requires a verified hypothesis");
  if (!(T > 0.0)) throw std::invalid_argument("T must be positive");
  for (const auto* fn : {&q.f, &q.g, &q.h, &q.k})
    if (fn->lo < 0)
      throw std::invalid_argument("Poisson conclusion needs windows inside the non-negative integers");
  auto integral = [T](const IntFn& fn) {
    double acc = 0.0;
    for (long long x = fn.lo; x <= fn.hi(); ++x) {
      const double v = fn.at(x);
      if (v != kNegInf) acc += std::exp(v) * poisson_pmf(T, x);
    }
    return acc;
  };
  ConclusionReport r;
  r.lhs = integral(q.f) * integral(q.g);
  r.rhs = integral(q.h) * integral(q.k);
  r.pass = r.lhs <= r.rhs * (1.0 + rel_tol);
  return r;
}

CouplingReport coupling_check(const IntensityPolicy& alpha,
                              const IntensityPolicy& beta,
                              const PlanarNoise& noise) {
  if (alpha.bound > noise.cap * (1.0 + 1e-9) ||
      beta.bound > noise.cap * (1.0 + 1e-9))
    throw std::invalid_argument("coupling_check needs both policies bounded by the noise cap");

  CouplingReport report;
  report.pass = true;

  CountingPath a, b, lo_path, hi_path;
  for (auto* p : {&a, &b, &lo_path, &hi_path}) p->horizon = noise.horizon;

  auto rate_pair = [&](double t) {
    const double ra = alpha(t, a.count_before(t),
                            std::span<const double>(a.jumps.data(), a.jumps.size()));
    const double rb = beta(t, b.count_before(t),
                           std::span<const double>(b.jumps.data(), b.jumps.size()));
    return std::pair<double, double>(ra, rb);
  };

  double prev_t = 0.0;
  for (const auto& [t, u] : noise.atoms) {
    // Rate-swap identity, sampled between atoms.
    for (int node = 1; node <= 8; ++node) {
      const double s = prev_t + (t - prev_t) * node / 9.0;
      const auto [ra, rb] = rate_pair(s);
      const bool even = (a.count_before(s) + b.count_before(s)) % 2 == 0;
      const double rl = even ? std::min(ra, rb) : std::max(ra, rb);
      const double rm = even ? std::max(ra, rb) : std::min(ra, rb);
      for (auto phi : {+[](double v) { return phi_cost(v); },
                       +[](double v) { return v * v; }}) {
        const double defect =
            std::abs(phi(ra) + phi(rb) - phi(rl) - phi(rm));
        report.max_rate_swap_defect = std::max(report.max_rate_swap_defect, defect);
      }
    }

    const auto [ra, rb] = rate_pair(t);
    const long long xa = static_cast<long long>(a.jumps.size());
    const long long xb = static_cast<long long>(b.jumps.size());
    const bool even = (xa + xb) % 2 == 0;
    const double rl = even ? std::min(ra, rb) : std::max(ra, rb);
    const double rm = even ? std::max(ra, rb) : std::min(ra, rb);

    if (u <= ra) a.jumps.push_back(t);
    if (u <= rb) b.jumps.push_back(t);
    if (u <= rl) lo_path.jumps.push_back(t);
    if (u <= rm) hi_path.jumps.push_back(t);
    ++report.atoms_processed;

    const long long sum = static_cast<long long>(a.jumps.size() + b.jumps.size());
    const long long want_lo = sum / 2;
    const long long want_hi = sum - want_lo;
    if (static_cast<long long>(lo_path.jumps.size()) != want_lo ||
        static_cast<long long>(hi_path.jumps.size()) != want_hi) {
      ++report.mismatches;
      if (report.pass) {
        report.pass = false;
        report.first_mismatch_time = t;
      }
    }
    prev_t = t;
  }
  return report;
}

std::vector<StirlingRow> stirling_limit_experiment(
    const FourFunctions& q, std::span<const long long> n_list) {
  if (!q.hypothesis_checked)
    throw std::logic_error("the experiment requires a verified hypothesis");
  std::vector<StirlingRow> rows;
  rows.reserve(n_list.size());
  const double target = exp_sum(q.f);
  for (long long n : n_list) {
    if (n <= 0) throw std::invalid_argument("Poisson parameters must be positive");
    StirlingRow row;
    row.n = n;
    const double scale = std::sqrt(2.0 * M_PI * static_cast<double>(n));
    const double ef = shifted_poisson_mean(q.f, n);
    const double eg = shifted_poisson_mean(q.g, n);
    const double eh = shifted_poisson_mean(q.h, n);
    const double ek = shifted_poisson_mean(q.k, n);
    row.s_f = scale * ef;
    row.s_g = scale * eg;
    row.s_h = scale * eh;
    row.s_k = scale * ek;
    row.target_f = target;
    row.shifted_inequality_pass = ef * eg <= eh * ek * (1.0 + 1e-12);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace lclab
