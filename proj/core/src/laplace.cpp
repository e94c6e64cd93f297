#include "lclab/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace lclab {

GammaMomentSource::GammaMomentSource(double p, double beta, double scale)
    : p_(p), beta_(beta), scale_(scale) {
  if (!(p > 0.0) || !(beta > 0.0))
    throw std::invalid_argument("GammaMomentSource requires p > 0 and beta > 0");
}

GammaMomentSource GammaMomentSource::normalized(double p, double beta) {
  return GammaMomentSource(p, beta, std::exp(p * std::log(beta) - std::lgamma(p)));
}

double GammaMomentSource::moment(double t, int n) const {
  if (n < 0) throw std::invalid_argument("moment order must be >= 0");
  if (!(t + beta_ > 0.0)) throw std::domain_error("moment diverges for t <= -beta");
  return scale_ * std::exp(std::lgamma(n + p_) - std::lgamma(n + 1.0) -
                           (n + p_) * std::log(t + beta_));
}

double GammaMomentSource::scaled_moment(double t, int n) const {
  if (!(t > 0.0)) throw std::invalid_argument("scaled_moment requires t > 0");
  return scale_ * std::exp(n * std::log(t) + std::lgamma(n + p_) -
                           std::lgamma(n + 1.0) - (n + p_) * std::log(t + beta_));
}

double GammaMomentSource::mass() const {
  return scale_ * std::exp(std::lgamma(p_) - p_ * std::log(beta_));
}

MomentTable build_moment_table(const MomentSource& src, double t, int n_max) {
  MomentTable table;
  table.t = t;
  table.values.reserve(static_cast<size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) table.values.push_back(src.moment(t, n));
  return table;
}

LogConcaveSeq taylor_coeffs(const MomentSource& src, double t, int n_max) {
  return LogConcaveSeq(build_moment_table(src, t, n_max).values);
}

double measurement(const MomentSource& src, const Quadruple& q, double t) {
  return src.moment(t, q.l) * src.moment(t, q.m) -
         src.moment(t, q.k) * src.moment(t, q.n);
}

double MeasurementFn::operator()(double t) const {
  auto it = std::lower_bound(cache_.begin(), cache_.end(), t,
                             [](const auto& e, double v) { return e.first < v; });
  if (it != cache_.end() && it->first == t) return it->second;
  const double value = measurement(*src_, q_, t);
  cache_.insert(it, {t, value});
  return value;
}

std::vector<std::pair<long long, Quadruple>> derivative_decomposition(
    const Quadruple& q) {
  std::vector<std::pair<long long, Quadruple>> out;
  if (q.degenerate()) return out;  // c vanishes identically
  if (q.l < q.m) {
    out.emplace_back(q.k + 1, Quadruple(q.k + 1, q.l + 1, q.m, q.n));
    out.emplace_back(q.l - q.k, Quadruple(q.k, q.l + 1, q.m, q.n + 1));
    out.emplace_back(q.m + 1, Quadruple(q.k, q.l, q.m + 1, q.n + 1));
  } else {  // l == m, k < l
    out.emplace_back(q.k + 1, Quadruple(q.k + 1, q.l, q.m + 1, q.n));
    out.emplace_back(q.n + 1, Quadruple(q.k, q.l, q.m + 1, q.n + 1));
  }
  return out;
}

namespace {

// Expand c_q through j rounds of the derivative decomposition. The result
// maps quadruples to non-negative weights w with
// (-1)^j c_q^(j) = sum w_i c_{q_i}.
std::map<Quadruple, double> expand_decomposition(const Quadruple& q, int j) {
  std::map<Quadruple, double> cur{{q, 1.0}};
  for (int round = 0; round < j; ++round) {
    std::map<Quadruple, double> next;
    for (const auto& [quad, weight] : cur)
      for (const auto& [coef, child] : derivative_decomposition(quad))
        next[child] += weight * static_cast<double>(coef);
    cur = std::move(next);
  }
  return cur;
}

}  // namespace

double signed_derivative(const MomentSource& src, const Quadruple& q, double t,
                         int j) {
  if (j < 0) throw std::invalid_argument("derivative order must be >= 0");
  double acc = 0.0;
  for (const auto& [quad, weight] : expand_decomposition(q, j))
    acc += weight * measurement(src, quad, t);
  return acc;
}

double signed_derivative_scale(const MomentSource& src, const Quadruple& q,
                               double t, int j) {
  double acc = 0.0;
  for (const auto& [quad, weight] : expand_decomposition(q, j))
    acc += weight * src.moment(t, quad.l) * src.moment(t, quad.m);
  return acc;
}

double post_inversion_sum(const MomentSource& src, double t, double R) {
  if (!(t > 0.0) || !(R > 0.0))
    throw std::invalid_argument("post_inversion_sum requires t > 0 and R > 0");
  const long long n_max = static_cast<long long>(std::floor(R * t));
  double acc = 0.0;
  for (long long n = 0; n <= n_max; ++n)
    acc += src.scaled_moment(t, static_cast<int>(n));
  return acc;
}

double sup_scaled_moment(const MomentSource& src, double t) {
  double best = 0.0;
  int declining = 0;
  for (int n = 0; n < 2'000'000; ++n) {
    const double v = src.scaled_moment(t, n);
    if (v > best) {
      best = v;
      declining = 0;
    } else {
      ++declining;
    }
    if (declining > 64 && (best == 0.0 || v < best * 1e-30)) break;
  }
  return best;
}

GtDensity::GtDensity(const MomentSource& src, double t) : src_(&src), t_(t) {
  if (!(t > 0.0)) throw std::invalid_argument("GtDensity requires t > 0");
  ensure_nodes(1);
  if (!(log_nodes_[1] > -std::numeric_limits<double>::infinity()))
    throw std::domain_error("g_t is undefined: the measure has no mass on (0, inf)");
}

void GtDensity::ensure_nodes(int n) const {
  while (static_cast<int>(log_nodes_.size()) <= n) {
    const int idx = static_cast<int>(log_nodes_.size());
    const double v = src_->scaled_moment(t_, idx);
    log_nodes_.push_back(v > 0.0 ? std::log(t_) + std::log(v)
                                 : -std::numeric_limits<double>::infinity());
  }
}

double GtDensity::log_node(int n) const {
  ensure_nodes(n);
  return log_nodes_[static_cast<size_t>(n)];
}

double GtDensity::log_value(double x) const {
  if (x < 0.0) return -std::numeric_limits<double>::infinity();
  const double pos = x * t_;
  const int n = static_cast<int>(std::floor(pos));
  const double lambda = pos - n;
  const double l0 = log_node(n);
  if (lambda == 0.0) return l0;
  const double l1 = log_node(n + 1);
  return (1.0 - lambda) * l0 + lambda * l1;
}

double GtDensity::integral(double lo, double hi) const {
  if (!(lo >= 0.0) || !(lo < hi)) throw std::invalid_argument("bad integration bounds");
  double acc = 0.0;
  int n = static_cast<int>(std::floor(lo * t_));
  double x = lo;
  while (x < hi) {
    const double next = std::min(hi, (n + 1.0) / t_);
    if (next <= x) {  // node landed exactly on x
      ++n;
      continue;
    }
    const double la = log_value(x);
    const double lb = log_value(next);
    if (la > -std::numeric_limits<double>::infinity() ||
        lb > -std::numeric_limits<double>::infinity()) {
      const double d = lb - la;
      if (std::abs(d) > 1e-12)
        acc += std::exp(la) * std::expm1(d) * (next - x) / d;
      else
        acc += 0.5 * (std::exp(la) + std::exp(lb)) * (next - x);
    }
    x = next;
    ++n;
  }
  return acc;
}

double GtDensity::sup() const {
  double best = -std::numeric_limits<double>::infinity();
  int declining = 0;
  for (int n = 0; n < 2'000'000; ++n) {
    const double v = log_node(n);
    if (v > best) {
      best = v;
      declining = 0;
    } else {
      ++declining;
    }
    if (declining > 64 && v < best - 80.0) break;
  }
  return std::exp(best);
}

SeqCertReport GtDensity::certify_log_concave() const {
  SeqCertReport report;
  report.margin = std::numeric_limits<double>::infinity();
  constexpr double kSlopeTol = 1e-9;
  double best = -std::numeric_limits<double>::infinity();
  double prev_slope = std::numeric_limits<double>::infinity();
  int declining = 0;
  for (int n = 0;; ++n) {
    const double l0 = log_node(n);
    const double l1 = log_node(n + 1);
    if (l1 == -std::numeric_limits<double>::infinity()) break;
    const double slope = (l1 - l0) * t_;
    if (slope > prev_slope + kSlopeTol) {
      report.pass = false;
      report.violation_index = n;
      report.margin = prev_slope - slope;
      report.reason = "log g_t slope increases at node " + std::to_string(n);
      return report;
    }
    report.margin = std::min(report.margin, prev_slope - slope);
    prev_slope = slope;
    if (l0 > best) {
      best = l0;
      declining = 0;
    } else {
      ++declining;
    }
    if (declining > 64 && l0 < best - 120.0) break;
    if (n > 2'000'000) break;
  }
  report.pass = true;
  return report;
}

double gt_interval_mass(const MomentSource& src, double t, double R) {
  GtDensity g(src, t);
  return g.integral(0.0, R);
}

ConvexityReport root_convexity_check(const MomentSource& src, int n,
                                     std::span<const double> t_grid,
                                     double tol_factor) {
  if (n < 1) throw std::invalid_argument("root_convexity_check requires n >= 1");
  if (t_grid.size() < 3)
    throw std::invalid_argument("root_convexity_check needs at least 3 grid points");
  ConvexityReport report;
  report.h.reserve(t_grid.size());
  double h_max = 0.0;
  for (double t : t_grid) {
    const double a = src.moment(t, n - 1);
    if (!(a > 0.0))
      throw std::domain_error("Taylor coefficient vanishes; |phi^(n-1)|^(-1/n) undefined");
    const double h = std::pow(std::exp(std::lgamma(static_cast<double>(n))) * a,
                              -1.0 / static_cast<double>(n));
    report.h.push_back(h);
    h_max = std::max(h_max, std::abs(h));
  }
  report.pass = true;
  report.min_slack = std::numeric_limits<double>::infinity();
  const double tol = tol_factor * h_max;
  for (size_t i = 1; i + 1 < report.h.size(); ++i) {
    const double t0 = t_grid[i - 1], t1 = t_grid[i], t2 = t_grid[i + 1];
    const double chord =
        report.h[i - 1] + (report.h[i + 1] - report.h[i - 1]) * (t1 - t0) / (t2 - t0);
    const double slack = chord - report.h[i];
    report.min_slack = std::min(report.min_slack, slack);
    if (slack < -tol && report.pass) {
      report.pass = false;
      report.violation_index = static_cast<int>(i);
    }
  }
  return report;
}

std::vector<double> geometric_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2)
    throw std::invalid_argument("geometric_grid requires 0 < lo < hi and points >= 2");
  std::vector<double> g;
  g.reserve(static_cast<size_t>(points));
  const double ratio = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) g.push_back(lo * std::exp(ratio * i));
  g.back() = hi;
  return g;
}

}  // namespace lclab
