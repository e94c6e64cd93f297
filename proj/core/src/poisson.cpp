#include "lclab/poisson.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lclab/parallel.hpp"

namespace lclab {

namespace {

struct Quadrature {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Gauss-Legendre nodes by Newton iteration on the Legendre polynomial.
Quadrature gauss_legendre(int n) {
  Quadrature q;
  q.nodes.resize(static_cast<size_t>(n));
  q.weights.resize(static_cast<size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    q.nodes[static_cast<size_t>(i)] = -x;
    q.nodes[static_cast<size_t>(n - 1 - i)] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    q.weights[static_cast<size_t>(i)] = w;
    q.weights[static_cast<size_t>(n - 1 - i)] = w;
  }
  return q;
}

const Quadrature& gl64() {
  static const Quadrature q = gauss_legendre(64);
  return q;
}

const Quadrature& gl16() {
  static const Quadrature q = gauss_legendre(16);
  return q;
}

// Fixed-order mean and standard error.
McResult reduce(const std::vector<double>& values) {
  McResult r;
  r.n_traj = static_cast<std::int64_t>(values.size());
  if (values.empty()) return r;
  double sum = 0.0;
  for (double v : values) sum += v;
  r.estimate = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - r.estimate) * (v - r.estimate);
    r.se = std::sqrt(ss / (static_cast<double>(values.size()) *
                           (static_cast<double>(values.size()) - 1.0)));
  }
  return r;
}

// Integral of fn over [a, b] with a fixed Gauss-Legendre rule.
template <class Fn>
double gl_integrate(const Quadrature& q, double a, double b, Fn&& fn) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (size_t i = 0; i < q.nodes.size(); ++i)
    acc += q.weights[i] * fn(mid + half * q.nodes[i]);
  return acc * half;
}

// Walks the inter-jump intervals of a path, calling
// visit(t_lo, t_hi, count, jumps_before).
template <class Visit>
void for_each_interval(const CountingPath& path, double T, Visit&& visit) {
  double lo = 0.0;
  for (size_t i = 0; i <= path.jumps.size(); ++i) {
    const double hi = (i < path.jumps.size()) ? path.jumps[i] : T;
    if (hi > lo)
      visit(lo, hi, static_cast<long long>(i),
            std::span<const double>(path.jumps.data(), i));
    lo = hi;
  }
}

double cost_integral(const IntensityPolicy& policy, const CountingPath& path,
                     double T) {
  double acc = 0.0;
  for_each_interval(path, T, [&](double lo, double hi, long long x,
                                 std::span<const double> jumps) {
    acc += gl_integrate(gl64(), lo, hi,
                        [&](double t) { return phi_cost(policy(t, x, jumps)); });
  });
  return acc;
}

}  // namespace

double Payoff::at(long long x) const {
  if (x < 0) throw std::invalid_argument("payoff argument must be >= 0");
  if (x < static_cast<long long>(values.size()))
    return values[static_cast<size_t>(x)];
  return beyond;
}

double Payoff::sup() const {
  double m = beyond;
  for (double v : values) m = std::max(m, v);
  return m;
}

double Payoff::inf() const {
  double m = beyond;
  for (double v : values) m = std::min(m, v);
  return m;
}

double phi_cost(double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("intensity must be >= 0");
  if (lambda == 0.0) return 1.0;
  return lambda * std::log(lambda) - lambda + 1.0;
}

double poisson_pmf(double t, long long n) {
  if (n < 0) return 0.0;
  if (t == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(static_cast<double>(n) * std::log(t) - t -
                  std::lgamma(static_cast<double>(n) + 1.0));
}

double poisson_upper_tail(double mean, long long k) {
  if (k <= 0) return 1.0;
  if (mean == 0.0) return 0.0;
  return boost::math::gamma_p(static_cast<double>(k), mean);
}

double semigroup_apply(const Payoff& g, double t, long long x) {
  if (x < 0) throw std::invalid_argument("semigroup argument must be >= 0");
  if (t < 0.0) throw std::invalid_argument("semigroup time must be >= 0");
  const long long window = static_cast<long long>(g.values.size());
  if (t == 0.0) return g.at(x);
  if (x >= window) return g.beyond;
  double pmf = std::exp(-t);
  double head = 0.0, head_mass = 0.0;
  for (long long n = 0; n < window - x; ++n) {
    head += g.values[static_cast<size_t>(x + n)] * pmf;
    head_mass += pmf;
    pmf *= t / static_cast<double>(n + 1);
  }
  return head + g.beyond * std::max(0.0, 1.0 - head_mass);
}

double log_poisson_integral(const Payoff& f, double T) {
  const double shift = f.sup();
  Payoff shifted;
  shifted.beyond = std::exp(f.beyond - shift);
  shifted.values.reserve(f.values.size());
  for (double v : f.values) shifted.values.push_back(std::exp(v - shift));
  return std::log(semigroup_apply(shifted, T, 0)) + shift;
}

PlanarNoise PlanarNoise::sample(double horizon, double cap, std::uint64_t seed,
                                std::uint64_t stream) {
  if (!(horizon > 0.0) || cap < 0.0)
    throw std::invalid_argument("noise requires horizon > 0 and cap >= 0");
  PlanarNoise noise;
  noise.horizon = horizon;
  noise.cap = cap;
  noise.seed = seed;
  noise.stream = stream;
  if (cap == 0.0) return noise;
  CounterRng rng(seed, stream);
  double t = 0.0;
  for (;;) {
    t += rng.exponential(cap);
    if (t >= horizon) break;
    noise.atoms.emplace_back(t, cap * rng.uniform01());
  }
  return noise;
}

IntensityPolicy IntensityPolicy::constant(double c) {
  if (c < 0.0) throw std::invalid_argument("constant intensity must be >= 0");
  IntensityPolicy p;
  p.bound = c;
  p.markov = true;
  p.rate = [c](double, long long, std::span<const double>) { return c; };
  return p;
}

IntensityPolicy IntensityPolicy::from_markov(double bound, MarkovRate fn) {
  IntensityPolicy p;
  p.bound = bound;
  p.markov = true;
  p.rate = [fn = std::move(fn)](double t, long long x, std::span<const double>) {
    return fn(t, x);
  };
  return p;
}

IntensityPolicy IntensityPolicy::from_history(double bound, HistoryRate fn) {
  IntensityPolicy p;
  p.bound = bound;
  p.markov = false;
  p.rate = std::move(fn);
  return p;
}

long long CountingPath::count_before(double t) const {
  return std::lower_bound(jumps.begin(), jumps.end(), t) - jumps.begin();
}

CountingPath simulate_counting(const IntensityPolicy& policy,
                               const PlanarNoise& noise) {
  if (policy.bound > noise.cap * (1.0 + 1e-9))
    throw std::invalid_argument("policy bound exceeds the noise cap");
  CountingPath path;
  path.horizon = noise.horizon;
  for (const auto& [t, u] : noise.atoms) {
    const double lambda =
        policy(t, static_cast<long long>(path.jumps.size()),
               std::span<const double>(path.jumps.data(), path.jumps.size()));
    if (lambda < 0.0 || lambda > noise.cap * (1.0 + 1e-9))
      throw std::invalid_argument("intensity left [0, cap] at t = " + std::to_string(t));
    if (u <= lambda) path.jumps.push_back(t);
  }
  return path;
}

ValueFunction::ValueFunction(Payoff f, double T) : f_(std::move(f)), T_(T) {
  if (!(T > 0.0)) throw std::invalid_argument("horizon must be positive");
  shift_ = f_.sup();
  exp_values_.reserve(f_.values.size());
  for (double v : f_.values) exp_values_.push_back(std::exp(v - shift_));
  exp_beyond_ = std::exp(f_.beyond - shift_);
}

double ValueFunction::u(double s, long long x) const {
  const long long window = static_cast<long long>(exp_values_.size());
  if (x >= window) return exp_beyond_;
  if (s == 0.0) return exp_values_[static_cast<size_t>(x)];
  double pmf = std::exp(-s);
  double head = 0.0, head_mass = 0.0;
  for (long long n = 0; n < window - x; ++n) {
    head += exp_values_[static_cast<size_t>(x + n)] * pmf;
    head_mass += pmf;
    pmf *= s / static_cast<double>(n + 1);
  }
  return head + exp_beyond_ * std::max(0.0, 1.0 - head_mass);
}

double ValueFunction::F(double t, long long x) const {
  return std::log(u(T_ - t, x)) + shift_;
}

double ValueFunction::rate(double t, long long x) const {
  const double s = T_ - t;
  return u(s, x + 1) / u(s, x);
}

IntensityPolicy optimal_policy(const Payoff& f, double T) {
  auto vf = std::make_shared<ValueFunction>(f, T);
  IntensityPolicy p;
  p.bound = std::exp(f.osc());
  p.markov = true;
  p.rate = [vf](double t, long long x, std::span<const double>) {
    return vf->rate(t, x);
  };
  return p;
}

McResult mc_functional(const IntensityPolicy& policy, const Payoff& f, double T,
                       std::int64_t n_traj, std::uint64_t seed) {
  if (n_traj <= 0) throw std::invalid_argument("need at least one trajectory");
  std::vector<double> values(static_cast<size_t>(n_traj));
  parallel_for(n_traj, [&](std::int64_t i) {
    const auto noise =
        PlanarNoise::sample(T, policy.bound, seed, static_cast<std::uint64_t>(i));
    const auto path = simulate_counting(policy, noise);
    values[static_cast<size_t>(i)] =
        f.at(path.terminal()) - cost_integral(policy, path, T);
  });
  return reduce(values);
}

int suggest_x_max(double rate_bound, double T, double tail) {
  const double mean = rate_bound * T;
  int x = static_cast<int>(std::ceil(mean)) + 2;
  while (poisson_upper_tail(mean, x) >= tail) ++x;
  return x;
}

double ode_policy_value(const IntensityPolicy& policy, const Payoff& f, double T,
                        int x_max, double tol) {
  if (!policy.markov)
    throw std::invalid_argument("ode_policy_value requires a Markov policy");
  const double reach = poisson_upper_tail(policy.bound * T, x_max);
  if (!(reach < 1e-10))
    throw std::invalid_argument(
        "x_max too small: P(reach x_max) = " + std::to_string(reach) +
        "; truncation would dominate the result");

  const size_t dim = static_cast<size_t>(x_max) + 1;
  std::vector<double> y(dim);
  for (size_t x = 0; x < dim; ++x) y[x] = f.at(static_cast<long long>(x));

  const std::span<const double> no_jumps;
  // Backward equation in the time-to-go variable.
  auto deriv = [&](double tau, const std::vector<double>& v,
                   std::vector<double>& dv) {
    const double t = T - tau;
    for (size_t x = 0; x < dim; ++x) {
      const double lam = policy(t, static_cast<long long>(x), no_jumps);
      const double up = (x + 1 < dim) ? v[x + 1] : v[x];
      dv[x] = lam * (up - v[x]) - phi_cost(lam);
    }
  };

  std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  auto rk4_step = [&](double tau, double h, const std::vector<double>& v,
                      std::vector<double>& out) {
    deriv(tau, v, k1);
    for (size_t i = 0; i < dim; ++i) tmp[i] = v[i] + 0.5 * h * k1[i];
    deriv(tau + 0.5 * h, tmp, k2);
    for (size_t i = 0; i < dim; ++i) tmp[i] = v[i] + 0.5 * h * k2[i];
    deriv(tau + 0.5 * h, tmp, k3);
    for (size_t i = 0; i < dim; ++i) tmp[i] = v[i] + h * k3[i];
    deriv(tau + h, tmp, k4);
    out.resize(dim);
    for (size_t i = 0; i < dim; ++i)
      out[i] = v[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  };

  double tau = 0.0;
  double h = T / 64.0;
  std::vector<double> full(dim), half(dim), two_half(dim);
  while (tau < T) {
    h = std::min(h, T - tau);
    rk4_step(tau, h, y, full);
    rk4_step(tau, 0.5 * h, y, half);
    rk4_step(tau + 0.5 * h, 0.5 * h, half, two_half);
    double err = 0.0;
    for (size_t i = 0; i < dim; ++i)
      err = std::max(err, std::abs(two_half[i] - full[i]) / 15.0);
    if (err <= tol * (h / T) || h < 1e-12 * T) {
      for (size_t i = 0; i < dim; ++i)
        y[i] = two_half[i] + (two_half[i] - full[i]) / 15.0;
      tau += h;
      if (err < tol * (h / T) / 32.0) h *= 2.0;
    } else {
      h *= 0.5;
    }
  }
  return y[0];
}

IntensityIdentityReport intensity_identity_check(const IntensityPolicy& policy,
                                                 const MarkovRate& H, double T,
                                                 std::int64_t n_traj,
                                                 std::uint64_t seed) {
  std::vector<double> jump_side(static_cast<size_t>(n_traj));
  std::vector<double> rate_side(static_cast<size_t>(n_traj));
  parallel_for(n_traj, [&](std::int64_t i) {
    const auto noise =
        PlanarNoise::sample(T, policy.bound, seed, static_cast<std::uint64_t>(i));
    const auto path = simulate_counting(policy, noise);
    double js = 0.0;
    for (size_t j = 0; j < path.jumps.size(); ++j)
      js += H(path.jumps[j], static_cast<long long>(j));
    double rs = 0.0;
    for_each_interval(path, T, [&](double lo, double hi, long long x,
                                   std::span<const double> jumps) {
      rs += gl_integrate(gl64(), lo, hi, [&](double t) {
        return H(t, x) * policy(t, x, jumps);
      });
    });
    jump_side[static_cast<size_t>(i)] = js;
    rate_side[static_cast<size_t>(i)] = rs;
  });
  std::vector<double> diff(static_cast<size_t>(n_traj));
  for (size_t i = 0; i < diff.size(); ++i) diff[i] = jump_side[i] - rate_side[i];
  const auto d = reduce(diff);
  IntensityIdentityReport report;
  report.jump_side = reduce(jump_side).estimate;
  report.rate_side = reduce(rate_side).estimate;
  report.diff_se = d.se;
  report.pass = std::abs(d.estimate) <= 3.0 * d.se ||
                std::abs(d.estimate) < 1e-12;
  return report;
}

FixedPointDiagnostics fixed_point_solve(const MarkovRate& G, double bound,
                                        double T, int n_iter,
                                        std::int64_t n_noise,
                                        std::uint64_t seed) {
  if (n_iter < 2) throw std::invalid_argument("need at least two iterations");
  FixedPointDiagnostics diag;
  diag.contraction_constant = bound;

  // Distance between the policies G(., X_a) and G(., X_b) read off two paths.
  const double C = bound;
  auto policy_distance = [&](const CountingPath& a, const CountingPath& b) {
    std::vector<double> cuts{0.0, T};
    cuts.insert(cuts.end(), a.jumps.begin(), a.jumps.end());
    cuts.insert(cuts.end(), b.jumps.begin(), b.jumps.end());
    std::sort(cuts.begin(), cuts.end());
    double acc = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double lo = cuts[i], hi = cuts[i + 1];
      if (!(hi > lo) || lo >= T) continue;
      const long long xa = a.count_before(0.5 * (lo + hi));
      const long long xb = b.count_before(0.5 * (lo + hi));
      acc += gl_integrate(gl16(), lo, std::min(hi, T), [&](double t) {
        return std::exp(-2.0 * C * t) * std::abs(G(t, xa) - G(t, xb));
      });
    }
    return acc;
  };

  std::vector<CountingPath> prev(static_cast<size_t>(n_noise));
  for (auto& p : prev) p.horizon = T;  // the zero-count state
  std::vector<CountingPath> cur(static_cast<size_t>(n_noise));
  std::vector<double> dist_acc(static_cast<size_t>(n_noise));

  for (int iter = 0; iter < n_iter; ++iter) {
    parallel_for(n_noise, [&](std::int64_t i) {
      const auto& state = prev[static_cast<size_t>(i)];
      auto policy = IntensityPolicy::from_history(
          bound, [&G, &state](double t, long long, std::span<const double>) {
            return G(t, state.count_before(t));
          });
      const auto noise =
          PlanarNoise::sample(T, bound, seed, static_cast<std::uint64_t>(i));
      cur[static_cast<size_t>(i)] = simulate_counting(policy, noise);
      dist_acc[static_cast<size_t>(i)] =
          policy_distance(cur[static_cast<size_t>(i)], state);
    });
    double d = 0.0;
    for (double v : dist_acc) d += v;
    d /= static_cast<double>(n_noise);
    diag.distances.push_back(d);
    if (d == 0.0) diag.converged = true;
    std::swap(prev, cur);
  }
  for (size_t i = 0; i + 1 < diag.distances.size(); ++i)
    diag.ratios.push_back(diag.distances[i] > 0.0
                              ? diag.distances[i + 1] / diag.distances[i]
                              : 0.0);
  return diag;
}

SupermartingaleReport supermartingale_check(const IntensityPolicy& policy,
                                            const Payoff& f, double T,
                                            std::int64_t n_traj,
                                            std::uint64_t seed) {
  SupermartingaleReport report;
  report.lhs = log_poisson_integral(f, T);
  report.mc = mc_functional(policy, f, T, n_traj, seed);
  const double slack = 3.0 * report.mc.se;
  report.pass_upper = report.mc.estimate <= report.lhs + slack;
  report.pass_equality = std::abs(report.mc.estimate - report.lhs) <= slack;
  return report;
}

}  // namespace lclab
