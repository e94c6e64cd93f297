#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "lclab/measure.hpp"
#include "lclab/seq.hpp"

namespace lclab {

// Anything that can produce the coefficients a_t(n) of a Laplace transform.
// Measures implement it through exact integration; families with closed-form
// moments (Gamma) implement it directly, bypassing any piece representation.
class MomentSource {
 public:
  virtual ~MomentSource() = default;
  virtual double moment(double t, int n) const = 0;         // a_t(n)
  virtual double scaled_moment(double t, int n) const = 0;  // t^n a_t(n)
  virtual double mass() const = 0;
};

class MeasureMomentSource final : public MomentSource {
 public:
  explicit MeasureMomentSource(HalfLineMeasure mu) : mu_(std::move(mu)) {}
  double moment(double t, int n) const override { return mu_.moment(t, n); }
  double scaled_moment(double t, int n) const override {
    return mu_.scaled_moment(t, n);
  }
  double mass() const override { return mu_.total_mass(); }
  const HalfLineMeasure& measure() const { return mu_; }

 private:
  HalfLineMeasure mu_;
};

// a_t(n) = scale * Gamma(n+p) / (n! (t+beta)^(n+p)) for real p > 0.
// scale = beta^p / Gamma(p) gives the unit-mass Gamma(p, beta) law.
class GammaMomentSource final : public MomentSource {
 public:
  GammaMomentSource(double p, double beta, double scale = 1.0);
  double moment(double t, int n) const override;
  double scaled_moment(double t, int n) const override;
  double mass() const override;
  static GammaMomentSource normalized(double p, double beta);

 private:
  double p_, beta_, scale_;
};

struct MomentTable {
  double t = 0.0;
  std::vector<double> values;
};

MomentTable build_moment_table(const MomentSource& src, double t, int n_max);

// (a_t(n))_{n=0..N} as a plain sequence; no certification is performed.
LogConcaveSeq taylor_coeffs(const MomentSource& src, double t, int n_max);

// c_q(t) = a_t(l) a_t(m) - a_t(k) a_t(n).
double measurement(const MomentSource& src, const Quadruple& q, double t);

// A measurement as a function of t, memoized over the evaluation grid.
// The cache is unguarded: share across threads only read-only after warmup,
// or keep one instance per thread.
class MeasurementFn {
 public:
  MeasurementFn(const MomentSource& src, const Quadruple& q)
      : src_(&src), q_(q) {}

  const Quadruple& quadruple() const { return q_; }
  double operator()(double t) const;
  size_t cache_size() const { return cache_.size(); }

 private:
  const MomentSource* src_;
  Quadruple q_;
  mutable std::vector<std::pair<double, double>> cache_;  // sorted by t
};

// -c_q' written as a non-negative integer combination of measurements:
// the returned pairs (coef, q_i) satisfy -c_q'(t) = sum coef_i c_{q_i}(t).
std::vector<std::pair<long long, Quadruple>> derivative_decomposition(
    const Quadruple& q);

// (-1)^j c_q^(j)(t) via j-fold application of the decomposition; no numeric
// differentiation is involved.
double signed_derivative(const MomentSource& src, const Quadruple& q, double t,
                         int j);

// Scale of the positive terms appearing in the j-th decomposition of c_q;
// the natural denominator for relative sign tolerances.
double signed_derivative_scale(const MomentSource& src, const Quadruple& q,
                               double t, int j);

// sum_{n=0}^{floor(R t)} t^n a_t(n). Converges to mu([0,R)) + mu({R})/2.
double post_inversion_sum(const MomentSource& src, double t, double R);

// max_n t^n a_t(n), scanned past the mode of the (unimodal) sequence.
double sup_scaled_moment(const MomentSource& src, double t);

// Log-linear interpolation of the node values g(n/t) = t^{n+1} a_t(n).
class GtDensity {
 public:
  GtDensity(const MomentSource& src, double t);

  double t() const { return t_; }
  double operator()(double x) const { return std::exp(log_value(x)); }
  double log_value(double x) const;
  double integral(double lo, double hi) const;
  double sup() const;

  // Log-concavity holds iff the piecewise-linear log has non-increasing
  // slopes; checked exactly at the nodes.
  SeqCertReport certify_log_concave() const;

 private:
  double log_node(int n) const;
  void ensure_nodes(int n) const;

  const MomentSource* src_;
  double t_;
  mutable std::vector<double> log_nodes_;  // log(t^{n+1} a_t(n))
};

double gt_interval_mass(const MomentSource& src, double t, double R);

struct ConvexityReport {
  bool pass = false;
  double min_slack = 0.0;  // most negative convexity slack, normalized
  int violation_index = -1;
  std::vector<double> h;  // the evaluated function on the grid
};

// h(t) = ((n-1)! a_t(n-1))^(-1/n) on the grid; convexity via interpolation
// slack at every interior node, tolerance tol_factor * max|h|.
ConvexityReport root_convexity_check(const MomentSource& src, int n,
                                     std::span<const double> t_grid,
                                     double tol_factor = 1e-9);

std::vector<double> geometric_grid(double lo, double hi, int points = 33);

}  // namespace lclab
