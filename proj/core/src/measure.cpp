#include "lclab/measure.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lclab/piecewise.hpp"

namespace lclab {

namespace {

using boost::math::gamma_p;
using boost::math::gamma_q;

constexpr double kInf = std::numeric_limits<double>::infinity();

double factorial(int n) {
  static const std::vector<double> table = [] {
    std::vector<double> t(171);
    t[0] = 1.0;
    for (int i = 1; i <= 170; ++i) t[static_cast<size_t>(i)] = t[static_cast<size_t>(i - 1)] * i;
    return t;
  }();
  if (n < 0 || n > 170) throw std::domain_error("factorial out of double range");
  return table[static_cast<size_t>(n)];
}

// P(k, z2) - P(k, z1) for the regularized lower incomplete gamma, evaluated
// through whichever of P or Q avoids cancellation. z2 = +inf is allowed.
double reg_gamma_diff(double k, double z1, double z2) {
  if (std::isinf(z2)) {
    const double q = (z1 <= 0.0) ? 1.0 : gamma_q(k, z1);
    return q;
  }
  if (z1 <= 0.0) return gamma_p(k, z2);
  const double p1 = gamma_p(k, z1);
  double d;
  if (p1 > 0.5)
    d = gamma_q(k, z1) - gamma_q(k, z2);
  else
    d = gamma_p(k, z2) - p1;
  return std::max(d, 0.0);
}

std::vector<double> poly_derivative(const std::vector<double>& c) {
  std::vector<double> d;
  for (size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<double>(i));
  return d;
}

double eval_poly(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (size_t i = c.size(); i-- > 0;) v = v * x + c[i];
  return v;
}

// Sampling span for pieces with an infinite right endpoint: far enough out
// that exp(-rate*(span)) has decayed below any tolerance in play.
double effective_span(const Piece& p) {
  const double deg = static_cast<double>(p.coeffs.size());
  return (80.0 + 20.0 * deg) / p.rate;
}

double piece_upper_for_sampling(const Piece& p) {
  return p.unbounded() ? p.lo + effective_span(p) : p.hi;
}

std::vector<double> sample_grid(double lo, double hi, int n) {
  std::vector<double> g;
  g.reserve(static_cast<size_t>(n) + 2);
  const double h = hi - lo;
  g.push_back(lo + 1e-9 * h);
  for (int i = 0; i < n; ++i)
    g.push_back(lo + h * (static_cast<double>(i) + 0.5) / static_cast<double>(n));
  g.push_back(hi - 1e-9 * h);
  return g;
}

double poly_abs_eval(const std::vector<double>& c, double x) {
  double acc = 0.0, pw = 1.0;
  for (double coef : c) {
    acc += std::abs(coef) * pw;
    pw *= x;
  }
  return acc;
}

void validate_unsigned(const std::vector<Atom>& atoms,
                       const std::vector<Piece>& pieces) {
  for (const auto& a : atoms)
    if (a.w < 0.0)
      throw std::invalid_argument("unsigned measure has a negative atom weight");
  for (const auto& p : pieces) {
    const auto grid = sample_grid(p.lo, piece_upper_for_sampling(p), 64);
    std::vector<double> values(grid.size());
    double sup = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) {
      values[i] = p.density_at(grid[i]);
      sup = std::max(sup, std::abs(values[i]));
    }
    for (size_t i = 0; i < grid.size(); ++i) {
      // allowance for evaluation cancellation where the density vanishes
      const double tol = 1e-9 * std::max(sup, 1e-300) +
                         1e-11 * poly_abs_eval(p.coeffs, grid[i]);
      if (values[i] < -tol)
        throw std::invalid_argument("unsigned measure has negative density near x = " +
                                    std::to_string(grid[i]));
    }
  }
}

std::vector<PieceT<double>> to_kernel(const std::vector<Piece>& pieces) {
  std::vector<PieceT<double>> out;
  out.reserve(pieces.size());
  for (const auto& p : pieces) {
    PieceT<double> k;
    k.lo = p.lo;
    k.hi = p.unbounded() ? 0.0 : p.hi;
    k.hi_inf = p.unbounded();
    k.p.c = p.coeffs;
    out.push_back(std::move(k));
  }
  return out;
}

// The convolution kernel runs in extended precision: its monomial-basis
// expansions cancel heavily, and the extra mantissa bits keep the rounded
// double coefficients accurate to their own ulp.
std::vector<PieceT<long double>> to_kernel_ld(const std::vector<Piece>& pieces) {
  std::vector<PieceT<long double>> out;
  out.reserve(pieces.size());
  for (const auto& p : pieces) {
    PieceT<long double> k;
    k.lo = p.lo;
    k.hi = p.unbounded() ? 0.0L : static_cast<long double>(p.hi);
    k.hi_inf = p.unbounded();
    k.p.c.assign(p.coeffs.begin(), p.coeffs.end());
    out.push_back(std::move(k));
  }
  return out;
}

std::vector<Piece> from_kernel_ld(const std::vector<PieceT<long double>>& pieces,
                                  double rate) {
  std::vector<Piece> out;
  out.reserve(pieces.size());
  for (const auto& k : pieces) {
    Piece p;
    p.lo = static_cast<double>(k.lo);
    p.hi = k.hi_inf ? kInf : static_cast<double>(k.hi);
    p.coeffs.assign(k.p.c.begin(), k.p.c.end());
    p.rate = rate;
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Piece> from_kernel(const std::vector<PieceT<double>>& pieces,
                               double rate) {
  std::vector<Piece> out;
  out.reserve(pieces.size());
  for (const auto& k : pieces) {
    Piece p;
    p.lo = k.lo;
    p.hi = k.hi_inf ? kInf : k.hi;
    p.coeffs = k.p.c;
    p.rate = rate;
    out.push_back(std::move(p));
  }
  return out;
}

// All density pieces across both operands must carry one common rate for the
// piece-by-piece sliding integral to stay in closed form.
double common_rate(const HalfLineMeasure& a, const HalfLineMeasure& b,
                   const char* op) {
  double rate = 0.0;
  bool seen = false;
  for (const auto* m : {&a, &b})
    for (const auto& p : m->pieces()) {
      if (!seen) {
        rate = p.rate;
        seen = true;
      } else if (std::abs(p.rate - rate) > 1e-12 * (1.0 + std::abs(rate))) {
        throw std::invalid_argument(std::string(op) +
                                    " requires all density pieces to share one exponential rate");
      }
    }
  return rate;
}

}  // namespace

double Piece::poly_at(double x) const { return eval_poly(coeffs, x); }

HalfLineMeasure::HalfLineMeasure(std::vector<Atom> atoms, std::vector<Piece> pieces,
                                 bool is_signed)
    : signed_(is_signed) {
  for (auto& a : atoms) {
    if (!std::isfinite(a.x) || a.x < 0.0)
      throw std::invalid_argument("atom location must be finite and >= 0");
    if (!std::isfinite(a.w)) throw std::invalid_argument("atom weight must be finite");
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& l, const Atom& r) { return l.x < r.x; });
  for (const auto& a : atoms) {
    if (a.w == 0.0) continue;
    if (!atoms_.empty() && a.x == atoms_.back().x)
      atoms_.back().w += a.w;
    else
      atoms_.push_back(a);
  }

  for (auto& p : pieces) {
    while (!p.coeffs.empty() && p.coeffs.back() == 0.0) p.coeffs.pop_back();
    if (p.coeffs.empty()) continue;
    if (!std::isfinite(p.lo) || p.lo < 0.0 || !(p.lo < p.hi))
      throw std::invalid_argument("piece must satisfy 0 <= lo < hi");
    if (p.unbounded() && !(p.rate > 0.0))
      throw std::invalid_argument("unbounded piece requires a positive rate");
    for (double c : p.coeffs)
      if (!std::isfinite(c)) throw std::invalid_argument("piece coefficient not finite");
    pieces_.push_back(std::move(p));
  }
  std::sort(pieces_.begin(), pieces_.end(),
            [](const Piece& l, const Piece& r) { return l.lo < r.lo; });
  for (size_t i = 0; i + 1 < pieces_.size(); ++i)
    if (pieces_[i].hi > pieces_[i + 1].lo + 1e-12 * (1.0 + std::abs(pieces_[i + 1].lo)))
      throw std::invalid_argument("pieces overlap");

  if (!signed_) validate_unsigned(atoms_, pieces_);
}

HalfLineMeasure HalfLineMeasure::dirac(double x0, double weight) {
  return HalfLineMeasure({Atom{x0, weight}}, {}, weight < 0.0);
}

HalfLineMeasure HalfLineMeasure::uniform(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("uniform(a, b) requires a < b");
  Piece p;
  p.lo = a;
  p.hi = b;
  p.coeffs = {1.0 / (b - a)};
  return HalfLineMeasure({}, {p});
}

HalfLineMeasure HalfLineMeasure::exponential(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("exponential(alpha) requires alpha > 0");
  Piece p;
  p.lo = 0.0;
  p.hi = kInf;
  p.coeffs = {alpha};
  p.rate = alpha;
  return HalfLineMeasure({}, {p});
}

HalfLineMeasure HalfLineMeasure::gamma_integer(int p, double beta) {
  if (p < 1) throw std::invalid_argument("gamma_integer requires integer p >= 1");
  if (!(beta > 0.0)) throw std::invalid_argument("gamma_integer requires beta > 0");
  Piece piece;
  piece.lo = 0.0;
  piece.hi = kInf;
  piece.rate = beta;
  piece.coeffs.assign(static_cast<size_t>(p), 0.0);
  piece.coeffs.back() = std::pow(beta, p) / factorial(p - 1);
  return HalfLineMeasure({}, {piece});
}

double HalfLineMeasure::total_mass() const {
  double m = 0.0;
  for (const auto& a : atoms_) m += a.w;
  for (const auto& p : pieces_)
    for (size_t d = 0; d < p.coeffs.size(); ++d)
      if (p.coeffs[d] != 0.0)
        m += p.coeffs[d] * tilted_monomial_mass(static_cast<int>(d), p.rate, p.lo, p.hi);
  return m;
}

double HalfLineMeasure::density_at(double x) const {
  for (const auto& p : pieces_)
    if (x >= p.lo && (p.unbounded() || x < p.hi)) return p.density_at(x);
  return 0.0;
}

double HalfLineMeasure::moment(double t, int n) const {
  if (n < 0) throw std::invalid_argument("moment order must be >= 0");
  double acc = 0.0;
  for (const auto& a : atoms_) {
    if (a.x == 0.0) {
      if (n == 0) acc += a.w;
      continue;
    }
    acc += a.w * std::exp(n * std::log(a.x) - t * a.x - std::lgamma(n + 1.0));
  }
  for (const auto& p : pieces_) {
    const double s = t + p.rate;
    if (s <= 0.0) {
      if (p.unbounded()) throw std::domain_error("moment diverges: t + rate <= 0 on unbounded support");
      for (size_t d = 0; d < p.coeffs.size(); ++d)
        if (p.coeffs[d] != 0.0)
          acc += p.coeffs[d] * tilted_monomial_mass(n + static_cast<int>(d), s, p.lo, p.hi) *
                 std::exp(-std::lgamma(n + 1.0));
      continue;
    }
    const double log_s = std::log(s);
    for (size_t d = 0; d < p.coeffs.size(); ++d) {
      if (p.coeffs[d] == 0.0) continue;
      const double k = n + static_cast<double>(d) + 1.0;
      const double dp = reg_gamma_diff(k, s * p.lo, p.unbounded() ? kInf : s * p.hi);
      if (dp == 0.0) continue;
      acc += p.coeffs[d] *
             std::exp(std::lgamma(k) - std::lgamma(n + 1.0) - k * log_s) * dp;
    }
  }
  return acc;
}

double HalfLineMeasure::scaled_moment(double t, int n) const {
  if (!(t > 0.0)) throw std::invalid_argument("scaled_moment requires t > 0");
  if (n < 0) throw std::invalid_argument("moment order must be >= 0");
  const double log_t = std::log(t);
  double acc = 0.0;
  for (const auto& a : atoms_) {
    if (a.x == 0.0) {
      if (n == 0) acc += a.w;
      continue;
    }
    acc += a.w * std::exp(n * std::log(t * a.x) - t * a.x - std::lgamma(n + 1.0));
  }
  for (const auto& p : pieces_) {
    const double s = t + p.rate;
    if (s <= 0.0) {
      if (p.unbounded()) throw std::domain_error("moment diverges: t + rate <= 0 on unbounded support");
      for (size_t d = 0; d < p.coeffs.size(); ++d)
        if (p.coeffs[d] != 0.0)
          acc += p.coeffs[d] * tilted_monomial_mass(n + static_cast<int>(d), s, p.lo, p.hi) *
                 std::exp(n * log_t - std::lgamma(n + 1.0));
      continue;
    }
    const double log_s = std::log(s);
    for (size_t d = 0; d < p.coeffs.size(); ++d) {
      if (p.coeffs[d] == 0.0) continue;
      const double k = n + static_cast<double>(d) + 1.0;
      const double dp = reg_gamma_diff(k, s * p.lo, p.unbounded() ? kInf : s * p.hi);
      if (dp == 0.0) continue;
      acc += p.coeffs[d] *
             std::exp(n * log_t + std::lgamma(k) - std::lgamma(n + 1.0) - k * log_s) * dp;
    }
  }
  return acc;
}

double HalfLineMeasure::interval_mass(double lo, double hi, bool half_weight_at_hi) const {
  if (!(lo >= 0.0) || !(lo < hi))
    throw std::invalid_argument("interval_mass requires 0 <= lo < hi");
  double m = 0.0;
  for (const auto& a : atoms_) {
    if (a.x >= lo && a.x < hi) m += a.w;
    if (half_weight_at_hi && a.x == hi) m += 0.5 * a.w;
  }
  for (const auto& p : pieces_) {
    const double u = std::max(lo, p.lo);
    const double v = std::min(hi, p.hi);
    if (!(u < v)) continue;
    for (size_t d = 0; d < p.coeffs.size(); ++d)
      if (p.coeffs[d] != 0.0)
        m += p.coeffs[d] * tilted_monomial_mass(static_cast<int>(d), p.rate, u, v);
  }
  return m;
}

HalfLineMeasure HalfLineMeasure::scaled(double c) const {
  std::vector<Atom> atoms = atoms_;
  for (auto& a : atoms) a.w *= c;
  std::vector<Piece> pieces = pieces_;
  for (auto& p : pieces)
    for (auto& coef : p.coeffs) coef *= c;
  return HalfLineMeasure(std::move(atoms), std::move(pieces), signed_ || c < 0.0);
}

HalfLineMeasure HalfLineMeasure::certified_nonnegative() const {
  HalfLineMeasure copy = *this;
  copy.signed_ = false;
  return copy;
}

double HalfLineMeasure::sup_density() const {
  double sup = 0.0;
  for (const auto& p : pieces_)
    for (double x : sample_grid(p.lo, piece_upper_for_sampling(p), 64))
      sup = std::max(sup, std::abs(p.density_at(x)));
  return sup;
}

double tilted_monomial_mass(int j, double s, double lo, double hi) {
  if (j < 0) throw std::invalid_argument("monomial degree must be >= 0");
  if (!(lo >= 0.0) || !(lo < hi)) throw std::invalid_argument("bad integration bounds");
  if (std::isinf(hi)) {
    if (!(s > 0.0)) throw std::domain_error("divergent integral on unbounded range");
    return std::exp(std::lgamma(j + 1.0) - (j + 1.0) * std::log(s)) *
           ((lo <= 0.0) ? 1.0 : gamma_q(j + 1.0, s * lo));
  }
  if (s > 0.0) {
    const double dp = reg_gamma_diff(j + 1.0, s * lo, s * hi);
    return std::exp(std::lgamma(j + 1.0) - (j + 1.0) * std::log(s)) * dp;
  }
  if (s == 0.0) {
    if (lo == 0.0) return std::exp((j + 1.0) * std::log(hi)) / (j + 1.0);
    const double r = std::exp((j + 1.0) * (std::log(lo) - std::log(hi)));
    return std::exp((j + 1.0) * std::log(hi) + std::log1p(-r)) / (j + 1.0);
  }
  // Growing exponential on a bounded interval: integrate by parts upward.
  // Fine for the small degrees negative tilts are used with.
  double integral = (std::exp(-s * lo) - std::exp(-s * hi)) / s;
  for (int i = 1; i <= j; ++i)
    integral = (std::pow(lo, i) * std::exp(-s * lo) - std::pow(hi, i) * std::exp(-s * hi)) / s +
               (static_cast<double>(i) / s) * integral;
  return integral;
}

HalfLineMeasure monomial_reweight(const HalfLineMeasure& mu, int j) {
  if (j < 0) throw std::invalid_argument("monomial_reweight requires j >= 0");
  if (j == 0) return mu;
  std::vector<Atom> atoms;
  for (const auto& a : mu.atoms()) {
    if (a.x == 0.0) continue;  // x^j kills an atom at the origin
    double f;
    if (j <= 170) {
      f = std::pow(a.x, j) / factorial(j);
      if (!std::isfinite(f)) f = std::exp(j * std::log(a.x) - std::lgamma(j + 1.0));
    } else {
      f = std::exp(j * std::log(a.x) - std::lgamma(j + 1.0));
    }
    atoms.push_back(Atom{a.x, a.w * f});
  }
  std::vector<Piece> pieces;
  for (const auto& p : mu.pieces()) {
    Piece q = p;
    q.coeffs.assign(p.coeffs.size() + static_cast<size_t>(j), 0.0);
    const double inv_fact = 1.0 / factorial(j);
    for (size_t d = 0; d < p.coeffs.size(); ++d)
      q.coeffs[d + static_cast<size_t>(j)] = p.coeffs[d] * inv_fact;
    pieces.push_back(std::move(q));
  }
  return HalfLineMeasure(std::move(atoms), std::move(pieces), mu.is_signed());
}

HalfLineMeasure exponential_tilt(const HalfLineMeasure& mu, double t) {
  if (t == 0.0) return mu;
  std::vector<Atom> atoms;
  for (const auto& a : mu.atoms()) atoms.push_back(Atom{a.x, a.w * std::exp(-t * a.x)});
  std::vector<Piece> pieces;
  for (const auto& p : mu.pieces()) {
    Piece q = p;
    q.rate = p.rate + t;
    if (q.unbounded() && !(q.rate > 0.0))
      throw std::domain_error("exponential_tilt makes the measure divergent");
    pieces.push_back(std::move(q));
  }
  return HalfLineMeasure(std::move(atoms), std::move(pieces), mu.is_signed());
}

HalfLineMeasure convolve(const HalfLineMeasure& a, const HalfLineMeasure& b) {
  const bool result_signed = a.is_signed() || b.is_signed();
  std::vector<Atom> atoms;
  for (const auto& x : a.atoms())
    for (const auto& y : b.atoms()) atoms.push_back(Atom{x.x + y.x, x.w * y.w});

  const double rate = common_rate(a, b, "convolve");

  std::vector<PieceT<long double>> parts;
  auto append_translated = [&parts](const std::vector<Piece>& src, const Atom& at) {
    for (const auto& p : src) {
      PieceT<long double> q;
      q.lo = static_cast<long double>(p.lo) + at.x;
      q.hi_inf = p.unbounded();
      q.hi = q.hi_inf ? 0.0L : static_cast<long double>(p.hi) + at.x;
      PolyT<long double> poly;
      poly.c.assign(p.coeffs.begin(), p.coeffs.end());
      q.p = poly_translate(poly, static_cast<long double>(-at.x));
      const long double w =
          static_cast<long double>(at.w) * std::exp(static_cast<long double>(p.rate) * at.x);
      for (auto& c : q.p.c) c *= w;
      parts.push_back(std::move(q));
    }
  };
  for (const auto& at : a.atoms()) append_translated(b.pieces(), at);
  for (const auto& at : b.atoms()) append_translated(a.pieces(), at);

  if (!a.pieces().empty() && !b.pieces().empty())
    for (auto& p : convolve_pieces(to_kernel_ld(a.pieces()), to_kernel_ld(b.pieces())))
      parts.push_back(std::move(p));

  // Translated copies may overlap; flatten onto a common refinement before
  // rounding back to double coefficients.
  std::vector<PieceT<long double>> flat;
  for (const auto& p : parts)
    flat = flat.empty() ? std::vector<PieceT<long double>>{p}
                        : combine_pieces(flat, {p}, 1.0L, 1.0L);
  return HalfLineMeasure(std::move(atoms), from_kernel_ld(flat, rate), result_signed);
}

HalfLineMeasure combine(const HalfLineMeasure& a, const HalfLineMeasure& b,
                        double ca, double cb) {
  std::vector<Atom> atoms;
  for (const auto& x : a.atoms()) atoms.push_back(Atom{x.x, ca * x.w});
  for (const auto& x : b.atoms()) atoms.push_back(Atom{x.x, cb * x.w});
  std::sort(atoms.begin(), atoms.end(), [](const Atom& l, const Atom& r) { return l.x < r.x; });
  std::vector<Atom> merged;
  for (const auto& at : atoms) {
    if (!merged.empty() &&
        std::abs(at.x - merged.back().x) <= 1e-12 * (1.0 + std::abs(at.x)))
      merged.back().w += at.w;
    else
      merged.push_back(at);
  }

  const double rate = common_rate(a, b, "combine");
  auto pieces = from_kernel(
      combine_pieces(to_kernel(a.pieces()), to_kernel(b.pieces()), ca, cb), rate);

  const bool result_signed = a.is_signed() || b.is_signed() || ca < 0.0 || cb < 0.0;
  return HalfLineMeasure(std::move(merged), std::move(pieces), result_signed);
}

MeasureCertReport certify_log_concave_measure(const HalfLineMeasure& mu) {
  MeasureCertReport report;
  if (mu.is_signed()) {
    report.reason = "measure is signed; certify after establishing non-negativity";
    return report;
  }
  if (mu.empty()) {
    report.pass = true;
    report.kind = "empty";
    return report;
  }
  if (!mu.atoms().empty()) {
    if (!mu.pieces().empty()) {
      report.reason = "mixture of atom and density";
      report.location = mu.atoms().front().x;
      return report;
    }
    if (mu.atoms().size() > 1) {
      report.reason = "more than one atom";
      report.location = mu.atoms()[1].x;
      return report;
    }
    report.pass = true;
    report.kind = "atom";
    return report;
  }

  const auto& pieces = mu.pieces();
  for (size_t i = 0; i + 1 < pieces.size(); ++i) {
    if (pieces[i + 1].lo - pieces[i].hi > 1e-12 * (1.0 + std::abs(pieces[i].hi))) {
      report.reason = "support is not an interval (gap after x = " +
                      std::to_string(pieces[i].hi) + ")";
      report.location = pieces[i].hi;
      return report;
    }
    const double left = pieces[i].density_at(pieces[i].hi);
    const double right = pieces[i + 1].density_at(pieces[i + 1].lo);
    const double scale = std::max({std::abs(left), std::abs(right), 1e-300});
    if (std::abs(left - right) > 1e-9 * scale) {
      report.reason = "density discontinuous inside the support at x = " +
                      std::to_string(pieces[i].hi);
      report.location = pieces[i].hi;
      return report;
    }
  }

  constexpr double kSlopeTol = 1e-9;
  double prev_psi = kInf;
  bool have_prev = false;
  for (const auto& p : pieces) {
    if (p.unbounded() && p.coeffs.back() < 0.0) {
      report.reason = "density turns negative on the unbounded tail";
      report.location = p.lo;
      return report;
    }
    const auto deriv = poly_derivative(p.coeffs);
    for (double x : sample_grid(p.lo, piece_upper_for_sampling(p), 512)) {
      const double v = eval_poly(p.coeffs, x);
      if (!(v > 0.0)) {
        report.reason = "density vanishes inside the support at x = " + std::to_string(x);
        report.location = x;
        return report;
      }
      const double psi = eval_poly(deriv, x) / v - p.rate;
      if (have_prev && psi > prev_psi + kSlopeTol) {
        report.reason = "log-density derivative increases at x = " + std::to_string(x);
        report.location = x;
        return report;
      }
      prev_psi = psi;
      have_prev = true;
    }
  }
  report.pass = true;
  report.kind = "density";
  return report;
}

double total_variation(const HalfLineMeasure& mu) {
  double tv = 0.0;
  for (const auto& a : mu.atoms()) tv += std::abs(a.w);
  for (const auto& p : mu.pieces()) {
    const double lo = p.lo;
    const double hi = piece_upper_for_sampling(p);
    const int n = 4096;
    const double h = (hi - lo) / n;
    double acc = std::abs(p.density_at(lo)) + std::abs(p.density_at(hi));
    for (int i = 1; i < n; ++i)
      acc += (2.0 + 2.0 * (i % 2)) * std::abs(p.density_at(lo + i * h));
    tv += acc * h / 3.0;
  }
  return tv;
}

HalfLineMeasure parse_named_measure(std::string_view text) {
  auto fail = [&] {
    throw std::invalid_argument("cannot parse measure '" + std::string(text) +
                                "'; expected name(arg, ...)");
  };
  size_t open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') fail();
  std::string name(text.substr(0, open));
  std::string args(text.substr(open + 1, text.size() - open - 2));
  std::vector<double> vals;
  size_t pos = 0;
  while (pos <= args.size() && !args.empty()) {
    size_t comma = args.find(',', pos);
    std::string tok = args.substr(pos, comma == std::string::npos ? std::string::npos
                                                                  : comma - pos);
    try {
      size_t used = 0;
      vals.push_back(std::stod(tok, &used));
      while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
      if (used != tok.size()) fail();
    } catch (const std::invalid_argument&) {
      fail();
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (name == "dirac" && vals.size() == 1) return HalfLineMeasure::dirac(vals[0]);
  if (name == "uniform" && vals.size() == 2) return HalfLineMeasure::uniform(vals[0], vals[1]);
  if (name == "exponential" && vals.size() == 1) return HalfLineMeasure::exponential(vals[0]);
  if (name == "gamma" && vals.size() == 2) {
    const double p = vals[0];
    if (std::abs(p - std::round(p)) > 1e-9 || p < 1.0)
      throw std::invalid_argument(
          "gamma(p, beta) is representable only for integer p >= 1; "
          "use the closed-form moment source for real p");
    return HalfLineMeasure::gamma_integer(static_cast<int>(std::lround(p)), vals[1]);
  }
  fail();
  return HalfLineMeasure();  // unreachable
}

}  // namespace lclab
