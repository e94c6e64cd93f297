#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace lclab {

struct Atom {
  double x = 0.0;
  double w = 0.0;
};

// Density (sum_j coeffs[j] x^j) * exp(-rate*x) on [lo, hi). The rate field
// keeps exponential tilts closed; hi may be +infinity when rate > 0.
struct Piece {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> coeffs;
  double rate = 0.0;

  bool unbounded() const { return std::isinf(hi); }
  double poly_at(double x) const;
  double density_at(double x) const {
    return poly_at(x) * std::exp(-rate * x);
  }
};

struct MeasureCertReport {
  bool pass = false;
  std::string kind;    // "empty", "atom" or "density" when pass
  std::string reason;  // first failure description
  double location = std::numeric_limits<double>::quiet_NaN();
};

// Finite measure on [0, inf): finitely many atoms plus a piecewise
// polynomial-times-exponential density. Signed variants carry transform
// outputs before their non-negativity has been certified.
class HalfLineMeasure {
 public:
  HalfLineMeasure() = default;
  HalfLineMeasure(std::vector<Atom> atoms, std::vector<Piece> pieces,
                  bool is_signed = false);

  static HalfLineMeasure zero() { return HalfLineMeasure(); }
  static HalfLineMeasure dirac(double x0, double weight = 1.0);
  static HalfLineMeasure uniform(double a, double b);
  static HalfLineMeasure exponential(double alpha);
  // Normalized Gamma(p, beta) for integer p >= 1; exact via the rate field.
  static HalfLineMeasure gamma_integer(int p, double beta);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  bool is_signed() const { return signed_; }
  bool empty() const { return atoms_.empty() && pieces_.empty(); }

  double total_mass() const;
  double density_at(double x) const;  // atoms excluded

  // a_t(n) = int x^n/n! e^{-tx} dmu(x).
  double moment(double t, int n) const;
  // t^n a_t(n); stays bounded by the total mass for any n, so it is the
  // right quantity for the large-n regime.
  double scaled_moment(double t, int n) const;

  // Mass of [lo, hi), plus half the atom weight at hi when flagged.
  double interval_mass(double lo, double hi,
                       bool half_weight_at_hi = false) const;

  HalfLineMeasure scaled(double c) const;
  // Caller vouches for non-negativity (used after an external certification).
  HalfLineMeasure certified_nonnegative() const;

  double sup_density() const;  // max |density| over a sampling grid

 private:
  std::vector<Atom> atoms_;
  std::vector<Piece> pieces_;
  bool signed_ = false;
};

// P_j: density x^j / j! with respect to mu.
HalfLineMeasure monomial_reweight(const HalfLineMeasure& mu, int j);

// E_t: density exp(-t x) with respect to mu. Negative t is allowed as long
// as every unbounded piece keeps a positive rate.
HalfLineMeasure exponential_tilt(const HalfLineMeasure& mu, double t);

// Exact convolution. Atoms convolve freely; density pieces must all share
// one exponential rate (rate-zero pieces always qualify).
HalfLineMeasure convolve(const HalfLineMeasure& a, const HalfLineMeasure& b);

// ca * a + cb * b; the result is signed whenever a sign can appear.
HalfLineMeasure combine(const HalfLineMeasure& a, const HalfLineMeasure& b,
                        double ca, double cb);

// Pass iff the measure is a single atom, or has no atoms and a log-concave
// density supported on an interval. Densities are checked on a refinement
// grid of 512 points per piece plus the breakpoints, with one-sided
// log-derivative monotonicity tolerance 1e-9.
MeasureCertReport certify_log_concave_measure(const HalfLineMeasure& mu);

// Sum of |atom weights| plus the integral of |density| (composite
// quadrature; exact up to sampling of sign changes).
double total_variation(const HalfLineMeasure& mu);

// Grammar: name '(' number {',' number} ')' with names dirac, uniform,
// exponential, gamma. Throws std::invalid_argument on anything else.
HalfLineMeasure parse_named_measure(std::string_view text);

// int_lo^hi x^j e^{-s x} dx for any real s (hi may be +infinity if s > 0).
double tilted_monomial_mass(int j, double s, double lo, double hi);

}  // namespace lclab
