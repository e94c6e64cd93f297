#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lclab {

// Exact binomial coefficients via the Pascal recurrence. Indices above
// kBinomialIndexMax would overflow the 128-bit accumulators, so operations
// that need larger rows reject their input instead of silently losing bits.
inline constexpr int kBinomialIndexMax = 128;

unsigned __int128 binomial_exact(int n, int k);

// binomial(n, k) as a double, correctly rounded from the exact integer.
// Returns 0 for k < 0, n < 0 or k > n; throws std::domain_error for
// n > kBinomialIndexMax.
double binomial(int n, int k);

inline constexpr double kSeqRelTol = 1e-12;

// Balanced index quadruple k <= l <= m <= n with k + n = l + m.
struct Quadruple {
  int k = 0, l = 0, m = 0, n = 0;

  Quadruple() = default;
  Quadruple(int k_, int l_, int m_, int n_);

  // k == l forces m == n, in which case the associated measurement
  // vanishes identically.
  bool degenerate() const { return k == l; }

  friend bool operator==(const Quadruple&, const Quadruple&) = default;
  friend auto operator<=>(const Quadruple&, const Quadruple&) = default;
};

std::string to_string(const Quadruple& q);

// All balanced quadruples with n <= n_max, ordered lexicographically by
// (n - k, l - k, k). Includes the degenerate ones.
std::vector<Quadruple> enumerate_quadruples(int n_max);

struct SeqCertReport {
  bool pass = false;
  int violation_index = -1;  // -1 when no pointwise violation was found
  double margin = 0.0;       // smallest normalized margin seen
  std::string reason;
};

// Finite non-negative sequence indexed from 0, with support tracking and a
// certification stamp set by certify().
class LogConcaveSeq {
 public:
  LogConcaveSeq() = default;
  explicit LogConcaveSeq(std::vector<double> values);

  // Construct-and-certify; throws std::invalid_argument if the check fails.
  static LogConcaveSeq certified(std::vector<double> values,
                                 double rel_tol = kSeqRelTol);

  const std::vector<double>& values() const { return values_; }
  int size() const { return static_cast<int>(values_.size()); }

  // Entries outside [0, size) read as zero.
  double at(int i) const {
    return (i >= 0 && i < size()) ? values_[static_cast<size_t>(i)] : 0.0;
  }

  // Indices of the first and last strictly positive entry; empty when the
  // sequence is identically zero.
  std::optional<std::pair<int, int>> support() const { return support_; }

  bool is_certified() const { return certified_; }
  SeqCertReport certify(double rel_tol = kSeqRelTol);

 private:
  std::vector<double> values_;
  std::optional<std::pair<int, int>> support_;
  bool certified_ = false;
};

// Pass iff the support is a contiguous index interval and
// v[i]^2 >= (1 - rel_tol) * v[i-1] * v[i+1] at every interior index.
// Margins are normalized by the geometric mean of the compared products;
// products below 1e-300 are treated as zero.
SeqCertReport is_log_concave(const LogConcaveSeq& seq,
                             double rel_tol = kSeqRelTol);

// seq[l]*seq[m] - seq[k]*seq[n]; missing entries read as zero.
double measurement_defect(const LogConcaveSeq& seq, const Quadruple& q);

// c_n = sum_k binom(n,k) a_k b_{n-k}. Both inputs must be certified;
// the output is certified before it is returned.
LogConcaveSeq walkup_convolve(const LogConcaveSeq& a, const LogConcaveSeq& b);

// c_k = sum_{n>=k} binom(n,k) a_n, same length as the input.
LogConcaveSeq binomial_tail_transform(const LogConcaveSeq& a);

struct CombIneqResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

// lhs = sum_n binom(n,k) binom(l-n,k) a_n a_{l-n}
// rhs = sum_n binom(n,k-1) binom(l-n,k+1) a_n a_{l-n}
// pass iff lhs >= rhs - rel_tol * (lhs + rhs).
CombIneqResult combinatorial_inequality_check(const LogConcaveSeq& a, int k,
                                              int l,
                                              double rel_tol = kSeqRelTol);

}  // namespace lclab
