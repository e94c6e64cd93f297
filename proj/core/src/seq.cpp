#include "lclab/seq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lclab {

namespace {

constexpr double kZeroProductFloor = 1e-300;

const std::vector<std::vector<unsigned __int128>>& pascal_table() {
  static const std::vector<std::vector<unsigned __int128>> table = [] {
    std::vector<std::vector<unsigned __int128>> t(kBinomialIndexMax + 1);
    for (int n = 0; n <= kBinomialIndexMax; ++n) {
      t[n].resize(static_cast<size_t>(n) + 1);
      t[n][0] = 1;
      t[n][static_cast<size_t>(n)] = 1;
      for (int k = 1; k < n; ++k)
        t[n][static_cast<size_t>(k)] =
            t[n - 1][static_cast<size_t>(k - 1)] + t[n - 1][static_cast<size_t>(k)];
    }
    return t;
  }();
  return table;
}

void check_entries(const std::vector<double>& v) {
  for (size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]))
      throw std::invalid_argument("sequence entry " + std::to_string(i) +
                                  " is not finite");
    if (v[i] < 0.0)
      throw std::invalid_argument("sequence entry " + std::to_string(i) +
                                  " is negative");
  }
}

std::optional<std::pair<int, int>> find_support(const std::vector<double>& v) {
  int lo = -1, hi = -1;
  for (int i = 0; i < static_cast<int>(v.size()); ++i) {
    if (v[static_cast<size_t>(i)] > 0.0) {
      if (lo < 0) lo = i;
      hi = i;
    }
  }
  if (lo < 0) return std::nullopt;
  return std::make_pair(lo, hi);
}

}  // namespace

unsigned __int128 binomial_exact(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (n > kBinomialIndexMax)
    throw std::domain_error("binomial index " + std::to_string(n) +
                            " exceeds the exact range (" +
                            std::to_string(kBinomialIndexMax) + ")");
  return pascal_table()[static_cast<size_t>(n)][static_cast<size_t>(k)];
}

double binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  return static_cast<double>(binomial_exact(n, k));
}

Quadruple::Quadruple(int k_, int l_, int m_, int n_) : k(k_), l(l_), m(m_), n(n_) {
  if (k < 0 || !(k <= l && l <= m && m <= n))
    throw std::invalid_argument("quadruple indices must satisfy 0 <= k <= l <= m <= n");
  if (k + n != l + m)
    throw std::invalid_argument("quadruple is not balanced (k + n != l + m)");
}

std::string to_string(const Quadruple& q) {
  return "(" + std::to_string(q.k) + "," + std::to_string(q.l) + "," +
         std::to_string(q.m) + "," + std::to_string(q.n) + ")";
}

std::vector<Quadruple> enumerate_quadruples(int n_max) {
  std::vector<Quadruple> out;
  for (int span = 0; span <= n_max; ++span)
    for (int d = 0; 2 * d <= span; ++d)
      for (int k = 0; k + span <= n_max; ++k)
        out.emplace_back(k, k + d, k + span - d, k + span);
  return out;
}

LogConcaveSeq::LogConcaveSeq(std::vector<double> values)
    : values_(std::move(values)) {
  check_entries(values_);
  support_ = find_support(values_);
}

LogConcaveSeq LogConcaveSeq::certified(std::vector<double> values, double rel_tol) {
  LogConcaveSeq seq(std::move(values));
  auto report = seq.certify(rel_tol);
  if (!report.pass)
    throw std::invalid_argument("sequence is not log-concave: " + report.reason);
  return seq;
}

SeqCertReport LogConcaveSeq::certify(double rel_tol) {
  auto report = is_log_concave(*this, rel_tol);
  certified_ = report.pass;
  return report;
}

SeqCertReport is_log_concave(const LogConcaveSeq& seq, double rel_tol) {
  SeqCertReport report;
  report.margin = std::numeric_limits<double>::infinity();
  const auto& v = seq.values();
  const auto sup = seq.support();
  if (!sup) {  // identically zero
    report.pass = true;
    return report;
  }
  for (int i = sup->first; i <= sup->second; ++i) {
    if (v[static_cast<size_t>(i)] == 0.0) {
      report.pass = false;
      report.violation_index = i;
      report.margin = -std::numeric_limits<double>::infinity();
      report.reason = "support gap at index " + std::to_string(i);
      return report;
    }
  }
  for (int i = 1; i + 1 < seq.size(); ++i) {
    const double self = v[static_cast<size_t>(i)] * v[static_cast<size_t>(i)];
    const double cross =
        v[static_cast<size_t>(i - 1)] * v[static_cast<size_t>(i + 1)];
    if (cross <= kZeroProductFloor) continue;
    const double scale = std::sqrt(std::max(self, kZeroProductFloor) * cross);
    const double margin = (self - cross) / scale;
    if (margin < report.margin) report.margin = margin;
    if (self < (1.0 - rel_tol) * cross) {
      report.pass = false;
      report.violation_index = i;
      report.reason = "log-concavity violated at index " + std::to_string(i);
      return report;
    }
  }
  report.pass = true;
  return report;
}

double measurement_defect(const LogConcaveSeq& seq, const Quadruple& q) {
  return seq.at(q.l) * seq.at(q.m) - seq.at(q.k) * seq.at(q.n);
}

LogConcaveSeq walkup_convolve(const LogConcaveSeq& a, const LogConcaveSeq& b) {
  if (!a.is_certified() || !b.is_certified())
    throw std::invalid_argument("walkup_convolve requires certified log-concave inputs");
  if (a.size() == 0 || b.size() == 0) return LogConcaveSeq(std::vector<double>{});
  const int len = a.size() + b.size() - 1;
  if (len - 1 > kBinomialIndexMax)
    throw std::domain_error("walkup_convolve output index " + std::to_string(len - 1) +
                            " exceeds the exact binomial range");
  std::vector<double> c(static_cast<size_t>(len), 0.0);
  for (int n = 0; n < len; ++n) {
    double s = 0.0;
    const int k_lo = std::max(0, n - (b.size() - 1));
    const int k_hi = std::min(n, a.size() - 1);
    for (int k = k_lo; k <= k_hi; ++k)
      s += binomial(n, k) * a.at(k) * b.at(n - k);
    c[static_cast<size_t>(n)] = s;
  }
  LogConcaveSeq out(std::move(c));
  auto report = out.certify();
  if (!report.pass)
    throw std::runtime_error("walkup_convolve output failed certification: " +
                             report.reason);
  return out;
}

LogConcaveSeq binomial_tail_transform(const LogConcaveSeq& a) {
  if (!a.is_certified())
    throw std::invalid_argument("binomial_tail_transform requires a certified input");
  if (a.size() == 0) return LogConcaveSeq(std::vector<double>{});
  if (a.size() - 1 > kBinomialIndexMax)
    throw std::domain_error("binomial_tail_transform input index exceeds the exact binomial range");
  std::vector<double> c(static_cast<size_t>(a.size()), 0.0);
  for (int k = 0; k < a.size(); ++k) {
    double s = 0.0;
    for (int n = k; n < a.size(); ++n) s += binomial(n, k) * a.at(n);
    c[static_cast<size_t>(k)] = s;
  }
  LogConcaveSeq out(std::move(c));
  auto report = out.certify();
  if (!report.pass)
    throw std::runtime_error("binomial_tail_transform output failed certification: " +
                             report.reason);
  return out;
}

CombIneqResult combinatorial_inequality_check(const LogConcaveSeq& a, int k,
                                              int l, double rel_tol) {
  if (k < 0 || l < 0) throw std::invalid_argument("k and l must be non-negative");
  if (l > kBinomialIndexMax)
    throw std::domain_error("l exceeds the exact binomial range");
  CombIneqResult r;
  for (int n = 0; n <= l; ++n) {
    const double w = a.at(n) * a.at(l - n);
    if (w == 0.0) continue;
    r.lhs += binomial(n, k) * binomial(l - n, k) * w;
    r.rhs += binomial(n, k - 1) * binomial(l - n, k + 1) * w;
  }
  r.pass = r.lhs >= r.rhs - rel_tol * (r.lhs + r.rhs);
  return r;
}

}  // namespace lclab
