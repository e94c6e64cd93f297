#pragma once

// Exact calculus on piecewise polynomials over a totally ordered field K.
// K = double gives the fast path; an exact rational K reproduces the same
// results without rounding. Pieces live on [lo, hi) with an optional
// infinite right endpoint.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace lclab {

namespace detail {

// Small exact binomials for the expansion work below (degrees stay tiny).
inline long long small_binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  long long r = 1;
  if (k > n - k) k = n - k;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

template <class K>
struct ScalarTraits {
  static bool close(const K& a, const K& b) { return a == b; }
};

template <>
struct ScalarTraits<double> {
  static bool close(double a, double b) {
    double scale = 1.0;
    if (a < 0) scale = std::max(scale, -a); else scale = std::max(scale, a);
    if (b < 0) scale = std::max(scale, -b); else scale = std::max(scale, b);
    const double d = a - b;
    return (d < 0 ? -d : d) <= 1e-12 * scale;
  }
};

template <>
struct ScalarTraits<long double> {
  static bool close(long double a, long double b) {
    long double scale = 1.0L;
    if (a < 0) scale = std::max(scale, -a); else scale = std::max(scale, a);
    if (b < 0) scale = std::max(scale, -b); else scale = std::max(scale, b);
    const long double d = a - b;
    return (d < 0 ? -d : d) <= 1e-12L * scale;
  }
};

}  // namespace detail

template <class K>
struct PolyT {
  std::vector<K> c;  // value(x) = sum c[i] x^i

  int degree() const { return static_cast<int>(c.size()) - 1; }

  K eval(const K& x) const {
    K v = K(0);
    for (size_t i = c.size(); i-- > 0;) {
      K t = v * x;
      v = t + c[i];
    }
    return v;
  }

  void trim() {
    while (!c.empty() && c.back() == K(0)) c.pop_back();
  }
};

template <class K>
void poly_add_scaled(PolyT<K>& dst, const PolyT<K>& src, const K& factor) {
  if (dst.c.size() < src.c.size()) dst.c.resize(src.c.size(), K(0));
  for (size_t i = 0; i < src.c.size(); ++i) {
    K t = src.c[i] * factor;
    dst.c[i] = dst.c[i] + t;
  }
}

template <class K>
PolyT<K> poly_mul(const PolyT<K>& a, const PolyT<K>& b) {
  PolyT<K> r;
  if (a.c.empty() || b.c.empty()) return r;
  r.c.assign(a.c.size() + b.c.size() - 1, K(0));
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) {
      K t = a.c[i] * b.c[j];
      r.c[i + j] = r.c[i + j] + t;
    }
  return r;
}

// p(shift + x), expanded in x.
template <class K>
PolyT<K> poly_translate(const PolyT<K>& p, const K& shift) {
  PolyT<K> r;
  r.c.assign(p.c.size(), K(0));
  for (int j = 0; j < static_cast<int>(p.c.size()); ++j) {
    K pw = K(1);
    for (int t = j; t >= 0; --t) {
      // coefficient of x^t in p.c[j] * (shift + x)^j
      K term = p.c[static_cast<size_t>(j)] * K(detail::small_binomial(j, t)) * pw;
      r.c[static_cast<size_t>(t)] = r.c[static_cast<size_t>(t)] + term;
      pw = pw * shift;
    }
  }
  return r;
}

template <class K>
struct PieceT {
  K lo{};
  K hi{};
  bool hi_inf = false;
  PolyT<K> p;
};

namespace detail {

// Bivariate accumulator: b[j][i] is the coefficient of s^i x^j.
template <class K>
using BiPoly = std::vector<std::vector<K>>;

// p(x) * q(s - x), expanded in (s, x).
template <class K>
BiPoly<K> cross_product(const PolyT<K>& p, const PolyT<K>& q) {
  const int dp = std::max(p.degree(), 0);
  const int dq = std::max(q.degree(), 0);
  BiPoly<K> b(static_cast<size_t>(dp + dq + 1),
              std::vector<K>(static_cast<size_t>(dq + 1), K(0)));
  for (int j = 0; j <= p.degree(); ++j) {
    if (p.c[static_cast<size_t>(j)] == K(0)) continue;
    for (int k = 0; k <= q.degree(); ++k) {
      if (q.c[static_cast<size_t>(k)] == K(0)) continue;
      const K pq = p.c[static_cast<size_t>(j)] * q.c[static_cast<size_t>(k)];
      for (int i = 0; i <= k; ++i) {
        K term = pq * K(small_binomial(k, i));
        if ((k - i) % 2 != 0) term = K(0) - term;
        b[static_cast<size_t>(j + k - i)][static_cast<size_t>(i)] =
            b[static_cast<size_t>(j + k - i)][static_cast<size_t>(i)] + term;
      }
    }
  }
  return b;
}

// Antiderivative of the x variable, in place semantics (returns a new table
// with the x-degree raised by one and an empty constant row).
template <class K>
BiPoly<K> antiderivative_x(const BiPoly<K>& b) {
  BiPoly<K> a(b.size() + 1);
  if (b.empty()) return a;
  const size_t si = b[0].size();
  for (auto& row : a) row.assign(si, K(0));
  for (size_t j = 0; j < b.size(); ++j)
    for (size_t i = 0; i < si; ++i)
      a[j + 1][i] = b[j][i] / K(static_cast<long long>(j) + 1);
  return a;
}

// Substitute x = c (constant bound) into the table; result is a poly in s.
template <class K>
PolyT<K> substitute_const(const BiPoly<K>& b, const K& c) {
  PolyT<K> r;
  if (b.empty()) return r;
  r.c.assign(b[0].size(), K(0));
  K pw = K(1);
  for (size_t j = 0; j < b.size(); ++j) {
    for (size_t i = 0; i < b[j].size(); ++i) {
      K term = b[j][i] * pw;
      r.c[i] = r.c[i] + term;
    }
    pw = pw * c;
  }
  r.trim();
  return r;
}

// Substitute x = s - c into the table; result is a poly in s.
template <class K>
PolyT<K> substitute_s_minus(const BiPoly<K>& b, const K& c) {
  PolyT<K> r;
  if (b.empty()) return r;
  const size_t si = b[0].size();
  r.c.assign(b.size() + si - 1, K(0));
  for (size_t j = 0; j < b.size(); ++j) {
    // (s - c)^j = sum_t binom(j, t) s^t (-c)^(j-t)
    K pw = K(1);  // (-c)^(j-t), built from t = j downwards
    for (int t = static_cast<int>(j); t >= 0; --t) {
      const K coef = K(small_binomial(static_cast<int>(j), t)) * pw;
      for (size_t i = 0; i < si; ++i) {
        K term = b[j][i] * coef;
        r.c[static_cast<size_t>(t) + i] = r.c[static_cast<size_t>(t) + i] + term;
      }
      pw = pw * (K(0) - c);
    }
  }
  r.trim();
  return r;
}

}  // namespace detail

// Convolution of two piecewise-polynomial densities. Pieces of each operand
// must be sorted and non-overlapping. Every breakpoint of the result is a sum
// of input breakpoints and the sliding integral is evaluated in closed form,
// so the result is exact over an exact K.
template <class K>
std::vector<PieceT<K>> convolve_pieces(const std::vector<PieceT<K>>& A,
                                       const std::vector<PieceT<K>>& B) {
  std::vector<PieceT<K>> out;
  if (A.empty() || B.empty()) return out;

  bool any_inf = false;
  std::vector<K> bps;
  for (const auto& a : A)
    for (const auto& b : B) {
      bps.push_back(a.lo + b.lo);
      if (!b.hi_inf) bps.push_back(a.lo + b.hi);
      if (!a.hi_inf) bps.push_back(a.hi + b.lo);
      if (!a.hi_inf && !b.hi_inf) bps.push_back(a.hi + b.hi);
      if (a.hi_inf || b.hi_inf) any_inf = true;
    }
  std::sort(bps.begin(), bps.end());
  std::vector<K> grid;
  for (const auto& x : bps)
    if (grid.empty() || !detail::ScalarTraits<K>::close(grid.back(), x))
      grid.push_back(x);
  if (grid.size() < 2 && !any_inf) return out;

  const size_t n_regions = (grid.empty() ? 0 : grid.size() - 1) + (any_inf ? 1 : 0);
  std::vector<PolyT<K>> acc(n_regions);

  for (const auto& a : A)
    for (const auto& b : B) {
      auto anti = detail::antiderivative_x(detail::cross_product(a.p, b.p));
      const K support_lo = a.lo + b.lo;
      for (size_t r = 0; r < n_regions; ++r) {
        const bool tail = r >= grid.size() - 1;
        const K g0 = tail ? grid.back() : grid[r];
        // Representative point of the region, used only for branch selection.
        const K mid = tail ? g0 + K(1) : (g0 + grid[r + 1]) / K(2);
        if (mid < support_lo) continue;
        if (!a.hi_inf && !b.hi_inf && !(mid < a.hi + b.hi)) continue;

        // Integration bounds in x: [max(a.lo, s - b.hi), min(a.hi, s - b.lo)].
        const bool lower_const = b.hi_inf || !(a.lo < mid - b.hi);
        const bool upper_const = !a.hi_inf && (a.hi < mid - b.lo);
        PolyT<K> upper = upper_const ? detail::substitute_const(anti, a.hi)
                                     : detail::substitute_s_minus(anti, b.lo);
        PolyT<K> lower = lower_const ? detail::substitute_const(anti, a.lo)
                                     : detail::substitute_s_minus(anti, b.hi);
        poly_add_scaled(acc[r], upper, K(1));
        poly_add_scaled(acc[r], lower, K(0) - K(1));
      }
    }

  for (size_t r = 0; r < n_regions; ++r) {
    acc[r].trim();
    if (acc[r].c.empty()) continue;
    PieceT<K> piece;
    const bool tail = r >= grid.size() - 1;
    piece.lo = tail ? grid.back() : grid[r];
    piece.hi = tail ? K(0) : grid[r + 1];
    piece.hi_inf = tail;
    piece.p = std::move(acc[r]);
    out.push_back(std::move(piece));
  }
  return out;
}

// coef_a * A + coef_b * B on the common breakpoint refinement.
template <class K>
std::vector<PieceT<K>> combine_pieces(const std::vector<PieceT<K>>& A,
                                      const std::vector<PieceT<K>>& B,
                                      const K& coef_a, const K& coef_b) {
  std::vector<K> bps;
  bool any_inf = false;
  for (const auto* list : {&A, &B})
    for (const auto& p : *list) {
      bps.push_back(p.lo);
      if (p.hi_inf) any_inf = true; else bps.push_back(p.hi);
    }
  std::sort(bps.begin(), bps.end());
  std::vector<K> grid;
  for (const auto& x : bps)
    if (grid.empty() || !detail::ScalarTraits<K>::close(grid.back(), x))
      grid.push_back(x);

  const size_t n_regions = (grid.empty() ? 0 : grid.size() - 1) + (any_inf ? 1 : 0);
  std::vector<PieceT<K>> out;
  for (size_t r = 0; r < n_regions; ++r) {
    const bool tail = r >= (grid.empty() ? 0 : grid.size() - 1);
    const K g0 = tail ? grid.back() : grid[r];
    const K mid = tail ? g0 + K(1) : (g0 + grid[r + 1]) / K(2);
    PolyT<K> sum;
    auto add_from = [&](const std::vector<PieceT<K>>& list, const K& coef) {
      for (const auto& p : list)
        if (!(mid < p.lo) && (p.hi_inf || mid < p.hi))
          poly_add_scaled(sum, p.p, coef);
    };
    add_from(A, coef_a);
    add_from(B, coef_b);
    sum.trim();
    if (sum.c.empty()) continue;
    PieceT<K> piece;
    piece.lo = g0;
    piece.hi = tail ? K(0) : grid[r + 1];
    piece.hi_inf = tail;
    piece.p = std::move(sum);
    out.push_back(std::move(piece));
  }
  return out;
}

template <class K>
K eval_pieces(const std::vector<PieceT<K>>& pieces, const K& x) {
  for (const auto& p : pieces)
    if (!(x < p.lo) && (p.hi_inf || x < p.hi)) return p.p.eval(x);
  return K(0);
}

}  // namespace lclab
