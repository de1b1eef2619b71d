#pragma once

// Combinatorial ground truth for moment computations: non-crossing set
// partitions, the moment/free-cumulant transforms, and moments of sums of
// free identically distributed variables.  Everything here is independent of
// the operator representations and is used to cross-check them.

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace freefock {

// Blocks sorted by least element, elements ascending, over {0, ..., k-1}.
using SetPartition = std::vector<std::vector<int>>;

inline constexpr int kMaxPartitionOrder = 12;

inline unsigned long long catalan(int k) {
  static constexpr unsigned long long table[] = {1ull,    1ull,    2ull,    5ull,    14ull,
                                                 42ull,   132ull,  429ull,  1430ull, 4862ull,
                                                 16796ull, 58786ull, 208012ull};
  if (k < 0 || k > kMaxPartitionOrder) throw std::invalid_argument("catalan: order out of range");
  return table[k];
}

inline bool is_noncrossing(const SetPartition& p) {
  // a < b < c < d with {a, c} and {b, d} in different blocks is a crossing.
  std::vector<int> block_of;
  int n = 0;
  for (const auto& b : p)
    for (int e : b) n = std::max(n, e + 1);
  block_of.assign(n, -1);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (int e : p[i]) block_of[e] = static_cast<int>(i);
  std::vector<int> stack;
  for (int e = 0; e < n; ++e) {
    const int b = block_of[e];
    while (!stack.empty() && stack.back() == b) stack.pop_back();
    bool open = false;
    for (int s : stack)
      if (s == b) open = true;
    if (open) return false;  // block resurfaces across another open block
    // push if this block has a later element
    bool later = false;
    for (int x : p[b])
      if (x > e) later = true;
    if (later) stack.push_back(b);
  }
  return true;
}

namespace detail {

// Partitions of the interval [lo, hi).  The block of lo is grown element by
// element; the gap before each new element is partitioned recursively, as is
// the tail after the block closes.  This yields a deterministic order.
inline std::vector<SetPartition> nc_range(int lo, int hi) {
  std::vector<SetPartition> out;
  if (lo >= hi) {
    out.push_back({});
    return out;
  }
  // Depth-first over (next block element | close): implemented recursively.
  struct Walker {
    int hi;
    std::vector<SetPartition>& out;
    std::vector<int> block;
    SetPartition gaps;  // accumulated blocks from fully partitioned gaps

    void emit_with_tail(int tail_lo) {
      for (const SetPartition& tail : nc_range(tail_lo, hi)) {
        SetPartition p;
        p.push_back(block);
        for (const auto& b : gaps) p.push_back(b);
        for (const auto& b : tail) p.push_back(b);
        sort_blocks(p);
        out.push_back(std::move(p));
      }
    }

    void grow(int from) {
      // Option 1: close the block here; the rest is the tail.
      emit_with_tail(from);
      // Option 2: extend the block with q, partitioning the gap [from, q).
      for (int q = from; q < hi; ++q) {
        for (const SetPartition& gap : nc_range(from, q)) {
          const std::size_t mark = gaps.size();
          for (const auto& b : gap) gaps.push_back(b);
          block.push_back(q);
          grow(q + 1);
          block.pop_back();
          gaps.resize(mark);
        }
      }
    }

    static void sort_blocks(SetPartition& p) {
      std::sort(p.begin(), p.end(),
                [](const std::vector<int>& a, const std::vector<int>& b) { return a.front() < b.front(); });
    }
  };
  Walker w{hi, out, {lo}, {}};
  w.grow(lo + 1);
  return out;
}

}  // namespace detail

// All non-crossing partitions of {0, ..., k-1}; there are catalan(k) of them.
inline std::vector<SetPartition> noncrossing_partitions(int k) {
  if (k < 1 || k > kMaxPartitionOrder)
    throw std::invalid_argument("noncrossing_partitions: order must be in 1..12");
  return detail::nc_range(0, k);
}

// moments[j] is the (j+1)-st moment.  Solves the free moment-cumulant
// relation m_k = sum over non-crossing partitions of products of cumulants,
// triangularly: the only partition involving kappa_k is the one-block one.
inline std::vector<double> moments_to_cumulants(std::span<const double> moments) {
  const int kmax = static_cast<int>(moments.size());
  if (kmax > kMaxPartitionOrder) throw std::invalid_argument("moments_to_cumulants: order must be <= 12");
  std::vector<double> kappa(kmax, 0.0);
  for (int k = 1; k <= kmax; ++k) {
    double rest = 0.0;
    for (const SetPartition& p : noncrossing_partitions(k)) {
      if (p.size() == 1) continue;
      double prod = 1.0;
      for (const auto& b : p) prod *= kappa[b.size() - 1];
      rest += prod;
    }
    kappa[k - 1] = moments[k - 1] - rest;
  }
  return kappa;
}

inline std::vector<double> cumulants_to_moments(std::span<const double> cumulants) {
  const int kmax = static_cast<int>(cumulants.size());
  if (kmax > kMaxPartitionOrder) throw std::invalid_argument("cumulants_to_moments: order must be <= 12");
  std::vector<double> m(kmax, 0.0);
  for (int k = 1; k <= kmax; ++k) {
    double s = 0.0;
    for (const SetPartition& p : noncrossing_partitions(k)) {
      double prod = 1.0;
      for (const auto& b : p) prod *= cumulants[b.size() - 1];
      s += prod;
    }
    m[k - 1] = s;
  }
  return m;
}

// Moments of  scale * (x_1 + ... + x_s)  where the x_i are free and share the
// law given by base_moments: free cumulants add, and scaling by alpha
// multiplies the m-th cumulant by alpha^m.
inline std::vector<double> free_sum_moments(std::span<const double> base_moments, long long summands,
                                            double scale, int k_max) {
  if (summands < 0) throw std::invalid_argument("free_sum_moments: negative summand count");
  if (k_max < 1 || k_max > static_cast<int>(base_moments.size()))
    throw std::invalid_argument("free_sum_moments: k_max out of range");
  std::vector<double> kappa = moments_to_cumulants(base_moments.subspan(0, k_max));
  double alpha_pow = 1.0;
  for (int m = 1; m <= k_max; ++m) {
    alpha_pow *= scale;
    kappa[m - 1] *= static_cast<double>(summands) * alpha_pow;
  }
  return cumulants_to_moments(kappa);
}

}  // namespace freefock
