#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "freefock/nc_oracle.hpp"
#include "freefock/toy_fock.hpp"

// Random walks on the toy space and their limit laws.  A walk at rate n sums
// one copy of a fixed 2x2 step matrix per site i with i/n < t, scaled by
// 1/sqrt(n); moments are evaluated either directly on the toy space or through
// the free-cumulant oracle, and the limits are cross-checked against the
// semicircle and free Poisson densities by quadrature.

namespace freefock {

enum class WalkKind { brownian, poisson };

struct Atom {
  double location = 0.0;
  double weight = 0.0;
};
using DiscreteMeasure = std::vector<Atom>;

namespace detail {

inline double dpow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace detail

// Number of walk steps before time t: #{i >= 0 : i/n < t}.
inline long long walk_summands(long long n, double t) {
  if (n < 1) throw std::invalid_argument("walk: rate must be >= 1");
  if (!(t > 0.0)) throw std::invalid_argument("walk: time must be positive");
  long long s = static_cast<long long>(std::ceil(static_cast<double>(n) * t));
  while (s > 0 && static_cast<double>(s - 1) / static_cast<double>(n) >= t) --s;
  while (static_cast<double>(s) / static_cast<double>(n) < t) ++s;
  return s;
}

inline SiteMatrix walk_step_matrix(WalkKind kind, int n, int site) {
  if (n < 1) throw std::invalid_argument("walk: rate must be >= 1");
  SiteMatrix m(1, site);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  if (kind == WalkKind::poisson) {
    const double rn = std::sqrt(static_cast<double>(n));
    m(0, 0) = 1.0 / rn;
    m(1, 1) = rn;
  }
  return m;
}

// Vacuum law of one step matrix: +-1 with equal weight for the Bernoulli
// walk; (n+1)/sqrt(n) with weight 1/(n+1), else 0, for the Poisson walk.
inline DiscreteMeasure step_law(WalkKind kind, int n) {
  if (n < 1) throw std::invalid_argument("walk: rate must be >= 1");
  if (kind == WalkKind::brownian) return {{-1.0, 0.5}, {1.0, 0.5}};
  const double rn = std::sqrt(static_cast<double>(n));
  return {{(n + 1) / rn, 1.0 / (n + 1)}, {0.0, n / (n + 1.0)}};
}

inline double law_moment(const DiscreteMeasure& mu, int k) {
  if (k < 0) throw std::invalid_argument("law_moment: negative order");
  double s = 0.0;
  for (const Atom& a : mu) s += a.weight * detail::dpow(a.location, k);
  return s;
}

inline constexpr int kWalkDirectMaxRate = 8;
inline constexpr int kWalkDirectMaxOrder = 8;

inline ToyOperator walk_operator(WalkKind kind, int n, double t) {
  const long long s = walk_summands(n, t);
  ToyOperator sum(walk_step_matrix(kind, n, 0));
  for (long long i = 1; i < s; ++i) sum = sum + ToyOperator(walk_step_matrix(kind, n, static_cast<int>(i)));
  return Complex{1.0 / std::sqrt(static_cast<double>(n)), 0.0} * sum;
}

// tau of the k-th power of the walk, evaluated on the toy space.
inline double walk_moment(WalkKind kind, int n, double t, int k) {
  if (n < 1 || n > kWalkDirectMaxRate || k < 0 || k > kWalkDirectMaxOrder)
    throw std::invalid_argument("walk_moment: direct evaluation budget is n <= 8, k <= 8");
  return vacuum_moment(walk_operator(kind, n, t), k);
}

// Same moments through free cumulants: the walk is 1/sqrt(n) times a sum of
// free copies of the step law.  Returns m_1..m_k_max; works far beyond the
// direct-evaluation budget.
inline std::vector<double> walk_moments_oracle(WalkKind kind, long long n, double t, int k_max) {
  if (k_max < 1 || k_max > kMaxPartitionOrder)
    throw std::invalid_argument("walk_moments_oracle: order must be in 1..12");
  std::vector<double> base(static_cast<std::size_t>(k_max));
  if (kind == WalkKind::brownian) {
    for (int j = 1; j <= k_max; ++j) base[j - 1] = (j % 2 == 0) ? 1.0 : 0.0;
  } else {
    if (n < 1) throw std::invalid_argument("walk: rate must be >= 1");
    const double atom = (static_cast<double>(n) + 1.0) / std::sqrt(static_cast<double>(n));
    const double p = 1.0 / (static_cast<double>(n) + 1.0);
    for (int j = 1; j <= k_max; ++j) base[j - 1] = p * detail::dpow(atom, j);
  }
  const long long s = walk_summands(n, t);
  return free_sum_moments(base, s, 1.0 / std::sqrt(static_cast<double>(n)), k_max);
}

inline double semicircle_moment(double t, int k) {
  if (k < 0) throw std::invalid_argument("semicircle_moment: negative order");
  if (k % 2 == 1) return 0.0;
  return detail::dpow(t, k / 2) * static_cast<double>(catalan(k / 2));
}

// Sum of lambda^(number of blocks) over non-crossing partitions.
inline double free_poisson_moment(double lambda, int k) {
  if (!(lambda > 0.0)) throw std::invalid_argument("free_poisson_moment: lambda must be positive");
  if (k < 0) throw std::invalid_argument("free_poisson_moment: negative order");
  if (k == 0) return 1.0;
  double s = 0.0;
  for (const SetPartition& p : noncrossing_partitions(k)) s += detail::dpow(lambda, static_cast<int>(p.size()));
  return s;
}

namespace detail {

inline double midpoint_refine(const std::function<double(double)>& f, double a, double b, double whole,
                              double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double left = (m - a) * f(0.5 * (a + m));
  const double right = (b - m) * f(0.5 * (m + b));
  const double sum = left + right;
  // The first few levels always split: a coarse midpoint sample can agree
  // with its refinement by accident (e.g. around a kink or a support edge).
  if (depth >= 48 || (depth >= 5 && std::abs(sum - whole) <= 3.0 * tol)) return sum + (sum - whole) / 3.0;
  return midpoint_refine(f, a, m, left, 0.5 * tol, depth + 1) +
         midpoint_refine(f, m, b, right, 0.5 * tol, depth + 1);
}

}  // namespace detail

// Adaptive midpoint rule; never evaluates the endpoints, so inverse
// square-root edge behavior is integrable without special casing.
inline double adaptive_midpoint(const std::function<double(double)>& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  return detail::midpoint_refine(f, a, b, (b - a) * f(0.5 * (a + b)), tol, 0);
}

inline double semicircle_density(double x) {
  const double r = 4.0 - x * x;
  return r > 0.0 ? std::sqrt(r) / (2.0 * std::numbers::pi) : 0.0;
}

inline double free_poisson_density(double lambda, double x) {
  if (!(lambda > 0.0)) throw std::invalid_argument("free_poisson_density: lambda must be positive");
  if (x <= 0.0) return 0.0;
  const double d = 4.0 * lambda - detail::dpow(x - 1.0 - lambda, 2);
  return d > 0.0 ? std::sqrt(d) / (2.0 * std::numbers::pi * x) : 0.0;
}

inline double semicircle_moment_quad(int k, double tol = 1e-9) {
  return adaptive_midpoint([k](double x) { return detail::dpow(x, k) * semicircle_density(x); }, -2.0, 2.0,
                           tol);
}

// Integrates x^k against the density between the spectral edges and adds the
// point mass at zero carried when lambda < 1.
inline double free_poisson_moment_quad(double lambda, int k, double tol = 1e-9) {
  const double rl = std::sqrt(lambda);
  const double lo = detail::dpow(1.0 - rl, 2);
  const double hi = detail::dpow(1.0 + rl, 2);
  double s = adaptive_midpoint(
      [lambda, k](double x) { return detail::dpow(x, k) * free_poisson_density(lambda, x); }, lo, hi, tol);
  if (lambda < 1.0 && k == 0) s += 1.0 - lambda;
  return s;
}

// ---- the multiplicity-two pair example ----

// Two 3x3 single-site matrices built from creation and annihilation in two
// colors; they do not commute.
inline SiteMatrix noncommuting_pair_matrix(int index, int site = 0) {
  if (index != 1 && index != 2) throw std::invalid_argument("pair index must be 1 or 2");
  SiteMatrix m(2, site);
  m(0, index) = 1.0;
  m(index, 0) = 1.0;
  return m;
}

// The repaired pair: gauge corrections make the two matrices commute while
// keeping the same creation/annihilation skeleton.
inline SiteMatrix commuting_pair_matrix(int index, int site = 0) {
  if (index != 1 && index != 2) throw std::invalid_argument("pair index must be 1 or 2");
  SiteMatrix m(2, site);
  if (index == 1) {
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    m(2, 2) = -1.0;
  } else {
    m(0, 2) = 1.0;
    m(2, 0) = 1.0;
    m(1, 2) = -1.0;
    m(2, 1) = -1.0;
    m(2, 2) = -1.0;
  }
  return m;
}

inline SiteMatrix commutator(const SiteMatrix& a, const SiteMatrix& b) { return a * b - b * a; }

struct PairAtom {
  double weight = 0.0;
  double first = 0.0;
  double second = 0.0;
};

// Joint vacuum law of the commuting pair: three atoms in the plane.
inline const std::vector<PairAtom>& commuting_pair_law() {
  static const std::vector<PairAtom> mu = {
      {1.0 / 2.0, 1.0, 0.0}, {1.0 / 3.0, -1.0, 1.0}, {1.0 / 6.0, -1.0, -2.0}};
  return mu;
}

inline double pair_law_moment(int m, int n) {
  if (m < 0 || n < 0) throw std::invalid_argument("pair_law_moment: negative order");
  double s = 0.0;
  for (const PairAtom& a : commuting_pair_law())
    s += a.weight * detail::dpow(a.first, m) * detail::dpow(a.second, n);
  return s;
}

// Vacuum entry of C1^m C2^n; the matrices commute, so the order of factors
// does not matter.
inline double commuting_pair_matrix_moment(int m, int n) {
  if (m < 0 || n < 0) throw std::invalid_argument("negative order");
  const SiteMatrix prod = commuting_pair_matrix(1).power(m) * commuting_pair_matrix(2).power(n);
  return prod.vacuum_entry().real();
}

struct PairMomentRow {
  int m = 0;
  int n = 0;
  double matrix_value = 0.0;
  double law_value = 0.0;
};

struct MultiplicityDemo {
  double noncommuting_commutator_norm = 0.0;
  double commuting_commutator_norm = 0.0;
  std::vector<PairMomentRow> joint;  // all m + n <= 6
};

inline MultiplicityDemo multiplicity_demo() {
  MultiplicityDemo d;
  d.noncommuting_commutator_norm =
      commutator(noncommuting_pair_matrix(1), noncommuting_pair_matrix(2)).frobenius_norm();
  d.commuting_commutator_norm =
      commutator(commuting_pair_matrix(1), commuting_pair_matrix(2)).frobenius_norm();
  for (int total = 0; total <= 6; ++total)
    for (int m = total; m >= 0; --m) {
      const int n = total - m;
      d.joint.push_back({m, n, commuting_pair_matrix_moment(m, n), pair_law_moment(m, n)});
    }
  return d;
}

// ---- two-dimensional walks built from the pair matrices ----

enum class PairFamily { noncommuting, commuting };

// One walk step at a site: the pair matrix with each entry damped by the cell
// volume to the power (number of vacuum indices)/2, so entry (r, c) carries
// n^(-((r==0)+(c==0))/2).
inline SiteMatrix pair_walk_step(PairFamily family, int index, int n, int site) {
  if (n < 1) throw std::invalid_argument("walk: rate must be >= 1");
  SiteMatrix base = family == PairFamily::noncommuting ? noncommuting_pair_matrix(index, site)
                                                       : commuting_pair_matrix(index, site);
  for (int r = 0; r <= 2; ++r)
    for (int c = 0; c <= 2; ++c) {
      const int vac = (r == 0 ? 1 : 0) + (c == 0 ? 1 : 0);
      base(r, c) *= std::pow(static_cast<double>(n), -0.5 * vac);
    }
  return base;
}

inline ToyOperator pair_walk_operator(PairFamily family, int index, int n, double t) {
  const long long s = walk_summands(n, t);
  ToyOperator sum(pair_walk_step(family, index, n, 0));
  for (long long i = 1; i < s; ++i)
    sum = sum + ToyOperator(pair_walk_step(family, index, n, static_cast<int>(i)));
  return sum;
}

// Vacuum moment of a word in the two walks; pattern entries pick the factor
// (1 or 2), leftmost entry is the leftmost operator factor.
inline double pair_mixed_moment(PairFamily family, const std::vector<int>& pattern, int n, double t) {
  if (n < 1 || n > 6) throw std::invalid_argument("pair_mixed_moment: rate budget is n <= 6");
  if (pattern.size() > 6) throw std::invalid_argument("pair_mixed_moment: order budget is 6");
  for (int p : pattern)
    if (p != 1 && p != 2) throw std::invalid_argument("pair_mixed_moment: pattern entries must be 1 or 2");
  if (pattern.empty()) return 1.0;
  const ToyOperator w1 = pair_walk_operator(family, 1, n, t);
  const ToyOperator w2 = pair_walk_operator(family, 2, n, t);
  ToyVector v = ToyVector::vacuum(2);
  const int k = static_cast<int>(pattern.size());
  for (int j = k - 1; j >= 0; --j) {
    const ToyOperator& op = pattern[static_cast<std::size_t>(j)] == 1 ? w1 : w2;
    v = op.apply(v, kPruneEps, j);  // j factors still to come after this one
  }
  return v.vacuum_amplitude().real();
}

}  // namespace freefock
