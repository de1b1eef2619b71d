#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <iterator>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "freefock/toy_fock.hpp"
#include "freefock/words.hpp"

// Grid-discretized full Fock space over L^2([0,horizon); C^N): step tensors
// with a scalar vacuum part plus per-degree step functions on products of a
// uniform cell grid. Unlike adapted words, tensor keys may repeat cells
// (diagonal rectangles are legal here; the partition projector removes them).

namespace freefock {

// Exact small-integer power; cell volumes are often exact binary fractions
// and repeated multiplication keeps them exact.
inline double int_pow(double base, std::size_t n) {
  double r = 1.0;
  while (n--) r *= base;
  return r;
}

class Grid {
 public:
  Grid(int mesh, double horizon, int multiplicity = 1)
      : mesh_(mesh), horizon_(horizon), multiplicity_(multiplicity) {
    if (mesh < 1) throw std::invalid_argument("grid mesh must be >= 1");
    if (!(horizon > 0)) throw std::invalid_argument("grid horizon must be positive");
    if (multiplicity < 1) throw std::invalid_argument("grid multiplicity must be >= 1");
    const double cells = static_cast<double>(mesh) * horizon;
    cell_count_ = static_cast<int>(std::llround(cells));
    if (std::abs(cells - cell_count_) > 1e-9 || cell_count_ < 1)
      throw std::invalid_argument("mesh * horizon must be a positive integer");
  }

  int mesh() const { return mesh_; }
  double horizon() const { return horizon_; }
  int multiplicity() const { return multiplicity_; }
  int cell_count() const { return cell_count_; }
  double cell_volume() const { return 1.0 / mesh_; }
  double cell_left(int cell) const { return static_cast<double>(cell) / mesh_; }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.mesh_ == b.mesh_ && a.cell_count_ == b.cell_count_ && a.multiplicity_ == b.multiplicity_;
  }

 private:
  int mesh_;
  double horizon_;
  int multiplicity_;
  int cell_count_;
};

// Converts a time to its cell boundary index, rejecting off-grid times.
inline int time_to_cell(const Grid& g, double t) {
  const double scaled = t * g.mesh();
  const int cell = static_cast<int>(std::llround(scaled));
  if (std::abs(scaled - cell) > 1e-9) throw std::invalid_argument("time is not a grid point");
  if (cell < 0 || cell > g.cell_count()) throw std::invalid_argument("time outside the grid horizon");
  return cell;
}

// Scalar step function on the grid cells (one color channel).
struct StepFunction {
  std::vector<Complex> values;

  static StepFunction zero(const Grid& g) { return {std::vector<Complex>(g.cell_count())}; }

  static StepFunction indicator(const Grid& g, int cell_begin, int cell_end, Complex scale = Complex{1, 0}) {
    if (cell_begin < 0 || cell_end > g.cell_count() || cell_begin > cell_end)
      throw std::invalid_argument("indicator cell range out of bounds");
    auto f = zero(g);
    for (int c = cell_begin; c < cell_end; ++c) f.values[c] = scale;
    return f;
  }

  Complex integral(const Grid& g) const {
    Complex s = 0;
    for (const auto& v : values) s += v;
    return s * g.cell_volume();
  }

  double norm_sq(const Grid& g) const {
    double s = 0;
    for (const auto& v : values) s += std::norm(v);
    return s * g.cell_volume();
  }
};

class StepTensor {
 public:
  using Key = std::vector<Letter>;  // letter = (cell, color); repeats allowed

  explicit StepTensor(const Grid& grid, int degree_cap = 3) : grid_(grid), degree_cap_(degree_cap) {
    if (degree_cap < 0) throw std::invalid_argument("degree cap must be >= 0");
  }

  static StepTensor vacuum(const Grid& grid, int degree_cap = 3) {
    StepTensor f(grid, degree_cap);
    f.f0_ = Complex{1, 0};
    return f;
  }

  const Grid& grid() const { return grid_; }
  int degree_cap() const { return degree_cap_; }
  void raise_degree_cap(int cap) {
    if (cap > degree_cap_) degree_cap_ = cap;
  }

  Complex vacuum_amplitude() const { return f0_; }
  void set_vacuum(Complex v) { f0_ = v; }

  void add(const Key& key, Complex value) {
    if (static_cast<int>(key.size()) > degree_cap_) throw std::invalid_argument("step tensor degree cap exceeded");
    for (const Letter& l : key) {
      if (l.site < 0 || l.site >= grid_.cell_count()) throw std::invalid_argument("cell index out of range");
      if (l.color < 1 || l.color > grid_.multiplicity()) throw std::invalid_argument("color out of range");
    }
    auto [it, inserted] = coef_.try_emplace(key, value);
    if (!inserted) it->second += value;
  }

  Complex coefficient(const Key& key) const {
    auto it = coef_.find(key);
    return it == coef_.end() ? Complex{0, 0} : it->second;
  }

  const std::map<Key, Complex>& coefficients() const { return coef_; }

  int degree() const {
    int d = 0;
    for (const auto& [k, v] : coef_) d = std::max(d, static_cast<int>(k.size()));
    return d;
  }

  std::size_t support_size() const { return coef_.size(); }

  double norm_sq() const {
    const double vol = grid_.cell_volume();
    double s = std::norm(f0_);
    for (const auto& [k, v] : coef_) s += std::norm(v) * int_pow(vol, k.size());
    return s;
  }

  bool is_zero(double eps = 0.0) const {
    if (std::abs(f0_) > eps) return false;
    for (const auto& [k, v] : coef_)
      if (std::abs(v) > eps) return false;
    return true;
  }

  void prune(double eps = kPruneEps) {
    for (auto it = coef_.begin(); it != coef_.end();)
      it = std::abs(it->second) <= eps ? coef_.erase(it) : std::next(it);
  }

  StepTensor& operator+=(const StepTensor& o) {
    check_same(o);
    raise_degree_cap(o.degree_cap_);
    f0_ += o.f0_;
    for (const auto& [k, v] : o.coef_) add(k, v);
    return *this;
  }

  StepTensor& operator-=(const StepTensor& o) {
    check_same(o);
    raise_degree_cap(o.degree_cap_);
    f0_ -= o.f0_;
    for (const auto& [k, v] : o.coef_) add(k, -v);
    return *this;
  }

  StepTensor& operator*=(Complex s) {
    f0_ *= s;
    for (auto& [k, v] : coef_) v *= s;
    return *this;
  }

  friend StepTensor operator+(StepTensor a, const StepTensor& b) { return a += b; }
  friend StepTensor operator-(StepTensor a, const StepTensor& b) { return a -= b; }
  friend StepTensor operator*(Complex s, StepTensor f) { return f *= s; }

 private:
  void check_same(const StepTensor& o) const {
    if (!(grid_ == o.grid_)) throw std::invalid_argument("step tensors live on different grids");
  }

  Grid grid_;
  int degree_cap_;
  Complex f0_ = Complex{0, 0};
  std::map<Key, Complex> coef_;
};

inline Complex inner(const StepTensor& a, const StepTensor& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("step tensors live on different grids");
  const double vol = a.grid().cell_volume();
  Complex s = std::conj(a.vacuum_amplitude()) * b.vacuum_amplitude();
  const auto& am = a.coefficients();
  const auto& bm = b.coefficients();
  auto ia = am.begin();
  auto ib = bm.begin();
  while (ia != am.end() && ib != bm.end()) {
    if (ia->first < ib->first)
      ++ia;
    else if (ib->first < ia->first)
      ++ib;
    else {
      s += std::conj(ia->second) * ib->second * int_pow(vol, ia->first.size());
      ++ia;
      ++ib;
    }
  }
  return s;
}

inline double norm(const StepTensor& f) { return std::sqrt(f.norm_sq()); }

inline double distance(const StepTensor& a, const StepTensor& b) {
  StepTensor d = a;
  d -= b;
  return norm(d);
}

inline double sup_diff(const StepTensor& a, const StepTensor& b) {
  StepTensor d = a;
  d -= b;
  double m = std::abs(d.vacuum_amplitude());
  for (const auto& [k, v] : d.coefficients()) m = std::max(m, std::abs(v));
  return m;
}

// a^+(h x^j): prepends the one-particle function h (color j) in the first
// variable. Raises the degree cap by one when needed; the rest is an exact
// tensor product of step functions.
inline StepTensor creation(const StepFunction& h, int color, const StepTensor& f) {
  const Grid& g = f.grid();
  if (static_cast<int>(h.values.size()) != g.cell_count()) throw std::invalid_argument("step function size mismatch");
  if (color < 1 || color > g.multiplicity()) throw std::invalid_argument("color out of range");
  StepTensor out(g, std::max(f.degree_cap(), f.degree() + 1));
  for (int c = 0; c < g.cell_count(); ++c) {
    const Complex hc = h.values[c];
    if (hc == Complex{0, 0}) continue;
    const Letter front{c, color};
    if (f.vacuum_amplitude() != Complex{0, 0}) out.add({front}, hc * f.vacuum_amplitude());
    for (const auto& [key, value] : f.coefficients()) {
      StepTensor::Key nk;
      nk.reserve(key.size() + 1);
      nk.push_back(front);
      nk.insert(nk.end(), key.begin(), key.end());
      out.add(nk, hc * value);
    }
  }
  out.prune();
  return out;
}

// a^-(h x^j): integrates the first variable against conj(h) on the matching
// color channel; adjoint of creation. Kills the vacuum.
inline StepTensor annihilation(const StepFunction& h, int color, const StepTensor& f) {
  const Grid& g = f.grid();
  if (static_cast<int>(h.values.size()) != g.cell_count()) throw std::invalid_argument("step function size mismatch");
  if (color < 1 || color > g.multiplicity()) throw std::invalid_argument("color out of range");
  const double vol = g.cell_volume();
  StepTensor out(g, f.degree_cap());
  for (const auto& [key, value] : f.coefficients()) {
    const Letter front = key.front();
    if (front.color != color) continue;
    const Complex hc = h.values[front.site];
    if (hc == Complex{0, 0}) continue;
    const Complex w = std::conj(hc) * vol * value;
    if (key.size() == 1)
      out.set_vacuum(out.vacuum_amplitude() + w);
    else
      out.add(StepTensor::Key(key.begin() + 1, key.end()), w);
  }
  out.prune();
  return out;
}

// Gauge-type operator: on a first letter of color `from`, multiply by b at its
// cell and recolor to `to`. Kills the vacuum. `from == to` is the plain gauge
// operator a^o(b) when N = 1.
inline StepTensor gauge_map(const StepFunction& b, int from, int to, const StepTensor& f) {
  const Grid& g = f.grid();
  if (static_cast<int>(b.values.size()) != g.cell_count()) throw std::invalid_argument("step function size mismatch");
  if (from < 1 || from > g.multiplicity() || to < 1 || to > g.multiplicity())
    throw std::invalid_argument("color out of range");
  StepTensor out(g, f.degree_cap());
  for (const auto& [key, value] : f.coefficients()) {
    if (key.front().color != from) continue;
    const Complex bc = b.values[key.front().site];
    if (bc == Complex{0, 0}) continue;
    StepTensor::Key nk = key;
    nk.front().color = to;
    out.add(nk, bc * value);
  }
  out.prune();
  return out;
}

inline StepTensor gauge(const StepFunction& b, const StepTensor& f) { return gauge_map(b, 1, 1, f); }

// a^x(b): scalar multiplication by the integral of b, vacuum included.
inline StepTensor times(const StepFunction& b, const StepTensor& f) {
  StepTensor out = f;
  out *= b.integral(f.grid());
  return out;
}

// Partition of [0, horizon) into unions of consecutive grid cells; `bounds`
// holds the base-cell indices of the partition points, first 0, last
// cell_count. Partition cell i covers base cells [bounds[i], bounds[i+1]).
class PartitionSpec {
 public:
  PartitionSpec(const Grid& g, std::vector<int> bounds) : bounds_(std::move(bounds)) {
    if (bounds_.size() < 2 || bounds_.front() != 0 || bounds_.back() != g.cell_count())
      throw std::invalid_argument("partition must cover the whole grid");
    for (std::size_t i = 1; i < bounds_.size(); ++i)
      if (bounds_[i] <= bounds_[i - 1]) throw std::invalid_argument("partition points must increase");
  }

  // The partition {k/n} restricted to the horizon; n must refine the mesh.
  static PartitionSpec uniform(const Grid& g, int n) {
    if (n < 1) throw std::invalid_argument("partition parameter must be >= 1");
    if (g.mesh() % n != 0) throw std::invalid_argument("uniform partition must refine the grid mesh");
    const int step = g.mesh() / n;
    if (g.cell_count() % step != 0) throw std::invalid_argument("horizon is not a whole number of partition cells");
    std::vector<int> b;
    for (int c = 0; c <= g.cell_count(); c += step) b.push_back(c);
    return PartitionSpec(g, std::move(b));
  }

  int size() const { return static_cast<int>(bounds_.size()) - 1; }
  const std::vector<int>& bounds() const { return bounds_; }
  int lower(int cell) const { return bounds_[cell]; }
  int upper(int cell) const { return bounds_[cell + 1]; }
  int width(int cell) const { return bounds_[cell + 1] - bounds_[cell]; }
  double volume(const Grid& g, int cell) const { return width(cell) * g.cell_volume(); }

  double diameter(const Grid& g) const {
    int w = 0;
    for (int i = 0; i < size(); ++i) w = std::max(w, width(i));
    return w * g.cell_volume();
  }

  int cell_of(int base_cell) const {
    int lo = 0, hi = size() - 1;
    while (lo < hi) {
      const int mid = (lo + hi + 1) / 2;
      if (bounds_[mid] <= base_cell)
        lo = mid;
      else
        hi = mid - 1;
    }
    return lo;
  }

 private:
  std::vector<int> bounds_;
};

namespace detail {

// Writes `value` on every base-cell tuple of the rectangle given by partition
// cells and colors in `sig`.
inline void fill_rectangle(StepTensor& out, const PartitionSpec& S, const std::vector<Letter>& sig, Complex value) {
  const std::size_t n = sig.size();
  if (n == 0) throw std::logic_error("fill_rectangle: empty signature");
  std::vector<Letter> key(n);
  std::vector<int> cur(n);
  for (std::size_t p = 0; p < n; ++p) {
    cur[p] = S.lower(sig[p].site);
    key[p] = Letter{cur[p], sig[p].color};
  }
  while (true) {
    out.add(key, value);
    std::size_t p = n;
    while (p > 0) {
      --p;
      if (++cur[p] < S.upper(sig[p].site)) {
        key[p].site = cur[p];
        break;
      }
      cur[p] = S.lower(sig[p].site);
      key[p].site = cur[p];
      if (p == 0) return;
    }
  }
}

}  // namespace detail

// Orthogonal projection onto the span of the normalized indicator basis
// vectors indexed by adapted words of partition cells: rectangle averages over
// adapted signatures; mass on rectangles whose signature repeats a partition
// cell in adjacent slots is dropped.
inline StepTensor project(const PartitionSpec& S, const StepTensor& f) {
  const Grid& g = f.grid();
  const double vol = g.cell_volume();
  StepTensor out(g, f.degree_cap());
  out.set_vacuum(f.vacuum_amplitude());

  std::map<std::vector<Letter>, Complex> integrals;
  std::vector<Letter> sig;
  for (const auto& [key, value] : f.coefficients()) {
    sig.clear();
    bool adapted = true;
    for (const Letter& l : key) {
      const int p = S.cell_of(l.site);
      if (!sig.empty() && sig.back().site == p) {
        adapted = false;
        break;
      }
      sig.push_back(Letter{p, l.color});
    }
    if (!adapted) continue;
    integrals[sig] += value * int_pow(vol, key.size());
  }

  for (const auto& [s, integral] : integrals) {
    double rect_volume = 1.0;
    for (const Letter& l : s) rect_volume *= S.volume(g, l.site);
    const Complex mean = integral / rect_volume;
    if (std::abs(mean) <= kPruneEps) continue;
    detail::fill_rectangle(out, S, s, mean);
  }
  return out;
}

// Isometric image of a toy vector: word letter (i, j) becomes the normalized
// color-j indicator of partition cell i.
inline StepTensor embed_toy(const Grid& g, const PartitionSpec& S, const ToyVector& v, int degree_cap = 3) {
  if (v.multiplicity() != g.multiplicity()) throw std::invalid_argument("multiplicity mismatch");
  StepTensor out(g, std::max(degree_cap, v.degree()));
  for (const auto& [word, amp] : v) {
    if (word.empty()) {
      out.set_vacuum(out.vacuum_amplitude() + amp);
      continue;
    }
    double scale = 1.0;
    std::vector<Letter> sig;
    for (const Letter& l : word) {
      if (l.site < 0 || l.site >= S.size()) throw std::invalid_argument("toy word site outside the partition");
      scale /= std::sqrt(S.volume(g, l.site));
      sig.push_back(l);
    }
    detail::fill_rectangle(out, S, sig, amp * scale);
  }
  return out;
}

// Exact ingestion of a one-particle analytic profile: the tensor holding the
// cell averages of the function, together with its true squared norm (used
// for exact projection-error accounting).
struct AnalyticProfile {
  std::function<double(double, double)> cell_integral;  // integral of f over [a, b)
  double norm_sq = 0.0;                                 // integral of |f|^2 over the support
};

inline StepTensor ingest(const AnalyticProfile& profile, const Grid& g, int degree_cap = 3, int color = 1) {
  StepTensor out(g, degree_cap);
  for (int c = 0; c < g.cell_count(); ++c) {
    const double a = g.cell_left(c);
    const double b = g.cell_left(c + 1);
    const double avg = profile.cell_integral(a, b) * g.mesh();
    if (avg != 0.0) out.add({Letter{c, color}}, Complex{avg, 0});
  }
  return out;
}

}  // namespace freefock
