#pragma once

// Free toy Fock space over countably many sites: vectors are finite complex
// combinations of adapted basis words, single-site operators are (N+1)x(N+1)
// matrices acting on span{vacuum, X^1..X^N} of one site, and embed_apply
// extends a site matrix to the whole space:
//   - on a word starting at the matrix's site, act on the first letter and
//     contract any vacuum component;
//   - on the vacuum or a word starting elsewhere, act on the site's vacuum
//     direction and prepend any excited component.

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "freefock/words.hpp"

namespace freefock {

using Complex = std::complex<double>;

// Amplitudes below this threshold are dropped after operator applications.
inline constexpr double kPruneEps = 1e-15;

enum class NoiseKind { creation, annihilation, gauge, time };

// Finite-support vector in the free toy Fock space with a fixed multiplicity.
class ToyVector {
 public:
  using Map = std::map<AdaptedWord, Complex>;

  explicit ToyVector(int multiplicity = 1) : multiplicity_(multiplicity) {
    if (multiplicity < 1) throw std::invalid_argument("ToyVector: multiplicity must be >= 1");
  }

  static ToyVector vacuum(int multiplicity = 1) {
    ToyVector v(multiplicity);
    v.amp_[AdaptedWord{}] = Complex{1.0, 0.0};
    return v;
  }

  static ToyVector basis(const AdaptedWord& w, int multiplicity = 1) {
    ToyVector v(multiplicity);
    v.add(w, Complex{1.0, 0.0});
    return v;
  }

  int multiplicity() const { return multiplicity_; }
  std::size_t support_size() const { return amp_.size(); }
  bool is_zero() const { return amp_.empty(); }

  int degree() const {
    if (amp_.empty()) return 0;
    return static_cast<int>(amp_.rbegin()->first.size());  // longest word sorts last
  }

  void add(const AdaptedWord& w, Complex c) {
    check_colors(w);
    auto [it, inserted] = amp_.try_emplace(w, c);
    if (!inserted) it->second += c;
  }

  Complex amplitude(const AdaptedWord& w) const {
    auto it = amp_.find(w);
    return it == amp_.end() ? Complex{} : it->second;
  }

  Complex vacuum_amplitude() const { return amplitude(AdaptedWord{}); }

  double norm_sq() const {
    double s = 0;
    for (const auto& [w, c] : amp_) s += std::norm(c);
    return s;
  }
  double norm() const { return std::sqrt(norm_sq()); }

  ToyVector& operator+=(const ToyVector& o) {
    require_same_multiplicity(o);
    for (const auto& [w, c] : o.amp_) {
      auto [it, inserted] = amp_.try_emplace(w, c);
      if (!inserted) it->second += c;
    }
    return *this;
  }

  ToyVector& operator-=(const ToyVector& o) {
    require_same_multiplicity(o);
    for (const auto& [w, c] : o.amp_) {
      auto [it, inserted] = amp_.try_emplace(w, -c);
      if (!inserted) it->second -= c;
    }
    return *this;
  }

  ToyVector& operator*=(Complex s) {
    for (auto& [w, c] : amp_) c *= s;
    return *this;
  }

  friend ToyVector operator+(ToyVector a, const ToyVector& b) { return a += b; }
  friend ToyVector operator-(ToyVector a, const ToyVector& b) { return a -= b; }
  friend ToyVector operator*(Complex s, ToyVector v) { return v *= s; }

  void prune(double eps = kPruneEps) {
    for (auto it = amp_.begin(); it != amp_.end();) {
      if (std::abs(it->second) < eps)
        it = amp_.erase(it);
      else
        ++it;
    }
  }

  // Drops every word longer than max_degree (no-op when negative).
  void truncate(int max_degree) {
    if (max_degree < 0) return;
    for (auto it = amp_.begin(); it != amp_.end();) {
      if (static_cast<int>(it->first.size()) > max_degree)
        it = amp_.erase(it);
      else
        ++it;
    }
  }

  auto begin() const { return amp_.begin(); }
  auto end() const { return amp_.end(); }

 private:
  void check_colors(const AdaptedWord& w) const {
    for (const Letter& l : w)
      if (l.color < 1 || l.color > multiplicity_)
        throw std::invalid_argument("ToyVector: letter color out of range for multiplicity");
  }
  void require_same_multiplicity(const ToyVector& o) const {
    if (multiplicity_ != o.multiplicity_)
      throw std::invalid_argument("ToyVector: multiplicity mismatch");
  }

  int multiplicity_;
  Map amp_;
};

inline Complex inner(const ToyVector& v, const ToyVector& w) {
  if (v.multiplicity() != w.multiplicity())
    throw std::invalid_argument("inner: multiplicity mismatch");
  Complex s{};
  auto a = v.begin();
  auto b = w.begin();
  while (a != v.end() && b != w.end()) {
    if (a->first < b->first)
      ++a;
    else if (b->first < a->first)
      ++b;
    else {
      s += std::conj(a->second) * b->second;
      ++a;
      ++b;
    }
  }
  return s;
}

inline double sup_diff(const ToyVector& v, const ToyVector& w) {
  ToyVector d = v;
  d -= w;
  double m = 0;
  for (const auto& [word, c] : d) m = std::max(m, std::abs(c));
  return m;
}

// A single-site operator: an (N+1)x(N+1) matrix over the site's local basis
// (vacuum, X^1, ..., X^N).  Entry (r, c) is the coefficient of basis vector r
// in the image of basis vector c.
class SiteMatrix {
 public:
  SiteMatrix(int multiplicity, int site)
      : multiplicity_(multiplicity), site_(site), m_(static_cast<std::size_t>((multiplicity + 1) * (multiplicity + 1))) {
    if (multiplicity < 1) throw std::invalid_argument("SiteMatrix: multiplicity must be >= 1");
    if (site < 0) throw std::invalid_argument("SiteMatrix: site must be >= 0");
  }

  int multiplicity() const { return multiplicity_; }
  int dim() const { return multiplicity_ + 1; }
  int site() const { return site_; }

  Complex& operator()(int row, int col) { return m_[index(row, col)]; }
  const Complex& operator()(int row, int col) const { return m_[index(row, col)]; }

  SiteMatrix at_site(int site) const {
    SiteMatrix r(multiplicity_, site);
    r.m_ = m_;
    return r;
  }

  static SiteMatrix identity(int multiplicity, int site) {
    SiteMatrix r(multiplicity, site);
    for (int i = 0; i < r.dim(); ++i) r(i, i) = 1.0;
    return r;
  }

  // Maps local basis vector `source` to `target` and kills the rest.
  static SiteMatrix matrix_unit(int multiplicity, int site, int source, int target) {
    SiteMatrix r(multiplicity, site);
    if (source < 0 || source > multiplicity || target < 0 || target > multiplicity)
      throw std::invalid_argument("SiteMatrix::matrix_unit: index out of range");
    r(target, source) = 1.0;
    return r;
  }

  // The four multiplicity-1 noise operators as 2x2 matrices.
  static SiteMatrix elementary(NoiseKind kind, int site) {
    switch (kind) {
      case NoiseKind::creation: return matrix_unit(1, site, 0, 1);
      case NoiseKind::annihilation: return matrix_unit(1, site, 1, 0);
      case NoiseKind::gauge: return matrix_unit(1, site, 1, 1);
      case NoiseKind::time: return matrix_unit(1, site, 0, 0);
    }
    throw std::logic_error("SiteMatrix::elementary: bad kind");
  }

  SiteMatrix operator*(const SiteMatrix& o) const {
    require_compatible(o);
    SiteMatrix r(multiplicity_, site_);
    const int d = dim();
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) {
        const Complex a = (*this)(i, k);
        if (a == Complex{}) continue;
        for (int j = 0; j < d; ++j) r(i, j) += a * o(k, j);
      }
    return r;
  }

  SiteMatrix operator+(const SiteMatrix& o) const {
    require_compatible(o);
    SiteMatrix r = *this;
    for (std::size_t i = 0; i < m_.size(); ++i) r.m_[i] += o.m_[i];
    return r;
  }

  SiteMatrix operator-(const SiteMatrix& o) const {
    require_compatible(o);
    SiteMatrix r = *this;
    for (std::size_t i = 0; i < m_.size(); ++i) r.m_[i] -= o.m_[i];
    return r;
  }

  friend SiteMatrix operator*(Complex s, SiteMatrix m) {
    for (auto& e : m.m_) e *= s;
    return m;
  }

  SiteMatrix adjoint() const {
    SiteMatrix r(multiplicity_, site_);
    const int d = dim();
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) r(i, j) = std::conj((*this)(j, i));
    return r;
  }

  // Subtracts the vacuum expectation times the identity.
  SiteMatrix centered() const {
    SiteMatrix r = *this;
    const Complex tau = (*this)(0, 0);
    for (int i = 0; i < dim(); ++i) r(i, i) -= tau;
    return r;
  }

  Complex vacuum_entry() const { return (*this)(0, 0); }

  double frobenius_norm() const {
    double s = 0;
    for (const auto& e : m_) s += std::norm(e);
    return std::sqrt(s);
  }

  bool is_zero(double eps = 0.0) const {
    for (const auto& e : m_)
      if (std::abs(e) > eps) return false;
    return true;
  }

  // Matrix power, useful for same-site vacuum moments: the embedding is a
  // homomorphism per site, so the (0,0) entry of the power is the moment.
  SiteMatrix power(int k) const {
    if (k < 0) throw std::invalid_argument("SiteMatrix::power: negative exponent");
    SiteMatrix r = identity(multiplicity_, site_);
    for (int i = 0; i < k; ++i) r = r * *this;
    return r;
  }

 private:
  std::size_t index(int row, int col) const {
    if (row < 0 || row >= dim() || col < 0 || col >= dim())
      throw std::out_of_range("SiteMatrix: index out of range");
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(dim()) + static_cast<std::size_t>(col);
  }
  void require_compatible(const SiteMatrix& o) const {
    if (multiplicity_ != o.multiplicity_) throw std::invalid_argument("SiteMatrix: multiplicity mismatch");
    if (site_ != o.site_) throw std::invalid_argument("SiteMatrix: site mismatch");
  }

  int multiplicity_;
  int site_;
  std::vector<Complex> m_;
};

// Applies the embedded operator to v.  Words longer than max_degree are
// dropped from the result when max_degree >= 0.
inline ToyVector embed_apply(const SiteMatrix& m, const ToyVector& v, double prune_eps = kPruneEps,
                             int max_degree = -1) {
  if (m.multiplicity() != v.multiplicity())
    throw std::invalid_argument("embed_apply: multiplicity mismatch");
  ToyVector out(v.multiplicity());
  const int site = m.site();
  const int n = m.multiplicity();
  for (const auto& [word, amp] : v) {
    int source = 0;
    const bool starts_here = !word.empty() && word.front().site == site;
    if (starts_here) source = word.front().color;
    const AdaptedWord tail = starts_here ? word.without_front() : word;
    const Complex vac = m(0, source);
    if (vac != Complex{}) out.add(tail, amp * vac);
    for (int j = 1; j <= n; ++j) {
      const Complex c = m(j, source);
      if (c == Complex{}) continue;
      if (max_degree >= 0 && static_cast<int>(tail.size()) + 1 > max_degree) continue;
      out.add(tail.with_front(Letter{site, j}), amp * c);
    }
  }
  out.prune(prune_eps);
  return out;
}

// Direct form of the four multiplicity-1 operators at one site:
//   creation:      vacuum -> X_i;  X_w -> [i w] when w does not start at i, else 0
//   annihilation:  vacuum -> 0;    X_w -> X_(w minus first letter) when w starts at i, else 0
//   gauge:         vacuum -> 0;    X_w -> X_w when w starts at i, else 0
//   time:          vacuum -> vacuum; X_w -> X_w when w does not start at i, else 0
// Coincides with embed_apply of the corresponding 2x2 matrix.
inline ToyVector apply_elementary(NoiseKind kind, int site, const ToyVector& v) {
  if (v.multiplicity() != 1)
    throw std::invalid_argument("apply_elementary: defined for multiplicity 1");
  ToyVector out(1);
  for (const auto& [word, amp] : v) {
    const bool starts_here = !word.empty() && word.front().site == site;
    switch (kind) {
      case NoiseKind::creation:
        if (!starts_here) out.add(word.with_front(Letter{site, 1}), amp);
        break;
      case NoiseKind::annihilation:
        if (starts_here) out.add(word.without_front(), amp);
        break;
      case NoiseKind::gauge:
        if (starts_here) out.add(word, amp);
        break;
      case NoiseKind::time:
        if (!starts_here) out.add(word, amp);
        break;
    }
  }
  out.prune();
  return out;
}

// Formal expression over site matrices, closed under sums, scalar multiples
// and composition.  (a * b) applies b first.
class ToyOperator {
 public:
  ToyOperator(const SiteMatrix& m) : node_(std::make_shared<Node>(Node{Kind::leaf, m, {}, Complex{1, 0}})) {}

  static ToyOperator identity(int multiplicity) {
    return ToyOperator(SiteMatrix::identity(multiplicity, 0));
  }

  friend ToyOperator operator+(const ToyOperator& a, const ToyOperator& b) {
    return compound(Kind::sum, {a, b});
  }
  friend ToyOperator operator*(const ToyOperator& a, const ToyOperator& b) {
    return compound(Kind::product, {a, b});
  }
  friend ToyOperator operator*(Complex s, const ToyOperator& a) {
    return compound(Kind::scaled, {a}, s);
  }

  ToyVector apply(const ToyVector& v, double prune_eps = kPruneEps, int max_degree = -1) const {
    switch (node_->kind) {
      case Kind::leaf:
        return embed_apply(node_->matrix, v, prune_eps, max_degree);
      case Kind::scaled: {
        ToyVector r = node_->children[0].apply(v, prune_eps, max_degree);
        r *= node_->scale;
        return r;
      }
      case Kind::sum: {
        ToyVector r(v.multiplicity());
        for (const auto& c : node_->children) r += c.apply(v, prune_eps, max_degree);
        r.prune(prune_eps);
        return r;
      }
      case Kind::product: {
        ToyVector r = v;
        for (auto it = node_->children.rbegin(); it != node_->children.rend(); ++it)
          r = it->apply(r, prune_eps, max_degree);
        return r;
      }
    }
    throw std::logic_error("ToyOperator::apply: bad node");
  }

  int multiplicity() const {
    int m = 0;
    scan_multiplicity(m);
    if (m == 0) throw std::logic_error("ToyOperator::multiplicity: empty expression");
    return m;
  }

  // True when the expression is a linear combination of single site matrices,
  // i.e. one application changes word length by at most one.
  bool is_first_order() const {
    switch (node_->kind) {
      case Kind::leaf: return true;
      case Kind::scaled: return node_->children[0].is_first_order();
      case Kind::sum: {
        for (const auto& c : node_->children)
          if (!c.is_first_order()) return false;
        return true;
      }
      case Kind::product: return false;
    }
    return false;
  }

 private:
  enum class Kind { leaf, sum, product, scaled };
  struct Node {
    Kind kind;
    SiteMatrix matrix;  // leaf only
    std::vector<ToyOperator> children;
    Complex scale{1.0, 0.0};
  };

  explicit ToyOperator(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static ToyOperator compound(Kind kind, std::vector<ToyOperator> children,
                              Complex scale = Complex{1, 0}) {
    Node n{kind, SiteMatrix(1, 0), std::move(children), scale};
    return ToyOperator(std::make_shared<Node>(std::move(n)));
  }

  void scan_multiplicity(int& m) const {
    if (node_->kind == Kind::leaf) {
      const int mm = node_->matrix.multiplicity();
      if (m == 0) m = mm;
      else if (m != mm) throw std::invalid_argument("ToyOperator: mixed multiplicities");
      return;
    }
    for (const auto& c : node_->children) c.scan_multiplicity(m);
  }

  std::shared_ptr<const Node> node_;
};

inline Complex vacuum_state(const ToyOperator& op) {
  return op.apply(ToyVector::vacuum(op.multiplicity())).vacuum_amplitude();
}

// Vacuum expectation of op^k.  For first-order expressions, words longer than
// the number of remaining applications cannot contribute to the vacuum
// amplitude and are dropped early; this is exact.
inline double vacuum_moment(const ToyOperator& op, int k) {
  if (k < 0) throw std::invalid_argument("vacuum_moment: negative order");
  const bool lookahead = op.is_first_order();
  ToyVector v = ToyVector::vacuum(op.multiplicity());
  for (int j = 1; j <= k; ++j) {
    const int cap = lookahead ? (k - j) : k;
    v = op.apply(v, kPruneEps, cap);
  }
  const Complex tau = v.vacuum_amplitude();
  return tau.real();
}

// Vacuum expectation of the product factor[0] * factor[1] * ... applied like
// an operator product (rightmost factor acts first).  The site attached to
// each factor is caller bookkeeping (which factor algebra it belongs to) and
// does not influence the value.
inline Complex alternating_moment(const std::vector<std::pair<ToyOperator, int>>& factors) {
  if (factors.empty()) return Complex{1.0, 0.0};
  const int mult = factors.front().first.multiplicity();
  ToyVector v = ToyVector::vacuum(mult);
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) v = it->first.apply(v);
  return v.vacuum_amplitude();
}

}  // namespace freefock
