#pragma once

// Adapted words: the index set of the orthonormal basis of the free toy
// Fock space.  A word is a finite sequence of letters (site, color) whose
// neighboring letters sit at distinct sites; the empty word stands for the
// vacuum.  Sites are global non-negative integers (partition cell indices
// reuse them), colors run 1..N where N is the one-particle multiplicity.

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace freefock {

struct Letter {
  std::int32_t site = 0;
  std::int32_t color = 1;  // 1..N; 0 is reserved for the vacuum direction
  friend auto operator<=>(const Letter&, const Letter&) = default;
};

inline bool is_adapted(std::span<const Letter> letters) {
  for (std::size_t i = 1; i < letters.size(); ++i)
    if (letters[i - 1].site == letters[i].site) return false;
  return true;
}

// An adapted word with the canonical total order: length first, then
// lexicographic on (site, color).  The vacuum word precedes everything,
// so ordered containers keyed by AdaptedWord iterate deterministically.
class AdaptedWord {
 public:
  AdaptedWord() = default;

  explicit AdaptedWord(std::vector<Letter> letters) : letters_(std::move(letters)) {
    if (!is_adapted(letters_))
      throw std::invalid_argument("AdaptedWord: neighboring letters must have distinct sites");
  }

  static std::optional<AdaptedWord> try_make(std::vector<Letter> letters) {
    if (!is_adapted(letters)) return std::nullopt;
    AdaptedWord w;
    w.letters_ = std::move(letters);
    return w;
  }

  static AdaptedWord single(std::int32_t site, std::int32_t color = 1) {
    AdaptedWord w;
    w.letters_.push_back(Letter{site, color});
    return w;
  }

  // Convenience for multiplicity 1: a word given by its site sequence.
  static AdaptedWord from_sites(std::initializer_list<std::int32_t> sites) {
    std::vector<Letter> ls;
    ls.reserve(sites.size());
    for (auto s : sites) ls.push_back(Letter{s, 1});
    return AdaptedWord(std::move(ls));
  }

  bool empty() const { return letters_.empty(); }
  std::size_t size() const { return letters_.size(); }
  const Letter& front() const { return letters_.front(); }
  const std::vector<Letter>& letters() const { return letters_; }
  auto begin() const { return letters_.begin(); }
  auto end() const { return letters_.end(); }

  AdaptedWord with_front(Letter l) const {
    if (!letters_.empty() && letters_.front().site == l.site)
      throw std::invalid_argument("AdaptedWord::with_front: site clash with first letter");
    AdaptedWord w;
    w.letters_.reserve(letters_.size() + 1);
    w.letters_.push_back(l);
    w.letters_.insert(w.letters_.end(), letters_.begin(), letters_.end());
    return w;
  }

  AdaptedWord without_front() const {
    if (letters_.empty()) throw std::logic_error("AdaptedWord::without_front: empty word");
    AdaptedWord w;
    w.letters_.assign(letters_.begin() + 1, letters_.end());
    return w;
  }

  friend bool operator==(const AdaptedWord& a, const AdaptedWord& b) {
    return a.letters_ == b.letters_;
  }
  friend std::strong_ordering operator<=>(const AdaptedWord& a, const AdaptedWord& b) {
    if (a.letters_.size() != b.letters_.size())
      return a.letters_.size() <=> b.letters_.size();
    return a.letters_ <=> b.letters_;
  }

 private:
  std::vector<Letter> letters_;
};

// Flattened ordering key {length, site1, color1, site2, ...}; lexicographic
// comparison of keys reproduces the canonical order.
inline std::vector<std::int32_t> word_key(const AdaptedWord& w) {
  std::vector<std::int32_t> key;
  key.reserve(1 + 2 * w.size());
  key.push_back(static_cast<std::int32_t>(w.size()));
  for (const Letter& l : w) {
    key.push_back(l.site);
    key.push_back(l.color);
  }
  return key;
}

inline std::string to_string(const AdaptedWord& w) {
  if (w.empty()) return "()";
  std::string s = "(";
  bool first = true;
  for (const Letter& l : w) {
    if (!first) s += ' ';
    s += std::to_string(l.site);
    s += ':';
    s += std::to_string(l.color);
    first = false;
  }
  s += ')';
  return s;
}

// Number of adapted words of length <= max_len over site_count sites with
// multiplicity colors:  1 + sum_{l=1..L} m*N * ((m-1)*N)^(l-1).
inline unsigned long long adapted_word_count(int site_count, int multiplicity, int max_len) {
  if (site_count < 1 || multiplicity < 1 || max_len < 0)
    throw std::invalid_argument("adapted_word_count: need site_count >= 1, multiplicity >= 1, max_len >= 0");
  unsigned long long total = 1;
  unsigned long long level =
      static_cast<unsigned long long>(site_count) * static_cast<unsigned long long>(multiplicity);
  const unsigned long long branch =
      static_cast<unsigned long long>(site_count - 1) * static_cast<unsigned long long>(multiplicity);
  for (int l = 1; l <= max_len; ++l) {
    total += level;
    level *= branch;
  }
  return total;
}

// All adapted words of length <= max_len in canonical order.
inline std::vector<AdaptedWord> enumerate_adapted(int site_count, int multiplicity, int max_len) {
  if (site_count < 1 || multiplicity < 1 || max_len < 0)
    throw std::invalid_argument("enumerate_adapted: need site_count >= 1, multiplicity >= 1, max_len >= 0");
  std::vector<AdaptedWord> out;
  out.push_back(AdaptedWord{});
  std::size_t level_begin = 0, level_end = out.size();
  for (int l = 1; l <= max_len; ++l) {
    for (std::size_t p = level_begin; p < level_end; ++p) {
      // Extending each parent by every admissible letter in ascending order,
      // with parents already in order, keeps the full list canonical.
      const AdaptedWord parent = out[p];
      for (std::int32_t site = 0; site < site_count; ++site) {
        if (!parent.empty() && parent.letters().back().site == site) continue;
        for (std::int32_t color = 1; color <= multiplicity; ++color) {
          std::vector<Letter> ls = parent.letters();
          ls.push_back(Letter{site, color});
          out.push_back(AdaptedWord(std::move(ls)));
        }
      }
    }
    level_begin = level_end;
    level_end = out.size();
    if (level_begin == level_end) break;  // single site: nothing longer than 1
  }
  return out;
}

}  // namespace freefock
