#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tgr {

/// A position in a term: a finite string of positive child indices.
/// The empty occurrence addresses the root and prints as "λ".
///
/// The natural ordering (operator<=>) is length-lexicographic: shorter
/// occurrences first, equal lengths compared lexicographically. This order
/// never places an occurrence after one of its extensions.
class Occurrence {
 public:
  Occurrence() = default;
  Occurrence(std::initializer_list<int> positions);
  explicit Occurrence(std::vector<int> positions);

  /// Parses "λ", "" or a dot-separated list such as "1.2.1".
  static Occurrence parse(std::string_view text);

  std::size_t size() const { return positions_.size(); }
  bool empty() const { return positions_.empty(); }
  int operator[](std::size_t i) const { return positions_[i]; }
  std::span<const int> positions() const { return positions_; }

  Occurrence child(int index) const;
  Occurrence concat(const Occurrence& suffix) const;
  /// The first `n` positions.
  Occurrence prefix(std::size_t n) const;
  /// Drops the first `n` positions.
  Occurrence suffix_from(std::size_t n) const;

  std::string to_string() const;

  friend bool operator==(const Occurrence&, const Occurrence&) = default;
  friend std::strong_ordering operator<=>(const Occurrence& a, const Occurrence& b);

 private:
  std::vector<int> positions_;
};

/// u ≤ w: u is a prefix of w.
bool occ_leq(const Occurrence& u, const Occurrence& w);
/// u < w: u is a proper prefix of w.
bool occ_lt(const Occurrence& u, const Occurrence& w);
/// u | w: neither is a prefix of the other.
bool occ_disjoint(const Occurrence& u, const Occurrence& w);

/// Plain lexicographic order; all extensions of u form a contiguous range
/// starting at u.
struct LexOrder {
  bool operator()(const Occurrence& a, const Occurrence& b) const;
};

struct OccurrenceHash {
  std::size_t operator()(const Occurrence& o) const;
};

}  // namespace tgr
