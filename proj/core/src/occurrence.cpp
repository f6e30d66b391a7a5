#include "tgr/occurrence.hpp"

#include <algorithm>
#include <charconv>

#include "tgr/error.hpp"

namespace tgr {

Occurrence::Occurrence(std::initializer_list<int> positions) : positions_(positions) {
  for (int p : positions_)
    if (p < 1) throw InputError("occurrence positions must be >= 1");
}

Occurrence::Occurrence(std::vector<int> positions) : positions_(std::move(positions)) {
  for (int p : positions_)
    if (p < 1) throw InputError("occurrence positions must be >= 1");
}

Occurrence Occurrence::parse(std::string_view text) {
  if (text.empty() || text == "λ" || text == "lambda") return {};
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t dot = text.find('.', start);
    if (dot == std::string_view::npos) dot = text.size();
    std::string_view piece = text.substr(start, dot - start);
    int value = 0;
    auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), value);
    if (piece.empty() || ec != std::errc{} || ptr != piece.data() + piece.size())
      throw InputError("bad occurrence '" + std::string(text) + "'");
    out.push_back(value);
    start = dot + 1;
  }
  return Occurrence(std::move(out));
}

Occurrence Occurrence::child(int index) const {
  if (index < 1) throw InputError("occurrence positions must be >= 1");
  Occurrence o = *this;
  o.positions_.push_back(index);
  return o;
}

Occurrence Occurrence::concat(const Occurrence& suffix) const {
  Occurrence o = *this;
  o.positions_.insert(o.positions_.end(), suffix.positions_.begin(), suffix.positions_.end());
  return o;
}

Occurrence Occurrence::prefix(std::size_t n) const {
  Occurrence o;
  o.positions_.assign(positions_.begin(),
                      positions_.begin() + static_cast<std::ptrdiff_t>(std::min(n, size())));
  return o;
}

Occurrence Occurrence::suffix_from(std::size_t n) const {
  Occurrence o;
  if (n < size())
    o.positions_.assign(positions_.begin() + static_cast<std::ptrdiff_t>(n), positions_.end());
  return o;
}

std::string Occurrence::to_string() const {
  if (positions_.empty()) return "λ";
  std::string s;
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(positions_[i]);
  }
  return s;
}

std::strong_ordering operator<=>(const Occurrence& a, const Occurrence& b) {
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(a.positions_.begin(), a.positions_.end(),
                                                b.positions_.begin(), b.positions_.end());
}

bool occ_leq(const Occurrence& u, const Occurrence& w) {
  if (u.size() > w.size()) return false;
  auto up = u.positions();
  auto wp = w.positions();
  return std::equal(up.begin(), up.end(), wp.begin());
}

bool occ_lt(const Occurrence& u, const Occurrence& w) {
  return u.size() < w.size() && occ_leq(u, w);
}

bool occ_disjoint(const Occurrence& u, const Occurrence& w) {
  return !occ_leq(u, w) && !occ_leq(w, u);
}

bool LexOrder::operator()(const Occurrence& a, const Occurrence& b) const {
  auto ap = a.positions();
  auto bp = b.positions();
  return std::lexicographical_compare(ap.begin(), ap.end(), bp.begin(), bp.end());
}

std::size_t OccurrenceHash::operator()(const Occurrence& o) const {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (int p : o.positions()) {
    h ^= static_cast<std::size_t>(p);
    h *= 0x100000001b3ULL;
  }
  return h ^ o.size();
}

}  // namespace tgr
