#include "jtmc/vertex_set.hpp"

#include <algorithm>

#include "jtmc/random.hpp"

namespace jtmc {

VertexSet VertexSet::full(std::size_t universe) {
  VertexSet s(universe);
  for (std::size_t i = 0; i < s.words_.size(); ++i) s.words_[i] = ~Word{0};
  const std::size_t tail = universe % kWordBits;
  if (tail != 0) s.words_.back() = (Word{1} << tail) - 1;
  return s;
}

std::string VertexSet::to_string() const {
  std::string out = "{";
  bool first_member = true;
  for (Vertex v : *this) {
    if (!first_member) out += ',';
    out += std::to_string(v);
    first_member = false;
  }
  out += '}';
  return out;
}

std::size_t VertexSet::hash() const noexcept {
  // Trailing zero words are skipped so that hashing agrees with the
  // universe-independent equality.
  std::size_t last = words_.size();
  while (last > 0 && words_[last - 1] == 0) --last;
  std::uint64_t h = 0x51ed270b27d8c3a1ULL;
  for (std::size_t i = 0; i < last; ++i) h = mix64(h, words_[i]);
  return static_cast<std::size_t>(h);
}

bool operator==(const VertexSet& a, const VertexSet& b) noexcept {
  const auto& wa = a.words_;
  const auto& wb = b.words_;
  const std::size_t common = std::min(wa.size(), wb.size());
  for (std::size_t i = 0; i < common; ++i) {
    if (wa[i] != wb[i]) return false;
  }
  for (std::size_t i = common; i < wa.size(); ++i) {
    if (wa[i] != 0) return false;
  }
  for (std::size_t i = common; i < wb.size(); ++i) {
    if (wb[i] != 0) return false;
  }
  return true;
}

bool lex_less(const VertexSet& a, const VertexSet& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  const auto ea = a.end();
  const auto eb = b.end();
  for (; ia != ea && ib != eb; ++ia, ++ib) {
    if (*ia != *ib) return *ia < *ib;
  }
  return ia == ea && ib != eb;
}

}  // namespace jtmc
