#pragma once

#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iterator>
#include <string>
#include <vector>

namespace jtmc {

using Vertex = std::uint32_t;
using NodeId = std::uint32_t;

/// Fixed-universe bit set over {0, ..., universe-1}.
///
/// Used both for graph vertex sets (cliques, separators) and for sets of
/// junction-tree node handles. Equality is extensional: two sets compare equal
/// iff they have the same members, regardless of their declared universe.
class VertexSet {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  class const_iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = Vertex;
    using difference_type = std::ptrdiff_t;
    using pointer = const Vertex*;
    using reference = Vertex;

    const_iterator() = default;
    const_iterator(const VertexSet* set, std::size_t word, Word bits)
        : set_(set), word_(word), bits_(bits) {
      advance_to_set_bit();
    }

    Vertex operator*() const {
      return static_cast<Vertex>(word_ * kWordBits +
                                 static_cast<std::size_t>(std::countr_zero(bits_)));
    }
    const_iterator& operator++() {
      bits_ &= bits_ - 1;
      advance_to_set_bit();
      return *this;
    }
    const_iterator operator++(int) {
      auto copy = *this;
      ++*this;
      return copy;
    }
    friend bool operator==(const const_iterator& a, const const_iterator& b) {
      return a.word_ == b.word_ && a.bits_ == b.bits_;
    }

   private:
    void advance_to_set_bit() {
      while (bits_ == 0 && ++word_ < set_->words_.size()) {
        bits_ = set_->words_[word_];
      }
      if (bits_ == 0) word_ = set_->words_.size();
    }

    const VertexSet* set_ = nullptr;
    std::size_t word_ = 0;
    Word bits_ = 0;
  };

  VertexSet() = default;
  explicit VertexSet(std::size_t universe)
      : universe_(universe), words_((universe + kWordBits - 1) / kWordBits, 0) {}
  VertexSet(std::size_t universe, std::initializer_list<Vertex> members)
      : VertexSet(universe) {
    for (Vertex v : members) insert(v);
  }
  template <class Range>
  static VertexSet from_range(std::size_t universe, const Range& members) {
    VertexSet s(universe);
    for (auto v : members) s.insert(static_cast<Vertex>(v));
    return s;
  }
  /// The set {0, ..., universe-1}.
  static VertexSet full(std::size_t universe);

  std::size_t universe() const noexcept { return universe_; }

  bool contains(Vertex v) const noexcept {
    return v < universe_ && ((words_[v / kWordBits] >> (v % kWordBits)) & 1U) != 0;
  }
  void insert(Vertex v) noexcept {
    assert(v < universe_);
    words_[v / kWordBits] |= Word{1} << (v % kWordBits);
  }
  void erase(Vertex v) noexcept {
    assert(v < universe_);
    words_[v / kWordBits] &= ~(Word{1} << (v % kWordBits));
  }
  void clear() noexcept {
    for (auto& w : words_) w = 0;
  }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (Word w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool empty() const noexcept {
    for (Word w : words_) {
      if (w != 0) return false;
    }
    return true;
  }

  VertexSet& operator&=(const VertexSet& other) noexcept {
    assert(universe_ == other.universe_);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
    return *this;
  }
  VertexSet& operator|=(const VertexSet& other) noexcept {
    assert(universe_ == other.universe_);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
  }
  /// Set difference.
  VertexSet& operator-=(const VertexSet& other) noexcept {
    assert(universe_ == other.universe_);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
    return *this;
  }
  friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
  friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
  friend VertexSet operator-(VertexSet a, const VertexSet& b) { return a -= b; }

  bool is_subset_of(const VertexSet& other) const noexcept {
    assert(universe_ == other.universe_);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if ((words_[i] & ~other.words_[i]) != 0) return false;
    }
    return true;
  }
  bool intersects(const VertexSet& other) const noexcept {
    assert(universe_ == other.universe_);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if ((words_[i] & other.words_[i]) != 0) return true;
    }
    return false;
  }
  std::size_t intersection_count(const VertexSet& other) const noexcept {
    assert(universe_ == other.universe_);
    std::size_t c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      c += static_cast<std::size_t>(std::popcount(words_[i] & other.words_[i]));
    }
    return c;
  }

  /// Smallest member; universe() when empty.
  Vertex first() const noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] != 0) {
        return static_cast<Vertex>(i * kWordBits +
                                   static_cast<std::size_t>(std::countr_zero(words_[i])));
      }
    }
    return static_cast<Vertex>(universe_);
  }

  const_iterator begin() const { return {this, 0, words_.empty() ? 0 : words_[0]}; }
  const_iterator end() const { return {this, words_.size(), 0}; }

  std::vector<Vertex> members() const { return {begin(), end()}; }

  /// Human-readable, e.g. "{0,3,7}".
  std::string to_string() const;

  std::size_t hash() const noexcept;

  friend bool operator==(const VertexSet& a, const VertexSet& b) noexcept;

  /// Lexicographic order on the sorted member lists; gives canonical orders.
  friend bool lex_less(const VertexSet& a, const VertexSet& b);

  const std::vector<Word>& words() const noexcept { return words_; }

 private:
  std::size_t universe_ = 0;
  std::vector<Word> words_;
};

bool lex_less(const VertexSet& a, const VertexSet& b);

using NodeSet = VertexSet;

}  // namespace jtmc

template <>
struct std::hash<jtmc::VertexSet> {
  std::size_t operator()(const jtmc::VertexSet& s) const noexcept { return s.hash(); }
};
