#pragma once

#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sofic/group.hpp"

namespace sofic {

// Signed generator index: +i is x_i, -i is x_i^-1 (1-based).
using Letter = int;

// A freely reduced word in the free group of the given rank.
class Word {
 public:
  explicit Word(int rank = 1);  // the identity

  int rank() const { return rank_; }
  std::span<const Letter> letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool is_identity() const { return letters_.empty(); }

  friend bool operator==(const Word&, const Word&) = default;

 private:
  friend Word reduce(std::span<const Letter>, int);
  int rank_;
  std::vector<Letter> letters_;
};

// Free reduction; throws MalformedInput if an index is out of [1, rank].
Word reduce(std::span<const Letter> letters, int rank);

Word generator(int rank, int index);
Word mul(const Word& a, const Word& b);
Word inv(const Word& a);
// c^-1 a c
Word conj(const Word& a, const Word& c);

// Order used by ball(): length first, then letters compared with
// x1 < X1 < x2 < X2 < ...
std::strong_ordering shortlex(const Word& a, const Word& b);

// Every reduced word of length <= radius, in shortlex order.
std::vector<Word> ball(int rank, int radius);
// 1 + sum_{l=1..radius} 2n (2n-1)^(l-1)
std::size_t ball_size(int rank, int radius);

// Text syntax: x1 / X1 (uppercase inverts), x y z / X Y Z shorthand for
// generators 1..3, parentheses, and ^k powers (k may be negative).
// "e" or "1" is the identity. Whitespace and '*' are ignored.
Word parse_word(std::string_view text, int rank);
// Inverse of parse_word, without power sugar; "e" for the identity.
std::string to_string(const Word& w);

// Images of the free generators; determines a homomorphism F -> group.
struct GenImages {
  GroupPtr group;
  std::vector<Elem> images;

  int rank() const { return static_cast<int>(images.size()); }
};

// phi(w) for the homomorphism sending x_i to images[i-1]; products are
// taken left to right.
Elem evaluate(const Word& w, const GenImages& gi);

}  // namespace sofic
