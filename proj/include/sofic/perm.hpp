#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sofic {

// A permutation of {1..n}, stored 0-based. Permutations act on the right:
// (i)(fg) = ((i)f)g, so f * g means "apply f, then g".
class Perm {
 public:
  explicit Perm(std::size_t degree = 1);

  // images[i] is the image of point i (0-based). Throws MalformedInput
  // unless images is a bijection of {0..n-1}.
  explicit Perm(std::vector<std::uint32_t> images);

  // Builds from disjoint or overlapping 1-based cycles, composed left to right.
  static Perm from_cycles(std::size_t degree, const std::vector<std::vector<std::uint32_t>>& cycles);

  std::size_t degree() const { return images_.size(); }
  std::uint32_t operator[](std::size_t point) const { return images_[point]; }
  const std::vector<std::uint32_t>& images() const { return images_; }

  Perm inverse() const;
  bool is_identity() const;
  std::size_t moved_points() const;
  std::size_t fixed_points() const { return degree() - moved_points(); }

  // Nontrivial cycle lengths in ascending order; empty for the identity.
  std::vector<std::size_t> cycle_type() const;

  friend Perm operator*(const Perm& f, const Perm& g);
  friend bool operator==(const Perm&, const Perm&) = default;
  friend auto operator<=>(const Perm&, const Perm&) = default;

 private:
  std::vector<std::uint32_t> images_;
};

// Parses cycle notation: "(1 2)(3 4 5)", "(1,2)", "()" or "e" for the identity.
Perm parse_perm(std::string_view text, std::size_t degree);

// "(1,2)(3,4,5)"; the identity prints as "()".
std::string to_cycle_string(const Perm& p);

// Product embedding S_n x S_n -> S_{n^2}: the pair (i, j) is coded as
// (i-1)*n + j (1-based) and mapped to ((i)f, (j)g).
Perm square_embed(const Perm& f, const Perm& g);

}  // namespace sofic
