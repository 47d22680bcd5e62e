#pragma once

#include <complex>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "sofic/group.hpp"
#include "sofic/rational.hpp"

namespace sofic {

enum class NormKind { Hamming, Character, Graph, Custom };

// A nonnegative function on the elements of a finite group. Whether it is a
// bi-invariant norm is a property to check (verify_norm_axioms), not an
// invariant of the type, so that broken inputs can be diagnosed.
class Norm {
 public:
  Norm(GroupPtr group, std::vector<NormValue> values, std::string label, NormKind kind = NormKind::Custom);

  // Extends per-class values to every element.
  static Norm from_classes(const ClassPartition& classes, const std::vector<NormValue>& per_class, std::string label,
                           NormKind kind = NormKind::Custom);

  const GroupPtr& group() const { return group_; }
  const NormValue& operator()(Elem g) const { return values_[g]; }
  std::span<const NormValue> values() const { return values_; }
  const std::string& label() const { return label_; }
  NormKind kind() const { return kind_; }

  // eps * norm, preserving kind.
  Norm scaled(const NormValue& factor, std::string label) const;

 private:
  GroupPtr group_;
  std::vector<NormValue> values_;
  std::string label_;
  NormKind kind_;
};

// Fraction of points moved by f.
Rational hamming_norm(const Perm& f);
// Normalized Hamming distance |{a : (a)f != (a)g}| / n.
Rational hamming_distance(const Perm& f, const Perm& g);
// The Hamming norm on a permutation group.
Norm hamming(const GroupPtr& group);

// A class function given as data, one complex value per class id.
struct CharacterData {
  ClassPartition classes;
  std::vector<std::complex<double>> chi;

  // Throws InvalidCharacter if chi(e) is not real positive or a radicand
  // 2chi(e) - 2Re chi(g) is negative beyond tolerance.
  void validate() const;
};

// sqrt((2chi(e) - (chi(g) + conj chi(g))) / chi(e))
NormValue character_norm(const CharacterData& cd, Elem g);
Norm character_norm(const CharacterData& cd);

// chi(g) = number of fixed points, for permutation groups.
CharacterData fixed_point_character(const ClassPartition& classes);

// Format: "char <group-label> <#classes>" followed by one "re im" line per
// class id.
CharacterData read_character(std::istream& in, const ClassPartition& classes);
void write_character(std::ostream& out, const CharacterData& cd);

struct AxiomCheck {
  int property;         // 1..5
  std::string name;
  bool pass = true;
  std::string witness;  // empty when pass
};

struct AxiomReport {
  std::vector<AxiomCheck> checks;
  bool all_pass() const;
};

// Exhaustive check of nonnegativity, ||e|| = 0, inverse symmetry,
// conjugation invariance (all pairs) and the triangle inequality (all pairs).
AxiomReport verify_norm_axioms(const Norm& norm);

// {g : ||g|| = 0} as a subgroup; throws PreconditionFailed if the zero set
// is not closed under products, inverses and conjugation.
Subgroup norm_kernel(const Norm& norm);

// d(a, b) = ||a b^-1||
NormValue induced_metric(const Norm& norm, Elem a, Elem b);

}  // namespace sofic
