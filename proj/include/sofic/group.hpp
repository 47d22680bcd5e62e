#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sofic/perm.hpp"

namespace sofic {

// Index of a group element; 0 is always the identity.
using Elem = std::uint32_t;
using ClassId = std::uint32_t;

class FiniteGroup;
using GroupPtr = std::shared_ptr<const FiniteGroup>;

struct GroupLimits {
  std::size_t closure_cap = 10080;     // perm_group / image_subgroup
  std::size_t table_order_cap = 512;   // table_group
};

// Groups up to this order keep a materialized multiplication table;
// larger permutation groups multiply through their permutations.
inline constexpr std::size_t kMaterializeLimit = 2048;

// A finite group with elements indexed 0..order-1, identity at index 0.
// Immutable once built; obtain instances through the factory functions below.
class FiniteGroup {
 public:
  const std::string& label() const { return label_; }
  std::size_t order() const { return order_; }
  static constexpr Elem identity() { return 0; }

  Elem mul(Elem a, Elem b) const {
    if (!table_.empty()) return table_[static_cast<std::size_t>(a) * order_ + b];
    return mul_slow(a, b);
  }
  Elem inv(Elem a) const { return inv_[a]; }
  // h^-1 g h
  Elem conj(Elem g, Elem h) const { return mul(mul(inv_[h], g), h); }
  Elem pow(Elem a, std::int64_t k) const;
  std::size_t element_order(Elem a) const;

  bool has_perms() const { return !perms_.empty(); }
  std::size_t degree() const { return perms_.empty() ? 0 : perms_.front().degree(); }
  const Perm& perm(Elem a) const { return perms_.at(a); }
  std::optional<Elem> find(const Perm& p) const;

  // True for the full symmetric group on degree() points.
  bool is_symmetric() const { return symmetric_; }
  bool has_table() const { return !table_.empty(); }

  // A generating set in element indices (empty for the trivial group).
  std::span<const Elem> generators() const { return generators_; }
  bool is_abelian() const;

  // Cycle notation for permutation groups, the element index otherwise.
  std::string element_name(Elem a) const;
  // Inverse of element_name; also accepts a bare index for any group.
  Elem parse_element(std::string_view text) const;

  // Row-major multiplication table (materialized on demand for large groups).
  std::vector<std::vector<Elem>> table() const;

 private:
  FiniteGroup() = default;
  Elem mul_slow(Elem a, Elem b) const;
  void finish(bool materialize);

  friend GroupPtr perm_group(std::size_t, const std::vector<Perm>&, const GroupLimits&, std::string);
  friend GroupPtr symmetric_group(std::size_t);
  friend GroupPtr table_group(const std::vector<std::vector<Elem>>&, std::string, const GroupLimits&);
  friend struct SubgroupBuilder;

  std::string label_;
  std::size_t order_ = 1;
  std::vector<Elem> table_;
  std::vector<Elem> inv_;
  std::vector<Perm> perms_;
  std::unordered_map<std::string, Elem> perm_index_;
  bool symmetric_ = false;
  std::vector<Elem> generators_;
};

// <generators> inside S_n, enumerated breadth-first from the identity with
// generators applied in input order. Throws SizeLimit past limits.closure_cap.
GroupPtr perm_group(std::size_t n, const std::vector<Perm>& generators, const GroupLimits& limits = {},
                    std::string label = "");

// Full S_n, 1 <= n <= 8, elements in lexicographic order of image sequences.
GroupPtr symmetric_group(std::size_t n);

// Validates a multiplication table over 0..m-1 (Latin square, identity at 0,
// inverses, associativity) and throws InvalidGroup naming a witness.
// Associativity is exhaustive up to order 256 and uses Light's test above.
GroupPtr table_group(const std::vector<std::vector<Elem>>& table, std::string label, const GroupLimits& limits = {});

struct Subgroup {
  GroupPtr group;
  std::vector<Elem> inclusion;  // subgroup element -> target element
};

// The subgroup of target generated by elements, enumerated breadth-first.
Subgroup image_subgroup(const GroupPtr& target, std::span<const Elem> elements, const GroupLimits& limits = {},
                        std::string label = "");

// Conjugacy classes. Class ids are ordered by smallest member index, so the
// identity class is always 0.
class ClassPartition {
 public:
  explicit ClassPartition(GroupPtr group);

  const GroupPtr& group() const { return group_; }
  std::size_t size() const { return members_.size(); }
  ClassId class_of(Elem a) const { return class_of_[a]; }
  Elem rep(ClassId c) const { return members_[c].front(); }
  std::size_t class_size(ClassId c) const { return members_[c].size(); }
  std::span<const Elem> members(ClassId c) const { return members_[c]; }

  // Cycle-type names ("C1", "C2", "C2,3") for permutation groups,
  // "c<id>" otherwise.
  const std::string& label(ClassId c) const { return labels_[c]; }
  // Accepts a label or a numeric class id.
  std::optional<ClassId> find(std::string_view label_or_id) const;

 private:
  GroupPtr group_;
  std::vector<ClassId> class_of_;
  std::vector<std::vector<Elem>> members_;
  std::vector<std::string> labels_;
};

inline ClassPartition conjugacy_classes(const GroupPtr& group) { return ClassPartition(group); }

using ClassSet = std::set<ClassId>;

// { class_of(a*b) : a in A, b in B }, from a fixed representative of A.
ClassSet class_product(const ClassPartition& classes, ClassId a, ClassId b);

// Classes meeting the product [c_1][c_2]...[c_k]; requires k >= 1.
ClassSet iterated_class_product(const ClassPartition& classes, std::span<const ClassId> ids);

}  // namespace sofic
