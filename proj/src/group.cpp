#include "sofic/group.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <map>

#include "sofic/error.hpp"

namespace sofic {

namespace {

std::string perm_key(const Perm& p) {
  std::string key;
  key.reserve(p.degree() * 2);
  for (auto v : p.images()) {
    key.push_back(static_cast<char>(v & 0xff));
    key.push_back(static_cast<char>((v >> 8) & 0xff));
  }
  return key;
}

// Rank of an image sequence in lexicographic order (Lehmer code).
Elem lex_rank(const Perm& p) {
  const auto n = p.degree();
  std::uint64_t rank = 0;
  std::vector<bool> used(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t smaller = 0;
    for (std::uint32_t v = 0; v < p[i]; ++v) smaller += !used[v];
    used[p[i]] = true;
    rank = rank * (n - i) + smaller;
  }
  return static_cast<Elem>(rank);
}

std::string triple(Elem a, Elem b, Elem c) {
  return "(" + std::to_string(a) + ", " + std::to_string(b) + ", " + std::to_string(c) + ")";
}

}  // namespace

// Shared construction path for perm_group and image_subgroup.
struct SubgroupBuilder {
  static GroupPtr from_perms(std::vector<Perm> perms, std::vector<Elem> generators, std::string label,
                             bool symmetric) {
    auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
    g->label_ = std::move(label);
    g->order_ = perms.size();
    g->perms_ = std::move(perms);
    g->symmetric_ = symmetric;
    g->generators_ = std::move(generators);
    if (!symmetric) {
      g->perm_index_.reserve(g->order_);
      for (Elem i = 0; i < g->order_; ++i) g->perm_index_.emplace(perm_key(g->perms_[i]), i);
    }
    g->finish(g->order_ <= kMaterializeLimit);
    return g;
  }

  static GroupPtr from_table(std::vector<Elem> flat, std::size_t order, std::vector<Elem> generators,
                             std::string label) {
    auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
    g->label_ = std::move(label);
    g->order_ = order;
    g->table_ = std::move(flat);
    g->generators_ = std::move(generators);
    g->finish(true);
    return g;
  }

  // Sub-group with elements listed in `elements` (target indices, identity first).
  static GroupPtr restrict(const FiniteGroup& target, const std::vector<Elem>& elements,
                           std::vector<Elem> generators, std::string label) {
    if (target.has_perms()) {
      std::vector<Perm> perms;
      perms.reserve(elements.size());
      for (auto e : elements) perms.push_back(target.perm(e));
      return from_perms(std::move(perms), std::move(generators), std::move(label), false);
    }
    std::vector<Elem> local(target.order(), 0);
    for (Elem i = 0; i < elements.size(); ++i) local[elements[i]] = i;
    const auto m = elements.size();
    std::vector<Elem> flat(m * m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) flat[i * m + j] = local[target.mul(elements[i], elements[j])];
    return from_table(std::move(flat), m, std::move(generators), std::move(label));
  }
};

void FiniteGroup::finish(bool materialize) {
  if (materialize && table_.empty() && !perms_.empty()) {
    table_.resize(order_ * order_);
    for (Elem a = 0; a < order_; ++a)
      for (Elem b = 0; b < order_; ++b) table_[static_cast<std::size_t>(a) * order_ + b] = mul_slow(a, b);
  }
  inv_.assign(order_, 0);
  if (!perms_.empty()) {
    for (Elem a = 0; a < order_; ++a) inv_[a] = *find(perms_[a].inverse());
  } else {
    for (Elem a = 0; a < order_; ++a)
      for (Elem b = 0; b < order_; ++b)
        if (mul(a, b) == 0) {
          inv_[a] = b;
          break;
        }
  }
}

Elem FiniteGroup::mul_slow(Elem a, Elem b) const { return *find(perms_[a] * perms_[b]); }

std::optional<Elem> FiniteGroup::find(const Perm& p) const {
  if (perms_.empty() || p.degree() != degree()) return std::nullopt;
  if (symmetric_) return lex_rank(p);
  auto it = perm_index_.find(perm_key(p));
  if (it == perm_index_.end()) return std::nullopt;
  return it->second;
}

Elem FiniteGroup::pow(Elem a, std::int64_t k) const {
  if (k < 0) {
    a = inv(a);
    k = -k;
  }
  Elem result = 0;
  Elem base = a;
  while (k > 0) {
    if (k & 1) result = mul(result, base);
    base = mul(base, base);
    k >>= 1;
  }
  return result;
}

std::size_t FiniteGroup::element_order(Elem a) const {
  std::size_t k = 1;
  for (Elem x = a; x != 0; x = mul(x, a)) ++k;
  return k;
}

bool FiniteGroup::is_abelian() const {
  for (auto a : generators_)
    for (auto b : generators_)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

std::string FiniteGroup::element_name(Elem a) const {
  if (has_perms()) return to_cycle_string(perms_[a]);
  return std::to_string(a);
}

Elem FiniteGroup::parse_element(std::string_view text) const {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec == std::errc() && ptr == text.data() + text.size()) {
    if (value >= order_)
      throw MalformedInput("element index " + std::to_string(value) + " out of range for " + label_);
    return static_cast<Elem>(value);
  }
  if (!has_perms()) throw MalformedInput("'" + std::string(text) + "' is not an element index of " + label_);
  auto found = find(parse_perm(text, degree()));
  if (!found) throw MalformedInput("'" + std::string(text) + "' is not an element of " + label_);
  return *found;
}

std::vector<std::vector<Elem>> FiniteGroup::table() const {
  std::vector<std::vector<Elem>> rows(order_, std::vector<Elem>(order_));
  for (Elem a = 0; a < order_; ++a)
    for (Elem b = 0; b < order_; ++b) rows[a][b] = mul(a, b);
  return rows;
}

GroupPtr perm_group(std::size_t n, const std::vector<Perm>& generators, const GroupLimits& limits,
                    std::string label) {
  for (const auto& g : generators)
    if (g.degree() != n)
      throw MalformedInput("generator " + to_cycle_string(g) + " has degree " + std::to_string(g.degree()) +
                           ", expected " + std::to_string(n));
  std::vector<Perm> elements{Perm(n)};
  std::unordered_map<std::string, Elem> index{{perm_key(elements[0]), 0}};
  for (std::size_t head = 0; head < elements.size(); ++head) {
    for (const auto& g : generators) {
      Perm next = elements[head] * g;
      auto key = perm_key(next);
      if (index.contains(key)) continue;
      if (elements.size() >= limits.closure_cap)
        throw SizeLimit("permutation group closure exceeds the size cap", limits.closure_cap);
      index.emplace(std::move(key), static_cast<Elem>(elements.size()));
      elements.push_back(std::move(next));
    }
  }
  std::vector<Elem> gens;
  for (const auto& g : generators) {
    Elem e = index.at(perm_key(g));
    if (e != 0 && std::find(gens.begin(), gens.end(), e) == gens.end()) gens.push_back(e);
  }
  if (label.empty()) label = "<perm group of order " + std::to_string(elements.size()) + ">";
  return SubgroupBuilder::from_perms(std::move(elements), std::move(gens), std::move(label), false);
}

GroupPtr symmetric_group(std::size_t n) {
  if (n < 1 || n > 8) throw MalformedInput("symmetric_group: degree " + std::to_string(n) + " outside 1..8");
  std::vector<std::uint32_t> images(n);
  for (std::uint32_t i = 0; i < n; ++i) images[i] = i;
  std::vector<Perm> elements;
  do {
    elements.emplace_back(images);
  } while (std::next_permutation(images.begin(), images.end()));
  std::vector<Elem> gens;
  if (n >= 2) {
    gens.push_back(lex_rank(Perm::from_cycles(n, {{1, 2}})));
    if (n >= 3) {
      std::vector<std::uint32_t> cycle(n);
      for (std::uint32_t i = 0; i < n; ++i) cycle[i] = i + 1;
      gens.push_back(lex_rank(Perm::from_cycles(n, {cycle})));
    }
  }
  return SubgroupBuilder::from_perms(std::move(elements), std::move(gens), "S" + std::to_string(n), true);
}

GroupPtr table_group(const std::vector<std::vector<Elem>>& table, std::string label, const GroupLimits& limits) {
  const auto m = table.size();
  if (m == 0) throw InvalidGroup("empty multiplication table");
  if (m > limits.table_order_cap) throw SizeLimit("table order " + std::to_string(m) + " too large", limits.table_order_cap);
  std::vector<Elem> flat(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    if (table[i].size() != m)
      throw InvalidGroup("row " + std::to_string(i) + " has " + std::to_string(table[i].size()) + " entries, expected " +
                         std::to_string(m));
    for (std::size_t j = 0; j < m; ++j) {
      if (table[i][j] >= m)
        throw InvalidGroup("entry " + std::to_string(table[i][j]) + " at (" + std::to_string(i) + ", " +
                           std::to_string(j) + ") out of range");
      flat[i * m + j] = table[i][j];
    }
  }
  auto at = [&](Elem a, Elem b) { return flat[static_cast<std::size_t>(a) * m + b]; };
  for (Elem i = 0; i < m; ++i) {
    if (at(0, i) != i || at(i, 0) != i)
      throw InvalidGroup("index 0 is not a two-sided identity: witness element " + std::to_string(i));
  }
  for (Elem i = 0; i < m; ++i) {
    std::vector<bool> row(m, false), col(m, false);
    for (Elem j = 0; j < m; ++j) {
      if (row[at(i, j)])
        throw InvalidGroup("row " + std::to_string(i) + " repeats " + std::to_string(at(i, j)) +
                           " (not a Latin square), witness " + triple(i, j, at(i, j)));
      if (col[at(j, i)])
        throw InvalidGroup("column " + std::to_string(i) + " repeats " + std::to_string(at(j, i)) +
                           " (not a Latin square), witness " + triple(j, i, at(j, i)));
      row[at(i, j)] = col[at(j, i)] = true;
    }
  }
  for (Elem i = 0; i < m; ++i) {
    bool has_inverse = false;
    for (Elem j = 0; j < m && !has_inverse; ++j) has_inverse = at(i, j) == 0 && at(j, i) == 0;
    if (!has_inverse) throw InvalidGroup("element " + std::to_string(i) + " has no two-sided inverse");
  }

  // Greedy generating set: add the first element outside the current closure.
  std::vector<Elem> gens;
  std::vector<bool> in_closure(m, false);
  in_closure[0] = true;
  std::vector<Elem> closure{0};
  for (Elem candidate = 1; candidate < m; ++candidate) {
    if (in_closure[candidate]) continue;
    gens.push_back(candidate);
    for (std::size_t head = 0; head < closure.size(); ++head)
      for (auto g : gens) {
        Elem next = at(closure[head], g);
        if (!in_closure[next]) {
          in_closure[next] = true;
          closure.push_back(next);
        }
      }
  }

  // (ab)c == a(bc). Light's test only needs c to range over generators.
  auto check = [&](Elem a, Elem b, Elem c) {
    if (at(at(a, b), c) != at(a, at(b, c)))
      throw InvalidGroup("associativity fails for witness triple " + triple(a, b, c));
  };
  if (m <= 256) {
    for (Elem a = 0; a < m; ++a)
      for (Elem b = 0; b < m; ++b)
        for (Elem c = 0; c < m; ++c) check(a, b, c);
  } else {
    for (Elem a = 0; a < m; ++a)
      for (Elem b = 0; b < m; ++b)
        for (auto c : gens) check(a, b, c);
  }
  if (label.empty()) label = "<table group of order " + std::to_string(m) + ">";
  return SubgroupBuilder::from_table(std::move(flat), m, std::move(gens), std::move(label));
}

Subgroup image_subgroup(const GroupPtr& target, std::span<const Elem> elements, const GroupLimits& limits,
                        std::string label) {
  for (auto e : elements)
    if (e >= target->order())
      throw MalformedInput("element index " + std::to_string(e) + " not in " + target->label());
  std::vector<Elem> gens;
  for (auto e : elements)
    if (e != 0 && std::find(gens.begin(), gens.end(), e) == gens.end()) gens.push_back(e);

  std::vector<Elem> members{0};
  std::vector<bool> seen(target->order(), false);
  seen[0] = true;
  for (std::size_t head = 0; head < members.size(); ++head) {
    for (auto g : gens) {
      Elem next = target->mul(members[head], g);
      if (seen[next]) continue;
      if (members.size() >= limits.closure_cap) throw SizeLimit("subgroup closure exceeds the size cap", limits.closure_cap);
      seen[next] = true;
      members.push_back(next);
    }
  }
  std::vector<Elem> local_gens;
  for (auto g : gens) local_gens.push_back(static_cast<Elem>(std::find(members.begin(), members.end(), g) - members.begin()));
  if (label.empty()) label = "<subgroup of order " + std::to_string(members.size()) + " in " + target->label() + ">";
  auto group = SubgroupBuilder::restrict(*target, members, std::move(local_gens), std::move(label));
  return Subgroup{std::move(group), std::move(members)};
}

ClassPartition::ClassPartition(GroupPtr group) : group_(std::move(group)) {
  const auto n = group_->order();
  constexpr ClassId kUnassigned = ~ClassId{0};
  class_of_.assign(n, kUnassigned);
  for (Elem a = 0; a < n; ++a) {
    if (class_of_[a] != kUnassigned) continue;
    const auto id = static_cast<ClassId>(members_.size());
    std::vector<Elem> orbit{a};
    class_of_[a] = id;
    for (std::size_t head = 0; head < orbit.size(); ++head)
      for (auto g : group_->generators()) {
        Elem next = group_->conj(orbit[head], g);
        if (class_of_[next] == kUnassigned) {
          class_of_[next] = id;
          orbit.push_back(next);
        }
      }
    std::sort(orbit.begin(), orbit.end());
    members_.push_back(std::move(orbit));
  }

  labels_.resize(members_.size());
  if (group_->has_perms()) {
    std::map<std::string, std::vector<ClassId>> by_type;
    for (ClassId c = 0; c < members_.size(); ++c) {
      auto type = group_->perm(rep(c)).cycle_type();
      std::string name = "C";
      if (type.empty()) name += "1";
      for (std::size_t i = 0; i < type.size(); ++i) name += (i ? "," : "") + std::to_string(type[i]);
      by_type[name].push_back(c);
    }
    for (auto& [name, ids] : by_type) {
      if (ids.size() == 1) {
        labels_[ids[0]] = name;
      } else {
        for (std::size_t i = 0; i < ids.size(); ++i) labels_[ids[i]] = name + static_cast<char>('a' + i);
      }
    }
  } else {
    for (ClassId c = 0; c < members_.size(); ++c) labels_[c] = "c" + std::to_string(c);
  }
}

std::optional<ClassId> ClassPartition::find(std::string_view label_or_id) const {
  for (ClassId c = 0; c < labels_.size(); ++c)
    if (labels_[c] == label_or_id) return c;
  ClassId id = 0;
  auto [ptr, ec] = std::from_chars(label_or_id.data(), label_or_id.data() + label_or_id.size(), id);
  if (ec == std::errc() && ptr == label_or_id.data() + label_or_id.size() && id < size()) return id;
  return std::nullopt;
}

ClassSet class_product(const ClassPartition& classes, ClassId a, ClassId b) {
  const auto& g = *classes.group();
  const Elem fixed = classes.rep(a);
  ClassSet out;
  for (auto y : classes.members(b)) out.insert(classes.class_of(g.mul(fixed, y)));
  return out;
}

ClassSet iterated_class_product(const ClassPartition& classes, std::span<const ClassId> ids) {
  if (ids.empty()) throw PreconditionFailed("iterated_class_product needs at least one class");
  ClassSet current{ids[0]};
  for (std::size_t i = 1; i < ids.size(); ++i) {
    ClassSet next;
    for (auto c : current) next.merge(class_product(classes, c, ids[i]));
    current = std::move(next);
  }
  return current;
}

}  // namespace sofic
