#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sofic/catalog.hpp"
#include "sofic/group.hpp"
#include "sofic/perm.hpp"
#include "sofic/words.hpp"

namespace sofic::testing {

inline Elem elem(const GroupPtr& g, const std::string& cycles) { return g->parse_element(cycles); }

inline GroupPtr bundled(const std::string& label) { return resolve_group(label); }

// Conjugacy classes by conjugating every element with every element.
inline std::vector<std::set<Elem>> brute_force_classes(const FiniteGroup& g) {
  std::vector<std::set<Elem>> out;
  std::vector<bool> done(g.order(), false);
  for (Elem a = 0; a < g.order(); ++a) {
    if (done[a]) continue;
    std::set<Elem> cls;
    for (Elem h = 0; h < g.order(); ++h) {
      Elem c = g.mul(g.mul(g.inv(h), a), h);
      cls.insert(c);
      done[c] = true;
    }
    out.push_back(std::move(cls));
  }
  return out;
}

inline Perm random_perm(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::uint32_t> images(n);
  for (std::uint32_t i = 0; i < n; ++i) images[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(images[i - 1], images[rng() % i]);
  return Perm(images);
}

}  // namespace sofic::testing
