#include "sofic/perm.hpp"

#include <algorithm>
#include <cctype>

#include "sofic/error.hpp"

namespace sofic {

Perm::Perm(std::size_t degree) : images_(degree) {
  if (degree == 0) throw MalformedInput("permutation degree must be positive");
  for (std::uint32_t i = 0; i < degree; ++i) images_[i] = i;
}

Perm::Perm(std::vector<std::uint32_t> images) : images_(std::move(images)) {
  if (images_.empty()) throw MalformedInput("permutation degree must be positive");
  std::vector<bool> seen(images_.size(), false);
  for (auto v : images_) {
    if (v >= images_.size() || seen[v])
      throw MalformedInput("image sequence is not a bijection of [" + std::to_string(images_.size()) + "]");
    seen[v] = true;
  }
}

Perm Perm::from_cycles(std::size_t degree, const std::vector<std::vector<std::uint32_t>>& cycles) {
  Perm result(degree);
  for (const auto& cycle : cycles) {
    std::vector<bool> in_cycle(degree, false);
    for (auto point : cycle) {
      if (point < 1 || point > degree)
        throw MalformedInput("point " + std::to_string(point) + " outside [1.." + std::to_string(degree) + "]");
      if (in_cycle[point - 1]) throw MalformedInput("point " + std::to_string(point) + " repeated in a cycle");
      in_cycle[point - 1] = true;
    }
    if (cycle.size() < 2) continue;
    Perm c(degree);
    for (std::size_t k = 0; k < cycle.size(); ++k) c.images_[cycle[k] - 1] = cycle[(k + 1) % cycle.size()] - 1;
    result = result * c;
  }
  return result;
}

Perm Perm::inverse() const {
  Perm r(degree());
  for (std::uint32_t i = 0; i < degree(); ++i) r.images_[images_[i]] = i;
  return r;
}

bool Perm::is_identity() const {
  for (std::uint32_t i = 0; i < degree(); ++i)
    if (images_[i] != i) return false;
  return true;
}

std::size_t Perm::moved_points() const {
  std::size_t moved = 0;
  for (std::uint32_t i = 0; i < degree(); ++i) moved += images_[i] != i;
  return moved;
}

std::vector<std::size_t> Perm::cycle_type() const {
  std::vector<std::size_t> lengths;
  std::vector<bool> seen(degree(), false);
  for (std::uint32_t i = 0; i < degree(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (auto j = i; !seen[j]; j = images_[j]) {
      seen[j] = true;
      ++len;
    }
    if (len > 1) lengths.push_back(len);
  }
  std::sort(lengths.begin(), lengths.end());
  return lengths;
}

Perm operator*(const Perm& f, const Perm& g) {
  if (f.degree() != g.degree())
    throw MalformedInput("degree mismatch: " + std::to_string(f.degree()) + " vs " + std::to_string(g.degree()));
  Perm r(f.degree());
  for (std::size_t i = 0; i < f.degree(); ++i) r.images_[i] = g.images_[f.images_[i]];
  return r;
}

Perm parse_perm(std::string_view text, std::size_t degree) {
  std::vector<std::vector<std::uint32_t>> cycles;
  std::vector<std::uint32_t> current;
  bool open = false;
  std::size_t i = 0;
  auto fail = [&](const std::string& why) {
    throw MalformedInput("bad permutation '" + std::string(text) + "': " + why);
  };
  std::string_view trimmed = text;
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front()))) trimmed.remove_prefix(1);
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back()))) trimmed.remove_suffix(1);
  if (trimmed == "e" || trimmed == "id") return Perm(degree);
  while (i < trimmed.size()) {
    char c = trimmed[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      ++i;
    } else if (c == '(') {
      if (open) fail("nested '('");
      open = true;
      current.clear();
      ++i;
    } else if (c == ')') {
      if (!open) fail("unbalanced ')'");
      open = false;
      cycles.push_back(current);
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      if (!open) fail("point outside a cycle");
      std::uint64_t v = 0;
      while (i < trimmed.size() && std::isdigit(static_cast<unsigned char>(trimmed[i]))) {
        v = v * 10 + static_cast<std::uint64_t>(trimmed[i] - '0');
        if (v > degree) fail("point exceeds degree " + std::to_string(degree));
        ++i;
      }
      current.push_back(static_cast<std::uint32_t>(v));
    } else {
      fail(std::string("unexpected character '") + c + "'");
    }
  }
  if (open) fail("unterminated cycle");
  return Perm::from_cycles(degree, cycles);
}

std::string to_cycle_string(const Perm& p) {
  std::string out;
  std::vector<bool> seen(p.degree(), false);
  for (std::uint32_t i = 0; i < p.degree(); ++i) {
    if (seen[i] || p[i] == i) continue;
    out += '(';
    bool first = true;
    for (auto j = i; !seen[j]; j = p[j]) {
      seen[j] = true;
      if (!first) out += ',';
      out += std::to_string(j + 1);
      first = false;
    }
    out += ')';
  }
  return out.empty() ? "()" : out;
}

Perm square_embed(const Perm& f, const Perm& g) {
  if (f.degree() != g.degree())
    throw MalformedInput("square_embed: degree mismatch " + std::to_string(f.degree()) + " vs " +
                         std::to_string(g.degree()));
  const auto n = static_cast<std::uint32_t>(f.degree());
  std::vector<std::uint32_t> images(static_cast<std::size_t>(n) * n);
  // 0-based form of code(i, j) = (i-1)*n + j
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) images[i * n + j] = f[i] * n + g[j];
  return Perm(std::move(images));
}

}  // namespace sofic
