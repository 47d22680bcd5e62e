#include "sofic/catalog.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sofic/error.hpp"

#ifndef SOFIC_DEFAULT_DATA_DIR
#define SOFIC_DEFAULT_DATA_DIR "data"
#endif

namespace sofic {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool next_content_line(std::istream& in, std::string& line, std::size_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (!line.empty()) return true;
  }
  return false;
}

}  // namespace

GroupPtr read_group(std::istream& in, const std::string& fallback_label, const GroupLimits& limits) {
  std::string line;
  std::size_t lineno = 0;
  auto where = [&] { return fallback_label + ":" + std::to_string(lineno) + ": "; };
  if (!next_content_line(in, line, lineno)) throw MalformedInput(fallback_label + ": empty group file");
  std::istringstream header(line);
  std::string kind;
  std::size_t size = 0;
  header >> kind >> size;
  if (!header || (kind != "perm" && kind != "table"))
    throw MalformedInput(where() + "expected 'perm <n> [label]' or 'table <m> <label>'");
  std::string label;
  std::getline(header, label);
  label = trim(label);
  if (label.empty()) label = fallback_label;

  if (kind == "perm") {
    if (size == 0) throw MalformedInput(where() + "degree must be positive");
    std::vector<Perm> gens;
    while (next_content_line(in, line, lineno)) {
      try {
        gens.push_back(parse_perm(line, size));
      } catch (const MalformedInput& e) {
        throw MalformedInput(where() + e.what());
      }
    }
    return perm_group(size, gens, limits, label);
  }

  if (size == 0) throw MalformedInput(where() + "table order must be positive");
  if (size > limits.table_order_cap) throw SizeLimit(where() + "table order " + std::to_string(size), limits.table_order_cap);
  std::vector<std::vector<Elem>> rows;
  while (rows.size() < size && next_content_line(in, line, lineno)) {
    std::istringstream row(line);
    std::vector<Elem> entries;
    long long v = 0;
    while (row >> v) {
      if (v < 0 || static_cast<std::size_t>(v) >= size)
        throw MalformedInput(where() + "entry " + std::to_string(v) + " out of range");
      entries.push_back(static_cast<Elem>(v));
    }
    if (!row.eof()) throw MalformedInput(where() + "non-numeric table entry");
    if (entries.size() != size)
      throw MalformedInput(where() + "row has " + std::to_string(entries.size()) + " entries, expected " +
                           std::to_string(size));
    rows.push_back(std::move(entries));
  }
  if (rows.size() != size)
    throw MalformedInput(fallback_label + ": expected " + std::to_string(size) + " rows, found " +
                         std::to_string(rows.size()));
  if (next_content_line(in, line, lineno)) throw MalformedInput(where() + "trailing content after table");
  try {
    return table_group(rows, label, limits);
  } catch (const InvalidGroup& e) {
    throw InvalidGroup(fallback_label + ": " + e.what());
  }
}

GroupPtr read_group_file(const std::filesystem::path& path, const GroupLimits& limits) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot open group file " + path.string());
  return read_group(in, path.stem().string(), limits);
}

void write_group(std::ostream& out, const FiniteGroup& group) {
  if (group.has_perms()) {
    out << "perm " << group.degree() << ' ' << group.label() << '\n';
    for (auto g : group.generators()) out << to_cycle_string(group.perm(g)) << '\n';
    return;
  }
  out << "table " << group.order() << ' ' << group.label() << '\n';
  for (Elem a = 0; a < group.order(); ++a) {
    for (Elem b = 0; b < group.order(); ++b) out << (b ? " " : "") << group.mul(a, b);
    out << '\n';
  }
}

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("SOFIC_DATA_DIR"); env && *env) return env;
  return SOFIC_DEFAULT_DATA_DIR;
}

std::vector<std::filesystem::path> nilpotent_catalog(const std::filesystem::path& root) {
  std::vector<std::filesystem::path> files;
  auto dir = root / "catalog" / "nilpotent";
  if (!std::filesystem::is_directory(dir)) throw MalformedInput("bundled catalog not found at " + dir.string());
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".tbl") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}

GroupPtr resolve_group(const std::string& ref, const GroupLimits& limits, const std::filesystem::path& root) {
  if (ref.size() >= 2 && ref[0] == 'S' && std::all_of(ref.begin() + 1, ref.end(), ::isdigit)) {
    if (ref.size() > 3) throw MalformedInput("symmetric group " + ref + " outside S1..S8");
    return symmetric_group(std::stoul(ref.substr(1)));
  }
  if (std::filesystem::is_regular_file(ref)) return read_group_file(ref, limits);
  auto catalog = root / "catalog";
  if (std::filesystem::is_directory(catalog)) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(catalog))
      if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files)
      if (f.stem() == ref) return read_group_file(f, limits);
    for (const auto& f : files) {
      std::ifstream in(f);
      std::string line;
      std::size_t lineno = 0;
      if (!next_content_line(in, line, lineno)) continue;
      std::istringstream header(line);
      std::string kind, label;
      std::size_t size = 0;
      header >> kind >> size;
      std::getline(header, label);
      if (trim(label) == ref) return read_group_file(f, limits);
    }
  }
  throw MalformedInput("unknown group '" + ref + "' (expected S<n>, a catalog file, or a bundled label)");
}

}  // namespace sofic
