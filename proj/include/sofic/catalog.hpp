#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "sofic/group.hpp"

namespace sofic {

// Group catalog files:
//   perm <n> [label]          followed by one generator per line in cycle notation
//   table <m> <label>         followed by m rows of m indices, 0 = identity
// Blank lines and '#' comments are ignored.
GroupPtr read_group(std::istream& in, const std::string& fallback_label, const GroupLimits& limits = {});
GroupPtr read_group_file(const std::filesystem::path& path, const GroupLimits& limits = {});
void write_group(std::ostream& out, const FiniteGroup& group);

// Root of the bundled data (catalog/, characters/, ...). Honors the
// SOFIC_DATA_DIR environment variable.
std::filesystem::path data_dir();

// Bundled nilpotent groups of order <= 16, sorted by file name.
std::vector<std::filesystem::path> nilpotent_catalog(const std::filesystem::path& root = data_dir());

// Resolves "S<n>", a file path, or the label / file stem of a bundled
// catalog entry.
GroupPtr resolve_group(const std::string& ref, const GroupLimits& limits = {},
                       const std::filesystem::path& root = data_dir());

}  // namespace sofic
