#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sofic/almosthom.hpp"
#include "sofic/separability.hpp"

namespace sofic::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kWitness = 2, kRefused = 3 };

// Experiment config, one "key value" pair per line:
//   run-id <text>     rank <n>      g <word> (repeatable)     w <word>
//   group <ref>... | all-nilpotent  mode exhaustive|sampled:<count>
//   seed <u64>        threads <n>
struct ExperimentConfig {
  std::string run_id = "run";
  int rank = 0;
  std::vector<Word> g_words;
  Word w;
  std::vector<std::string> groups;
  SearchMode mode;
  std::size_t threads = 0;
};

ExperimentConfig parse_experiment_config(std::istream& in, const std::string& name);

// Almost-homomorphism file:
//   ahom v1
//   domain <group-ref>             full multiplication table of a finite group
//   target <group-ref>
//   metric hamming | graph:<class>+<class>... | character[:<file>]
//   map <domain element> -> <target element>    one per domain element
// A single line "map identity" maps each element to the target element
// with the same name.
AlmostHom read_ahom(std::istream& in, const std::string& name, const GroupLimits& limits = {});

// "hamming", "graph:C2+C3", "graph" (every class), "character",
// "character:<file>".
Norm make_norm(const GroupPtr& group, const std::string& spec);

// A directory of group files, a single group file, or a text file listing
// one group reference per line. Groups that cannot be built within the
// limits, or whose order exceeds cap_order, become skipped entries.
std::vector<CatalogEntry> load_catalog(const std::string& path, const GroupLimits& limits,
                                       std::optional<std::size_t> cap_order = std::nullopt);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sofic::cli
