#include "sofic/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "sofic/catalog.hpp"
#include "sofic/conjgraph.hpp"
#include "sofic/error.hpp"

namespace sofic::cli {

namespace {

std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, sep)) out.push_back(trim(part));
  return out;
}

SearchMode parse_mode(const std::string& text) {
  SearchMode mode;
  if (text == "exhaustive") return mode;
  if (text.rfind("sampled:", 0) == 0) {
    auto count = text.substr(8);
    if (!count.empty() && count.find_first_not_of("0123456789") == std::string::npos) {
      mode.kind = SearchMode::Kind::Sampled;
      mode.count = std::stoull(count);
      if (mode.count > 0) return mode;
    }
  }
  throw MalformedInput("mode must be 'exhaustive' or 'sampled:<count>' with a positive count, got '" + text + "'");
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos || text.size() > 20)
    throw MalformedInput(what + " must be an unsigned integer, got '" + text + "'");
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw MalformedInput(what + " out of range: '" + text + "'");
  }
}

bool is_group_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    return line.rfind("perm ", 0) == 0 || line.rfind("table ", 0) == 0;
  }
  return false;
}

// An explicit order cap also applies to symmetric groups, which are built
// without a closure enumeration.
GroupPtr capped(GroupPtr g, std::optional<std::size_t> cap) {
  if (cap && g->order() > *cap) throw SizeLimit("group " + g->label() + " of order " + std::to_string(g->order()), *cap);
  return g;
}

CatalogEntry make_entry(const std::string& ref, const GroupLimits& limits, std::optional<std::size_t> cap) {
  try {
    auto g = capped(resolve_group(ref, limits), cap);
    return {g->label(), g, ""};
  } catch (const SizeLimit& e) {
    return {ref, nullptr, e.what()};
  }
}

}  // namespace

ExperimentConfig parse_experiment_config(std::istream& in, const std::string& name) {
  ExperimentConfig cfg;
  std::vector<std::pair<std::size_t, std::string>> g_texts;
  std::optional<std::pair<std::size_t, std::string>> w_text;
  std::optional<std::uint64_t> seed;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](std::size_t at, const std::string& field, const std::string& why) {
    throw MalformedInput(name + ":" + std::to_string(at) + ": field '" + field + "': " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    auto space = line.find_first_of(" \t");
    std::string key = line.substr(0, space);
    std::string value = space == std::string::npos ? "" : trim(line.substr(space));
    if (value.empty()) fail(lineno, key, "missing value");
    try {
      if (key == "run-id") {
        cfg.run_id = value;
      } else if (key == "rank") {
        cfg.rank = static_cast<int>(parse_u64(value, "rank"));
        if (cfg.rank < 1 || cfg.rank > 16) fail(lineno, key, "rank must be between 1 and 16");
      } else if (key == "g") {
        g_texts.emplace_back(lineno, value);
      } else if (key == "w") {
        w_text = {lineno, value};
      } else if (key == "group") {
        std::istringstream refs(value);
        std::string ref;
        while (refs >> ref) {
          if (ref == "all-nilpotent") {
            for (const auto& f : nilpotent_catalog()) cfg.groups.push_back(f.string());
          } else {
            cfg.groups.push_back(ref);
          }
        }
      } else if (key == "mode") {
        cfg.mode = parse_mode(value);
      } else if (key == "seed") {
        seed = parse_u64(value, "seed");
      } else if (key == "threads") {
        cfg.threads = parse_u64(value, "threads");
      } else {
        fail(lineno, key, "unknown field");
      }
    } catch (const MalformedInput& e) {
      if (std::string(e.what()).rfind(name + ":", 0) == 0) throw;
      fail(lineno, key, e.what());
    }
  }
  if (cfg.rank == 0) fail(lineno, "rank", "missing");
  if (g_texts.empty()) fail(lineno, "g", "at least one g word is required");
  if (!w_text) fail(lineno, "w", "missing");
  for (const auto& [at, text] : g_texts) {
    try {
      cfg.g_words.push_back(parse_word(text, cfg.rank));
    } catch (const MalformedInput& e) {
      fail(at, "g", e.what());
    }
  }
  try {
    cfg.w = parse_word(w_text->second, cfg.rank);
  } catch (const MalformedInput& e) {
    fail(w_text->first, "w", e.what());
  }
  cfg.mode.seed = seed;
  return cfg;
}

Norm make_norm(const GroupPtr& group, const std::string& spec) {
  if (spec == "hamming") return hamming(group);
  ClassPartition classes(group);
  if (spec == "graph" || spec.rfind("graph:", 0) == 0) {
    std::vector<ClassId> gen;
    if (spec == "graph") {
      for (ClassId c = 0; c < classes.size(); ++c) gen.push_back(c);
    } else {
      for (const auto& label : split(spec.substr(6), '+')) {
        auto c = classes.find(label);
        if (!c) throw MalformedInput("unknown class '" + label + "' in " + group->label());
        gen.push_back(*c);
      }
    }
    return graph_norm(classes, gen).norm;
  }
  if (spec == "character" || spec.rfind("character:", 0) == 0) {
    std::filesystem::path file = spec == "character"
                                     ? data_dir() / "characters" / (group->label() + "_fixed_points.char")
                                     : std::filesystem::path(spec.substr(10));
    std::ifstream in(file);
    if (!in) throw MalformedInput("cannot open character file " + file.string());
    return character_norm(read_character(in, classes));
  }
  throw MalformedInput("unknown norm '" + spec + "' (expected hamming, graph[:C+...], character[:file])");
}

AlmostHom read_ahom(std::istream& in, const std::string& name, const GroupLimits& limits) {
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& why) { throw MalformedInput(name + ":" + std::to_string(lineno) + ": " + why); };
  bool header = false, identity_map = false;
  GroupPtr domain, target;
  std::string metric = "hamming";
  std::vector<std::pair<std::string, std::string>> pairs;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    auto space = line.find_first_of(" \t");
    std::string key = line.substr(0, space);
    std::string value = space == std::string::npos ? "" : trim(line.substr(space));
    if (!header) {
      if (key != "ahom" || value != "v1") fail("expected 'ahom v1'");
      header = true;
    } else if (key == "domain") {
      domain = resolve_group(value, limits);
    } else if (key == "target") {
      target = resolve_group(value, limits);
    } else if (key == "metric") {
      metric = value;
    } else if (key == "map") {
      if (value == "identity") {
        identity_map = true;
        continue;
      }
      auto arrow = value.find("->");
      if (arrow == std::string::npos) fail("expected 'map <element> -> <element>'");
      pairs.emplace_back(trim(value.substr(0, arrow)), trim(value.substr(arrow + 2)));
    } else {
      fail("unknown field '" + key + "'");
    }
  }
  if (!header) throw MalformedInput(name + ": empty almost-homomorphism file");
  if (!domain || !target) throw MalformedInput(name + ": 'domain' and 'target' are required");
  std::vector<std::optional<Elem>> map(domain->order());
  if (identity_map)
    for (Elem a = 0; a < domain->order(); ++a) map[a] = target->parse_element(domain->element_name(a));
  for (const auto& [from, to] : pairs) map[domain->parse_element(from)] = target->parse_element(to);
  std::vector<Elem> images;
  for (Elem a = 0; a < domain->order(); ++a) {
    if (!map[a]) throw MalformedInput(name + ": no image for domain element " + domain->element_name(a));
    images.push_back(*map[a]);
  }
  return AlmostHom(full_table(*domain), make_norm(target, metric), images);
}

std::vector<CatalogEntry> load_catalog(const std::string& path, const GroupLimits& limits,
                                       std::optional<std::size_t> cap_order) {
  std::filesystem::path p(path);
  std::vector<CatalogEntry> out;
  if (std::filesystem::is_directory(p)) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(p))
      if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) out.push_back(make_entry(f.string(), limits, cap_order));
    return out;
  }
  if (!std::filesystem::is_regular_file(p)) throw MalformedInput("catalog not found: " + path);
  if (is_group_file(p)) return {make_entry(path, limits, cap_order)};
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    if (line == "all-nilpotent") {
      for (const auto& f : nilpotent_catalog()) out.push_back(make_entry(f.string(), limits, cap_order));
    } else {
      out.push_back(make_entry(line, limits, cap_order));
    }
  }
  return out;
}

namespace {

struct Globals {
  std::string catalog;
  std::optional<std::uint64_t> seed;
  std::string mode;
  std::string out;
  std::optional<std::size_t> cap_order;

  GroupLimits limits() const {
    GroupLimits l;
    if (cap_order) l.closure_cap = l.table_order_cap = *cap_order;
    return l;
  }
};

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty()) return;
    file_.open(path);
    if (!file_) throw MalformedInput("cannot write " + path);
    stream_ = &file_;
  }
  std::ostream& operator*() { return *stream_; }
  bool to_file() const { return file_.is_open(); }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

GroupPtr group_ref(const Globals& g, const std::string& ref) {
  if (!g.catalog.empty() && std::filesystem::is_directory(g.catalog)) {
    for (const auto& f : std::filesystem::directory_iterator(g.catalog)) {
      if (!f.is_regular_file() || !is_group_file(f.path())) continue;
      if (f.path().stem() == ref) return capped(read_group_file(f.path(), g.limits()), g.cap_order);
      auto group = read_group_file(f.path(), g.limits());
      if (group->label() == ref) return capped(group, g.cap_order);
    }
  }
  return capped(resolve_group(ref, g.limits()), g.cap_order);
}

std::vector<Elem> parse_elements(const GroupPtr& group, const std::vector<std::string>& texts) {
  std::vector<Elem> out;
  for (const auto& t : texts) out.push_back(group->parse_element(t));
  return out;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

void print_axioms(std::ostream& out, const Norm& norm) {
  auto report = verify_norm_axioms(norm);
  out << "axioms: " << (report.all_pass() ? "all pass" : "FAILED") << '\n';
  for (const auto& c : report.checks) {
    out << "  " << c.property << ' ' << c.name << ": " << (c.pass ? "pass" : "fail");
    if (!c.pass) out << " (" << c.witness << ")";
    out << '\n';
  }
  try {
    auto ker = norm_kernel(norm);
    out << "kernel order: " << ker.group->order() << '\n';
  } catch (const PreconditionFailed& e) {
    out << "kernel: " << e.what() << '\n';
  }
}

int cmd_norm(const Globals& g, const std::string& ref, const std::string& kind, const std::vector<std::string>& classes,
             const std::string& char_file, const std::string& scale, std::ostream& fallback) {
  auto group = group_ref(g, ref);
  std::string spec = kind;
  if (kind == "graph" && !classes.empty()) {
    spec = "graph:";
    for (std::size_t i = 0; i < classes.size(); ++i) spec += (i ? "+" : "") + classes[i];
  } else if (kind == "character" && !char_file.empty()) {
    spec = "character:" + char_file;
  } else if (kind != "hamming" && kind != "graph" && kind != "character") {
    throw MalformedInput("unknown norm kind '" + kind + "' (expected hamming, character or graph)");
  }
  auto norm = make_norm(group, spec);
  if (!scale.empty()) norm = norm.scaled(NormValue(parse_rational(scale)), norm.label() + " scaled");
  Output out(g.out, fallback);
  ClassPartition parts(group);
  *out << "group " << group->label() << " (order " << group->order() << "), norm " << spec
       << (scale.empty() ? "" : " x " + scale) << '\n';
  std::size_t rep_width = 4;
  for (ClassId c = 0; c < parts.size(); ++c)
    rep_width = std::max(rep_width, group->element_name(parts.rep(c)).size() + 1);
  *out << pad("class", 8) << pad("size", 7) << pad("rep", rep_width) << "norm\n";
  for (ClassId c = 0; c < parts.size(); ++c)
    *out << pad(parts.label(c), 8) << pad(std::to_string(parts.class_size(c)), 7)
         << pad(group->element_name(parts.rep(c)), rep_width) << norm(parts.rep(c)).str() << '\n';
  print_axioms(*out, norm);
  return kSuccess;
}

int cmd_conjgraph(const Globals& g, const std::string& ref, const std::vector<std::string>& labels, bool dot,
                  std::ostream& fallback) {
  auto group = group_ref(g, ref);
  ClassPartition parts(group);
  std::vector<ClassId> gen;
  for (const auto& l : labels) {
    auto c = parts.find(l);
    if (!c) throw MalformedInput("unknown class '" + l + "' in " + group->label());
    gen.push_back(*c);
  }
  auto gn = graph_norm(parts, gen);
  Output out(g.out, fallback);
  if (dot) {
    *out << to_dot(gn.graph);
    return kSuccess;
  }
  *out << "# vertices " << gn.graph.vertex_count() << ", edges " << gn.graph.edges().size() << '\n';
  *out << edge_list(gn.graph);
  *out << "# distances";
  for (ClassId c = 0; c < parts.size(); ++c)
    *out << ' ' << parts.label(c) << '=' << (gn.distance[c] ? std::to_string(*gn.distance[c]) : "unreachable");
  *out << '\n';
  return kSuccess;
}

AlmostHom load_ahom(const Globals& g, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot open " + path);
  return read_ahom(in, path, g.limits());
}

int cmd_ahom_check(const Globals& g, const std::string& path, const std::string& eps, const std::string& alpha,
                   std::ostream& fallback) {
  auto ah = load_ahom(g, path);
  Output out(g.out, fallback);
  *out << ahom_report(ah, NormValue(parse_rational(eps)), NormValue(parse_rational(alpha)));
  return kSuccess;
}

int cmd_amplify(const Globals& g, const std::string& path, const std::string& target, std::size_t cap_degree,
                std::ostream& fallback) {
  auto ah = load_ahom(g, path);
  auto res = iterate_amplify(ah, parse_rational(target), cap_degree);
  Output out(g.out, fallback);
  *out << pad("step", 6) << pad("degree", 10) << pad("defect", 22) << pad("margin", 22) << "bounds\n";
  for (std::size_t t = 0; t < res.history.size(); ++t) {
    const auto& s = res.history[t];
    std::string bounds = "-";
    if (t > 0) {
      const auto& p = res.history[t - 1];
      auto eps_bound = NormValue(2) * p.defect - p.defect * p.defect;
      auto alpha_bound = NormValue(2) * p.margin - p.margin * p.margin;
      bounds = std::string(s.defect <= eps_bound ? "ok" : "VIOLATED") + "/" + (s.margin >= alpha_bound ? "ok" : "VIOLATED");
    }
    *out << pad(std::to_string(t), 6) << pad(std::to_string(s.degree), 10) << pad(s.defect.str(), 22)
         << pad(s.margin.str(), 22) << bounds << '\n';
  }
  *out << "steps: " << res.steps << '\n';
  *out << "target margin " << format_rational(parse_rational(target)) << ": "
       << (res.reached ? "reached" : "not reached (degree cap " + std::to_string(cap_degree) + ")") << '\n';
  return kSuccess;
}

struct SeparateArgs {
  std::string quotient;
  std::vector<std::string> quotient_images;
  std::string target;
  std::vector<std::string> target_images;
  std::string norm = "hamming";
  int radius = 2;
  std::string eps = "1/10", delta = "1/2";
  bool round_trip = false;
};

int cmd_separate(const Globals& g, const SeparateArgs& a, std::ostream& fallback) {
  auto q = group_ref(g, a.quotient);
  NOracle oracle(GenImages{q, parse_elements(q, a.quotient_images)});
  GenImages hom = oracle.model();
  if (!a.target.empty()) {
    auto h = group_ref(g, a.target);
    hom = GenImages{h, parse_elements(h, a.target_images)};
    if (hom.rank() != oracle.rank()) throw MalformedInput("target images and quotient images differ in number");
  } else if (!a.target_images.empty()) {
    hom = GenImages{q, parse_elements(q, a.target_images)};
  }
  auto norm = make_norm(hom.group, a.norm);
  NormValue eps(parse_rational(a.eps)), delta(parse_rational(a.delta));
  Output out(g.out, fallback);
  if (a.round_trip) {
    auto ah = separating_to_ahom(hom, norm, oracle, a.radius, eps, delta);
    *out << "separating -> almost-homomorphism (radius " << a.radius << ")\n" << ahom_report(ah, eps, delta);
    auto cert = ahom_to_separating(ah, coset_ball(oracle, a.radius), oracle);
    *out << "almost-homomorphism -> separating\n";
    *out << "  eps bound 2r*defect: " << cert.eps_bound.str() << '\n';
    *out << "  delta bound margin - 2r*defect: " << cert.delta_bound.str() << '\n';
    *out << "  word-error checks: " << cert.checks.size() << ", verified: " << (cert.verified ? "yes" : "no") << '\n';
    hom = cert.hom;
  }
  auto v = check_separation(hom, norm, oracle, a.radius, eps, delta);
  *out << "separation r=" << a.radius << " eps=" << eps.str() << " delta=" << delta.str() << ": " << v.words_checked
       << " words, " << v.violations.size() << " violations\n";
  for (const auto& viol : v.violations)
    *out << "  " << to_string(viol.word) << (viol.in_n ? " in N" : " outside N") << " at distance "
         << viol.distance.str() << '\n';
  *out << (v.pass() ? "PASS" : "FAIL") << '\n';
  return v.pass() ? kSuccess : kWitness;
}

int cmd_closure(const Globals& g, const std::string& config_path, std::size_t threads, const std::string& cert_path,
                std::ostream& fallback, std::ostream& err) {
  std::ifstream in(config_path);
  if (!in) throw MalformedInput("cannot open " + config_path);
  auto cfg = parse_experiment_config(in, config_path);
  if (!g.mode.empty()) {
    auto seed = cfg.mode.seed;
    cfg.mode = parse_mode(g.mode);
    cfg.mode.seed = seed;
  }
  if (g.seed) cfg.mode.seed = g.seed;
  if (cfg.mode.kind == SearchMode::Kind::Sampled && !cfg.mode.seed)
    throw MalformedInput("sampled mode needs an explicit seed (--seed or a 'seed' line)");
  std::vector<CatalogEntry> catalog;
  if (!g.catalog.empty()) {
    catalog = load_catalog(g.catalog, g.limits(), g.cap_order);
  } else {
    for (const auto& ref : cfg.groups) catalog.push_back(make_entry(ref, g.limits(), g.cap_order));
  }
  if (catalog.empty()) throw MalformedInput(config_path + ": no groups to search");
  ClosureOptions opts;
  opts.run_id = cfg.run_id;
  opts.threads = threads ? threads : cfg.threads;
  auto res = closure_search(cfg.g_words, cfg.w, catalog, cfg.mode, opts);
  Output out(g.out, fallback);
  for (const auto& line : res.log) *out << line << '\n';
  std::uint64_t tested = 0, members = 0;
  std::size_t skipped = 0;
  for (const auto& s : res.groups) {
    tested += s.tuples_tested;
    members += s.memberships;
    skipped += !s.note.empty();
  }
  std::ostream& summary = out.to_file() ? fallback : err;
  summary << "summary: run " << cfg.run_id << ", " << res.groups.size() << " groups (" << skipped << " skipped), "
          << tested << " homomorphisms, " << members << " memberships, " << (res.witness ? 1 : 0) << " witness\n";
  if (!res.witness) return kSuccess;
  summary << "witness in " << res.witness->group_label << ": images";
  for (auto e : res.witness->hom.images) summary << ' ' << res.witness->hom.group->element_name(e);
  summary << '\n';
  if (!cert_path.empty()) {
    std::ofstream cf(cert_path);
    if (!cf) throw MalformedInput("cannot write " + cert_path);
    write_certificate(cf, profinite_nonmember_certificate(cfg.g_words, cfg.w, res.witness->hom));
  }
  return kWitness;
}

int cmd_stabilize(const Globals& g, const std::string& ref, const std::vector<std::string>& elems,
                  std::ostream& fallback) {
  auto group = group_ref(g, ref);
  auto xs = parse_elements(group, elems);
  auto r = stabilization(group, xs);
  Output out(g.out, fallback);
  auto names = [&](const std::vector<Elem>& v) {
    if (v.size() > 24) return std::string();
    std::string s = " {";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + group->element_name(v[i]);
    return s + "}";
  };
  *out << "group " << group->label() << " (order " << group->order() << ")\n";
  *out << "S = product of [g][g^-1]: " << r.s_size << " elements\n";
  *out << "chain |S^n|:";
  for (auto c : r.chain) *out << ' ' << c;
  *out << '\n';
  *out << "n* = " << r.n_star << ", stabilized set: " << r.members.size() << " elements" << names(r.members) << '\n';
  *out << "variant S' = {e} u [g] u [g^-1]: n* = " << r.variant_n_star << ", stabilized set: "
       << r.variant_members.size() << " elements\n";
  *out << "normal closure: " << r.normal_closure.size() << " elements\n";
  *out << "literal = variant: " << (r.literal_equals_variant ? "yes" : "no") << '\n';
  *out << "variant = normal closure: " << (r.variant_equals_normal_closure ? "yes" : "no") << '\n';
  *out << "literal = normal closure: " << (r.literal_equals_normal_closure ? "yes" : "no") << '\n';
  return kSuccess;
}

int cmd_verify(const Globals& g, const std::string& path, std::ostream& fallback) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot open " + path);
  auto cert = read_certificate(in, g.limits());
  bool ok = verify_certificate(cert);
  Output out(g.out, fallback);
  *out << "certificate " << path << ": w = " << to_string(cert.w) << ", " << cert.g_words.size()
       << " class(es), group " << cert.hom.group->label() << '\n';
  *out << (ok ? "valid: phi(w) lies outside the product of the image classes"
              : "refuted: phi(w) lies in the product of the image classes")
       << '\n';
  return ok ? kSuccess : kRefused;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bi-invariant norms, conjugacy graphs, almost-homomorphisms and class-product closure experiments"};
  app.name("sofic");
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  std::string seed_text, cap_text;
  app.add_option("--catalog", g.catalog, "Group catalog: directory of group files, a group file, or a list of refs");
  app.add_option("--seed", seed_text, "Seed for sampled modes (unsigned 64-bit)");
  app.add_option("--mode", g.mode, "exhaustive | sampled:<count>");
  app.add_option("--out", g.out, "Write the main output to this file");
  app.add_option("--cap-order", cap_text, "Cap on group orders built from generators or tables");

  std::function<int()> action;

  auto* norm = app.add_subcommand(
      "norm", "Bi-invariant norm report: normalized Hamming norm |{j : j != jx}|/n, character norm "
              "sqrt((2chi(e) - chi(g) - conj chi(g))/chi(e)), or conjugacy-graph distance norm");
  std::string n_group, n_kind, n_char, n_scale;
  std::vector<std::string> n_classes;
  norm->add_option("group", n_group, "S<n>, a catalog label, or a group file")->required();
  norm->add_option("kind", n_kind, "hamming | character | graph")->required();
  norm->add_option("--classes", n_classes, "Generating classes for the graph norm (default: all)");
  norm->add_option("--char-file", n_char, "Character file (default: bundled fixed-point character)");
  norm->add_option("--scale", n_scale, "Multiply the norm by this positive rational");
  norm->callback([&] { action = [&] { return cmd_norm(g, n_group, n_kind, n_classes, n_char, n_scale, out); }; });

  auto* graph = app.add_subcommand(
      "conjgraph", "Conjugacy graph: vertices are conjugacy classes, x -- y iff x lies in c*y for a generating class c");
  std::string c_group;
  std::vector<std::string> c_classes;
  bool c_dot = false;
  graph->add_option("group", c_group, "S<n>, a catalog label, or a group file")->required();
  graph->add_option("classes", c_classes, "Generating class labels (C2, C2,2, ...) or ids");
  graph->add_flag("--dot", c_dot, "Emit DOT instead of an edge list");
  graph->callback([&] { action = [&] { return cmd_conjgraph(g, c_group, c_classes, c_dot, out); }; });

  auto* amp = app.add_subcommand(
      "amplify", "Amplification phi -> phi x phi into S_{n^2} via the pairing (i-1)n+j, iterated until the "
                 "margin 1-(1-alpha)^(2^t) reaches the target");
  std::string a_file, a_target = "9/10";
  std::size_t a_cap = kAmplifyDegreeCap;
  amp->add_option("ahom", a_file, "Almost-homomorphism file")->required();
  amp->add_option("--target-margin", a_target, "Margin to reach (rational below 1)");
  amp->add_option("--cap-degree", a_cap, "Largest permutation degree to build");
  amp->callback([&] { action = [&] { return cmd_amplify(g, a_file, a_target, a_cap, out); }; });

  auto* check = app.add_subcommand(
      "ahom-check", "(Phi, eps, alpha)-homomorphism check: measured defect max d(phi(a)phi(b), phi(ab)) and "
                    "margin min d(phi(a), e)");
  std::string h_file, h_eps = "1/10", h_alpha = "1/2";
  check->add_option("ahom", h_file, "Almost-homomorphism file")->required();
  check->add_option("--eps", h_eps, "Defect threshold (defect < eps)");
  check->add_option("--alpha", h_alpha, "Margin threshold (margin > alpha)");
  check->callback([&] { action = [&] { return cmd_ahom_check(g, h_file, h_eps, h_alpha, out); }; });

  auto* sep = app.add_subcommand(
      "separate", "(r, eps, delta)-separation of N = ker(F -> Q) by a homomorphism phi: F -> H; with --round-trip, "
                  "also the separating <-> almost-homomorphism constructions");
  SeparateArgs s;
  sep->add_option("quotient", s.quotient, "Finite quotient Q defining N")->required();
  sep->add_option("images", s.quotient_images, "Images of the free generators in Q")->required();
  sep->add_option("--target", s.target, "Group H for phi (default: Q)");
  sep->add_option("--target-images", s.target_images, "Images of the generators under phi");
  sep->add_option("--norm", s.norm, "Norm on H: hamming | graph[:C+...] | character[:file]");
  sep->add_option("--radius,-r", s.radius, "Word length bound r");
  sep->add_option("--eps", s.eps, "Bound for words in N");
  sep->add_option("--delta", s.delta, "Bound for words outside N");
  sep->add_flag("--round-trip", s.round_trip, "Pass through the almost-homomorphism on coset labels first");
  sep->callback([&] { action = [&] { return cmd_separate(g, s, out); }; });

  auto* clo = app.add_subcommand(
      "closure", "Closure experiment: search homomorphisms F -> H for phi(w) outside [phi(g_1)]^I ... [phi(g_k)]^I, "
                 "I the image of phi; JSON-lines log, exit 2 on a witness");
  std::string l_config, l_cert;
  std::size_t l_threads = 0;
  clo->add_option("config", l_config, "Experiment config file")->required();
  clo->add_option("--threads", l_threads, "Worker threads (output does not depend on it)");
  clo->add_option("--certificate", l_cert, "Write a certificate for the witness here");
  clo->callback([&] { action = [&] { return cmd_closure(g, l_config, l_threads, l_cert, out, err); }; });

  auto* stab = app.add_subcommand(
      "stabilize", "Class-product stabilization: S = [g_1][g_1^-1]...[g_k][g_k^-1], the union of S^n, compared with "
                   "the symmetrized variant and the normal closure");
  std::string t_group;
  std::vector<std::string> t_elems;
  stab->add_option("group", t_group, "S<n>, a catalog label, or a group file")->required();
  stab->add_option("elements", t_elems, "Elements g_1 ... g_k")->required();
  stab->callback([&] { action = [&] { return cmd_stabilize(g, t_group, t_elems, out); }; });

  auto* ver = app.add_subcommand(
      "verify-certificate", "Replay a profinite non-membership certificate: one homomorphism with phi(w) outside the "
                            "product of the image classes; exit 3 when refuted");
  std::string v_file;
  ver->add_option("certificate", v_file, "Certificate file")->required();
  ver->callback([&] { action = [&] { return cmd_verify(g, v_file, out); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }
  try {
    if (!seed_text.empty()) g.seed = parse_u64(seed_text, "--seed");
    if (!cap_text.empty()) {
      g.cap_order = parse_u64(cap_text, "--cap-order");
      if (*g.cap_order == 0) throw MalformedInput("--cap-order must be positive");
    }
    if (!g.mode.empty()) parse_mode(g.mode);
    return action();
  } catch (const CertificateRefused& e) {
    err << "refused: " << e.what() << '\n';
    return kRefused;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace sofic::cli
