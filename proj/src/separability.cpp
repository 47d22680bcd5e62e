#include "sofic/separability.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "sofic/catalog.hpp"
#include "sofic/error.hpp"

namespace sofic {

SeparationVerdict check_separation(const GenImages& gi, const Norm& norm, const NOracle& oracle, int radius,
                                   const NormValue& eps, const NormValue& delta, std::size_t ball_cap) {
  if (!(eps < delta)) throw PreconditionFailed("separation needs eps < delta");
  if (gi.group != norm.group()) throw MalformedInput("generator images and norm live on different groups");
  if (gi.rank() != oracle.rank()) throw MalformedInput("generator images and oracle differ in rank");
  if (radius < 0) throw MalformedInput("radius must be nonnegative");
  if (ball_size(gi.rank(), radius) > ball_cap)
    throw SizeLimit("ball of radius " + std::to_string(radius) + " too large", ball_cap);
  SeparationVerdict verdict{radius, eps, delta, 0, {}};
  for (auto& w : ball(gi.rank(), radius)) {
    const auto& dist = norm(evaluate(w, gi));
    const bool in_n = oracle.contains(w);
    ++verdict.words_checked;
    if (in_n ? !(dist < eps) : !(dist > delta)) verdict.violations.push_back({std::move(w), dist, in_n});
  }
  return verdict;
}

bool class_product_membership(const ClassPartition& classes, Elem h, std::span<const Elem> hs) {
  if (hs.empty()) return h == FiniteGroup::identity();
  std::vector<ClassId> ids;
  ids.reserve(hs.size());
  for (auto x : hs) ids.push_back(classes.class_of(x));
  return iterated_class_product(classes, ids).contains(classes.class_of(h));
}

namespace {

using ElementSet = std::vector<bool>;

ElementSet brute_force_class(const FiniteGroup& g, Elem x) {
  ElementSet cls(g.order(), false);
  for (Elem h = 0; h < g.order(); ++h) cls[g.conj(x, h)] = true;
  return cls;
}

ElementSet set_product(const FiniteGroup& g, const ElementSet& a, const ElementSet& b) {
  ElementSet out(g.order(), false);
  std::vector<Elem> bs;
  for (Elem y = 0; y < g.order(); ++y)
    if (b[y]) bs.push_back(y);
  for (Elem x = 0; x < g.order(); ++x) {
    if (!a[x]) continue;
    for (auto y : bs) out[g.mul(x, y)] = true;
  }
  return out;
}

std::vector<Elem> to_list(const ElementSet& s) {
  std::vector<Elem> out;
  for (Elem x = 0; x < s.size(); ++x)
    if (s[x]) out.push_back(x);
  return out;
}

}  // namespace

bool brute_force_membership(const FiniteGroup& group, Elem h, std::span<const Elem> hs) {
  ElementSet current(group.order(), false);
  current[0] = true;
  for (auto x : hs) current = set_product(group, current, brute_force_class(group, x));
  return current[h];
}

TriangleReport triangle_bound_check(const ClassPartition& classes, const Norm& norm, Elem w_image,
                                    std::span<const Elem> g_images) {
  TriangleReport report;
  report.applicable = class_product_membership(classes, w_image, g_images);
  if (!report.applicable) return report;
  report.lhs = norm(w_image);
  for (auto g : g_images) report.rhs = report.rhs + norm(g);
  report.holds = report.lhs <= report.rhs;
  return report;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in [0, bound) by rejection, so sampled runs do not depend on the
// standard library's distribution implementation.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

struct ImageData {
  Subgroup sub;
  ClassPartition classes;
  std::vector<Elem> local;  // target element -> subgroup element (members only)
};

// Per-worker cache of image subgroups keyed by their element set.
class ImageCache {
 public:
  explicit ImageCache(GroupPtr target) : target_(std::move(target)) {}

  const ImageData& get(std::span<const Elem> images) {
    const auto& h = *target_;
    std::string key(h.order(), '0');
    std::vector<Elem> members{0};
    key[0] = '1';
    for (std::size_t head = 0; head < members.size(); ++head)
      for (auto g : images) {
        Elem next = h.mul(members[head], g);
        if (key[next] == '1') continue;
        key[next] = '1';
        members.push_back(next);
      }
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    auto sub = image_subgroup(target_, images, GroupLimits{h.order(), GroupLimits{}.table_order_cap});
    ClassPartition classes(sub.group);
    std::vector<Elem> local(h.order(), 0);
    for (Elem i = 0; i < sub.inclusion.size(); ++i) local[sub.inclusion[i]] = i;
    return cache_.emplace(std::move(key), ImageData{std::move(sub), std::move(classes), std::move(local)}).first->second;
  }

 private:
  GroupPtr target_;
  std::map<std::string, ImageData> cache_;
};

struct BatchOutcome {
  std::uint64_t tested = 0;
  std::uint64_t memberships = 0;
  std::uint64_t witnesses = 0;
  std::optional<ClosureWitness> first_witness;
};

struct GroupSearch {
  const std::vector<Word>& g_words;
  const Word& w;
  GroupPtr group;
  std::string label;
  // exhaustive: tuple index t decodes to images; sampled: explicit tuples
  std::uint64_t total = 0;
  std::vector<std::vector<Elem>> sampled;

  std::vector<Elem> tuple(std::uint64_t t) const {
    if (!sampled.empty()) return sampled[t];
    const auto n = static_cast<std::size_t>(w.rank());
    std::vector<Elem> images(n);
    for (std::size_t i = n; i-- > 0;) {
      images[i] = static_cast<Elem>(t % group->order());
      t /= group->order();
    }
    return images;
  }

  BatchOutcome run_batch(ImageCache& cache, std::uint64_t begin, std::uint64_t end) const {
    BatchOutcome out;
    std::vector<Elem> g_images(g_words.size()), g_local(g_words.size());
    for (std::uint64_t t = begin; t < end; ++t) {
      GenImages hom{group, tuple(t)};
      const auto& image = cache.get(hom.images);
      for (std::size_t i = 0; i < g_words.size(); ++i) {
        g_images[i] = evaluate(g_words[i], hom);
        g_local[i] = image.local[g_images[i]];
      }
      const Elem w_image = evaluate(w, hom);
      const Elem w_local = image.local[w_image];
      ++out.tested;
      if (class_product_membership(image.classes, w_local, g_local)) {
        ++out.memberships;
        continue;
      }
      if (brute_force_membership(*image.sub.group, w_local, g_local))
        throw Error("class-level and element-level membership disagree in " + label + " at tuple " +
                    std::to_string(t));
      ++out.witnesses;
      if (out.first_witness) continue;
      ClosureWitness witness{label, hom, g_words, w, t, image.sub.group->order(), g_images, w_image, {}, true};
      for (auto gl : g_local) {
        std::vector<Elem> cls;
        for (auto m : image.classes.members(image.classes.class_of(gl))) cls.push_back(image.sub.inclusion[m]);
        std::sort(cls.begin(), cls.end());
        witness.g_classes.push_back(std::move(cls));
      }
      out.first_witness = std::move(witness);
    }
    return out;
  }
};

std::string batch_record(const std::string& run_id, const std::string& label, std::size_t batch,
                         std::uint64_t first, const BatchOutcome& b) {
  nlohmann::ordered_json j;
  j["run_id"] = run_id;
  j["group"] = label;
  j["batch"] = batch;
  j["first_tuple"] = first;
  j["tuples_tested"] = b.tested;
  j["memberships"] = b.memberships;
  j["witnesses"] = b.witnesses;
  return j.dump();
}

std::string witness_record(const std::string& run_id, const ClosureWitness& w) {
  const auto& g = *w.hom.group;
  nlohmann::ordered_json j;
  j["run_id"] = run_id;
  j["group"] = w.group_label;
  j["witness_tuple"] = w.tuple_index;
  auto images = nlohmann::ordered_json::array();
  for (auto e : w.hom.images) images.push_back(g.element_name(e));
  j["images"] = images;
  j["image_order"] = w.image_order;
  j["w_image"] = g.element_name(w.w_image);
  j["verdict"] = "outside";
  return j.dump();
}

}  // namespace

ClosureResult closure_search(const std::vector<Word>& g_words, const Word& w, const std::vector<CatalogEntry>& catalog,
                             const SearchMode& mode, const ClosureOptions& options) {
  for (const auto& g : g_words)
    if (g.rank() != w.rank()) throw MalformedInput("closure_search: words differ in rank");
  if (mode.kind == SearchMode::Kind::Sampled && !mode.seed)
    throw PreconditionFailed("sampled mode requires an explicit seed");
  if (options.batch_size == 0) throw PreconditionFailed("batch size must be positive");
  std::size_t threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());

  ClosureResult result;
  for (std::size_t gi = 0; gi < catalog.size() && !result.witness; ++gi) {
    const auto& entry = catalog[gi];
    GroupSummary summary{entry.label, 0, 0, 0, entry.skipped};
    auto skip = [&](const std::string& note) {
      summary.note = note;
      nlohmann::ordered_json j;
      j["run_id"] = options.run_id;
      j["group"] = entry.label;
      j["skipped"] = note;
      result.log.push_back(j.dump());
      result.groups.push_back(summary);
    };
    if (!entry.group) {
      skip(entry.skipped.empty() ? "group unavailable" : entry.skipped);
      continue;
    }

    GroupSearch search{g_words, w, entry.group, entry.label, 0, {}};
    const auto order = entry.group->order();
    if (mode.kind == SearchMode::Kind::Exhaustive) {
      std::uint64_t total = 1;
      bool too_many = false;
      for (int i = 0; i < w.rank(); ++i) {
        if (total > options.exhaustive_ceiling / order) {
          too_many = true;
          break;
        }
        total *= order;
      }
      if (too_many || total > options.exhaustive_ceiling) {
        skip("exhaustive search over " + std::to_string(order) + "^" + std::to_string(w.rank()) +
             " tuples exceeds the ceiling of " + std::to_string(options.exhaustive_ceiling) + "; use sampled mode");
        continue;
      }
      search.total = total;
    } else {
      std::mt19937_64 rng(splitmix64(*mode.seed + gi));
      search.sampled.reserve(mode.count);
      for (std::uint64_t s = 0; s < mode.count; ++s) {
        std::vector<Elem> images(static_cast<std::size_t>(w.rank()));
        for (auto& e : images) e = static_cast<Elem>(uniform_below(rng, order));
        search.sampled.push_back(std::move(images));
      }
      search.total = mode.count;
    }

    const std::uint64_t batches = (search.total + options.batch_size - 1) / options.batch_size;
    std::vector<ImageCache> caches;
    for (std::size_t t = 0; t < threads; ++t) caches.emplace_back(entry.group);
    for (std::uint64_t wave = 0; wave < batches && !result.witness; wave += threads) {
      const auto in_wave = static_cast<std::size_t>(std::min<std::uint64_t>(threads, batches - wave));
      std::vector<BatchOutcome> outcomes(in_wave);
      std::vector<std::exception_ptr> errors(in_wave);
      auto work = [&](std::size_t k) {
        try {
          const auto b = wave + k;
          const auto begin = b * options.batch_size;
          outcomes[k] = search.run_batch(caches[k], begin, std::min(search.total, begin + options.batch_size));
        } catch (...) {
          errors[k] = std::current_exception();
        }
      };
      if (in_wave == 1) {
        work(0);
      } else {
        std::vector<std::thread> pool;
        for (std::size_t k = 0; k < in_wave; ++k) pool.emplace_back(work, k);
        for (auto& t : pool) t.join();
      }
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
      for (std::size_t k = 0; k < in_wave; ++k) {
        const auto& b = outcomes[k];
        summary.tuples_tested += b.tested;
        summary.memberships += b.memberships;
        summary.witnesses += b.witnesses;
        result.log.push_back(
            batch_record(options.run_id, entry.label, wave + k, (wave + k) * options.batch_size, b));
        if (b.first_witness) {
          result.witness = b.first_witness;
          result.log.push_back(witness_record(options.run_id, *result.witness));
          break;
        }
      }
    }
    result.groups.push_back(summary);
  }
  return result;
}

namespace {

ElementSet class_set(const ClassPartition& classes, Elem x) {
  ElementSet s(classes.group()->order(), false);
  for (auto m : classes.members(classes.class_of(x))) s[m] = true;
  return s;
}

// Powers P, P*S, P*S*S, ... of a set containing the identity, until the
// chain stops growing. Returns the stable set; `steps` is the least n with
// S^n = S^(n+1).
ElementSet stabilize_powers(const FiniteGroup& g, const ElementSet& s, std::size_t& steps,
                            std::vector<std::size_t>* chain) {
  ElementSet power = s;
  steps = 1;
  for (;;) {
    if (chain) chain->push_back(static_cast<std::size_t>(std::count(power.begin(), power.end(), true)));
    ElementSet next = set_product(g, power, s);
    if (next == power) return power;
    power = std::move(next);
    ++steps;
  }
}

}  // namespace

StabilizationResult stabilization(const GroupPtr& group, std::span<const Elem> g_elements) {
  const auto& g = *group;
  for (auto x : g_elements)
    if (x >= g.order()) throw MalformedInput("element index out of range for " + g.label());
  ClassPartition classes(group);
  StabilizationResult r;

  ElementSet s(g.order(), false);
  s[0] = true;
  for (auto x : g_elements) {
    s = set_product(g, s, class_set(classes, x));
    s = set_product(g, s, class_set(classes, g.inv(x)));
  }
  r.s_size = static_cast<std::size_t>(std::count(s.begin(), s.end(), true));
  auto literal = stabilize_powers(g, s, r.n_star, &r.chain);
  r.members = to_list(literal);

  ElementSet variant(g.order(), false);
  variant[0] = true;
  std::vector<Elem> generators;
  for (auto x : g_elements) {
    for (auto y : {x, g.inv(x)}) {
      for (auto m : classes.members(classes.class_of(y))) {
        variant[m] = true;
        generators.push_back(m);
      }
    }
  }
  auto variant_closed = stabilize_powers(g, variant, r.variant_n_star, nullptr);
  r.variant_members = to_list(variant_closed);

  auto closure = image_subgroup(group, generators, GroupLimits{g.order(), GroupLimits{}.table_order_cap});
  r.normal_closure = closure.inclusion;
  std::sort(r.normal_closure.begin(), r.normal_closure.end());

  r.literal_equals_variant = r.members == r.variant_members;
  r.variant_equals_normal_closure = r.variant_members == r.normal_closure;
  r.literal_equals_normal_closure = r.members == r.normal_closure;
  return r;
}

namespace {

bool nonmember_in_image(const std::vector<Word>& g_words, const Word& w, const GenImages& hom) {
  for (const auto& g : g_words)
    if (g.rank() != hom.rank()) throw MalformedInput("certificate words differ in rank from the homomorphism");
  if (w.rank() != hom.rank()) throw MalformedInput("certificate word differs in rank from the homomorphism");
  const auto& h = *hom.group;
  auto image = image_subgroup(hom.group, hom.images, GroupLimits{h.order(), GroupLimits{}.table_order_cap});
  std::vector<Elem> local(h.order(), 0);
  for (Elem i = 0; i < image.inclusion.size(); ++i) local[image.inclusion[i]] = i;
  std::vector<Elem> gs;
  for (const auto& g : g_words) gs.push_back(local[evaluate(g, hom)]);
  return !brute_force_membership(*image.group, local[evaluate(w, hom)], gs);
}

}  // namespace

Certificate profinite_nonmember_certificate(const std::vector<Word>& g_words, const Word& w, const GenImages& hom) {
  if (!nonmember_in_image(g_words, w, hom))
    throw CertificateRefused("phi(" + to_string(w) + ") lies in the product of the image classes");
  return Certificate{g_words, w, hom};
}

bool verify_certificate(const Certificate& cert) { return nonmember_in_image(cert.g_words, cert.w, cert.hom); }

void write_certificate(std::ostream& out, const Certificate& cert) {
  const auto& h = *cert.hom.group;
  out << "certificate v1\n";
  out << "rank " << cert.w.rank() << '\n';
  for (const auto& g : cert.g_words) out << "g " << to_string(g) << '\n';
  out << "w " << to_string(cert.w) << '\n';
  for (auto e : cert.hom.images) out << "image " << h.element_name(e) << '\n';
  out << "group\n";
  write_group(out, h);
}

Certificate read_certificate(std::istream& in, const GroupLimits& limits) {
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& why) -> void {
    throw MalformedInput("certificate line " + std::to_string(lineno) + ": " + why);
  };
  int rank = 0;
  std::vector<std::string> g_texts, image_texts;
  std::string w_text;
  bool header = false, group_section = false;
  while (!group_section && std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string key;
    if (!(fields >> key)) continue;
    std::string rest;
    std::getline(fields, rest);
    if (auto b = rest.find_first_not_of(" \t"); b != std::string::npos) rest = rest.substr(b);
    else rest.clear();
    while (!rest.empty() && (rest.back() == '\r' || rest.back() == ' ')) rest.pop_back();
    if (!header) {
      if (key != "certificate" || rest != "v1") fail("expected 'certificate v1'");
      header = true;
    } else if (key == "rank") {
      try {
        rank = std::stoi(rest);
      } catch (...) {
        fail("bad rank");
      }
      if (rank < 1) fail("rank must be positive");
    } else if (key == "g") {
      g_texts.push_back(rest);
    } else if (key == "w") {
      w_text = rest;
    } else if (key == "image") {
      image_texts.push_back(rest);
    } else if (key == "group") {
      group_section = true;
    } else {
      fail("unknown field '" + key + "'");
    }
  }
  if (!header) throw MalformedInput("certificate: empty input");
  if (!group_section) throw MalformedInput("certificate: missing 'group' section");
  if (rank == 0) throw MalformedInput("certificate: missing rank");
  if (w_text.empty()) throw MalformedInput("certificate: missing w");
  if (static_cast<int>(image_texts.size()) != rank)
    throw MalformedInput("certificate: expected " + std::to_string(rank) + " image lines");
  auto group = read_group(in, "certificate-group", limits);
  Certificate cert{{}, parse_word(w_text, rank), GenImages{group, {}}};
  for (const auto& t : g_texts) cert.g_words.push_back(parse_word(t, rank));
  for (const auto& t : image_texts) cert.hom.images.push_back(group->parse_element(t));
  return cert;
}

}  // namespace sofic
