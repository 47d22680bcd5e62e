#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sofic/group.hpp"
#include "sofic/metrics.hpp"
#include "sofic/words.hpp"

namespace sofic {

// A normal subgroup N of the free group, known through a finite quotient
// model: N is the kernel of the homomorphism given by `model`.
class NOracle {
 public:
  explicit NOracle(GenImages model) : model_(std::move(model)) {}

  const GenImages& model() const { return model_; }
  int rank() const { return model_.rank(); }
  Elem image(const Word& w) const { return evaluate(w, model_); }
  bool contains(const Word& w) const { return image(w) == FiniteGroup::identity(); }
  bool same_coset(const Word& a, const Word& b) const { return image(a) == image(b); }

 private:
  GenImages model_;
};

struct Violation {
  Word word;
  NormValue distance;
  bool in_n;  // which side of the alternative was violated
};

struct SeparationVerdict {
  int radius = 0;
  NormValue eps, delta;
  std::size_t words_checked = 0;
  std::vector<Violation> violations;

  bool pass() const { return violations.empty(); }
};

inline constexpr std::size_t kBallCap = 2'000'000;

// Checks over every word of length <= radius that d(e, phi(w)) < eps when
// w is in N and d(e, phi(w)) > delta otherwise.
SeparationVerdict check_separation(const GenImages& gi, const Norm& norm, const NOracle& oracle, int radius,
                                   const NormValue& eps, const NormValue& delta, std::size_t ball_cap = kBallCap);

// Is h in [hs_1]^G [hs_2]^G ... [hs_k]^G? Decided on classes through
// iterated_class_product; k = 0 asks whether h is the identity.
bool class_product_membership(const ClassPartition& classes, Elem h, std::span<const Elem> hs);

// The same question answered by enumerating element sets, with conjugacy
// classes computed by conjugating with every element of the group.
bool brute_force_membership(const FiniteGroup& group, Elem h, std::span<const Elem> hs);

struct TriangleReport {
  bool applicable = false;  // membership precondition held
  NormValue lhs;            // ||w-image||
  NormValue rhs;            // sum of ||g-image_i||
  bool holds = false;
};

// For h in the class product, a bi-invariant norm satisfies
// ||h|| <= sum ||hs_i||; a failure points at a broken norm.
TriangleReport triangle_bound_check(const ClassPartition& classes, const Norm& norm, Elem w_image,
                                    std::span<const Elem> g_images);

struct CatalogEntry {
  std::string label;
  GroupPtr group;       // null when the entry could not be built
  std::string skipped;  // reason, when group is null
};

struct SearchMode {
  enum class Kind { Exhaustive, Sampled };
  Kind kind = Kind::Exhaustive;
  std::uint64_t count = 0;             // sampled tuples per group
  std::optional<std::uint64_t> seed;   // mandatory for sampled mode
};

struct ClosureOptions {
  std::string run_id = "run";
  std::size_t threads = 0;              // 0: hardware concurrency
  std::size_t batch_size = 4096;        // tuples per JSON-lines record
  std::uint64_t exhaustive_ceiling = 20'000'000;
};

struct ClosureWitness {
  std::string group_label;
  GenImages hom;
  std::vector<Word> g_words;
  Word w;
  std::uint64_t tuple_index = 0;
  std::size_t image_order = 0;                  // |<phi(x_1), ..., phi(x_n)>|
  std::vector<Elem> g_images;
  Elem w_image = 0;
  std::vector<std::vector<Elem>> g_classes;     // classes of phi(g_i) in the image
  bool outside = true;
};

struct GroupSummary {
  std::string label;
  std::uint64_t tuples_tested = 0;
  std::uint64_t memberships = 0;
  std::uint64_t witnesses = 0;
  std::string note;  // non-empty when the group was skipped
};

struct ClosureResult {
  std::vector<std::string> log;  // JSON-lines records
  std::vector<GroupSummary> groups;
  std::optional<ClosureWitness> witness;
};

// Searches homomorphisms F -> H over the catalog for phi(w) outside
// [phi(g_1)]^I ... [phi(g_k)]^I, where I is the image of phi. Stops after
// the batch holding the first witness; every witness is re-verified by
// brute_force_membership. Output is independent of the thread count.
ClosureResult closure_search(const std::vector<Word>& g_words, const Word& w, const std::vector<CatalogEntry>& catalog,
                             const SearchMode& mode, const ClosureOptions& options = {});

struct StabilizationResult {
  // S = [g_1][g_1^-1] ... [g_k][g_k^-1] as a product of element sets.
  std::size_t s_size = 0;
  std::size_t n_star = 0;               // least n with S^n = S^(n+1)
  std::vector<std::size_t> chain;       // |S^1|, |S^2|, ..., |S^(n*)|
  std::vector<Elem> members;            // S^(n*)
  // S' = {e} u [g_i] u [g_i^-1], closed under products.
  std::size_t variant_n_star = 0;
  std::vector<Elem> variant_members;
  std::vector<Elem> normal_closure;
  bool literal_equals_variant = false;
  bool variant_equals_normal_closure = false;
  bool literal_equals_normal_closure = false;
};

StabilizationResult stabilization(const GroupPtr& group, std::span<const Elem> g_elements);

// A single homomorphism witnessing w outside the closure of the class
// product, replayable without the search that produced it.
struct Certificate {
  std::vector<Word> g_words;
  Word w;
  GenImages hom;
};

// Throws CertificateRefused when phi(w) lies in the product.
Certificate profinite_nonmember_certificate(const std::vector<Word>& g_words, const Word& w, const GenImages& hom);

// Brute-force replay in the image subgroup; true iff phi(w) is outside.
bool verify_certificate(const Certificate& cert);

void write_certificate(std::ostream& out, const Certificate& cert);
Certificate read_certificate(std::istream& in, const GroupLimits& limits = {});

}  // namespace sofic
