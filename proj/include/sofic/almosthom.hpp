#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sofic/group.hpp"
#include "sofic/metrics.hpp"
#include "sofic/separability.hpp"
#include "sofic/words.hpp"

namespace sofic {

// A finite subset of some group, named by labels, with the products that
// stay inside the subset.
struct PartialMulSet {
  std::vector<std::string> labels;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> products;
  std::optional<std::size_t> identity;

  std::size_t size() const { return labels.size(); }
  // Throws MalformedInput on out-of-range indices or products of the
  // identity that are not the other factor.
  void validate() const;
};

// The full multiplication table of a finite group as a PartialMulSet.
PartialMulSet full_table(const FiniteGroup& group);

// Target: a finite group with a norm.
struct NormedTarget {
  Norm metric;
  std::vector<Elem> map;
};

// Target: S_degree with the normalized Hamming metric, without
// enumerating the group (degrees grow as n^(2^t) under amplification).
struct HammingTarget {
  std::size_t degree;
  std::vector<Perm> map;
};

class AlmostHom {
 public:
  AlmostHom(PartialMulSet domain, Norm metric, std::vector<Elem> map);
  AlmostHom(PartialMulSet domain, std::size_t degree, std::vector<Perm> map);

  const PartialMulSet& domain() const { return domain_; }
  const std::variant<NormedTarget, HammingTarget>& target() const { return target_; }
  bool is_hamming_symmetric() const;
  std::string target_label() const;

  // d(phi(a), phi(b)) between the images of two labels.
  NormValue distance(std::size_t a, std::size_t b) const;
  // d(phi(a) phi(b), phi(ab)) for a recorded product.
  NormValue product_error(std::size_t a, std::size_t b, std::size_t ab) const;
  // d(phi(a), e)
  NormValue size_of(std::size_t a) const;
  bool maps_identity_to_identity() const;

 private:
  PartialMulSet domain_;
  std::variant<NormedTarget, HammingTarget> target_;
};

// Largest product error over recorded products; 0 when none are recorded.
NormValue defect(const AlmostHom& ah);
// Smallest d(phi(a), e) over non-identity labels; throws PreconditionFailed
// when there are none.
NormValue margin(const AlmostHom& ah);

struct AhomVerdict {
  bool is_ahom = false;
  NormValue defect;
  std::optional<NormValue> margin;
  bool identity_ok = false;
};

// defect < eps, margin > alpha, identity mapped to identity.
AhomVerdict is_ahom(const AlmostHom& ah, const NormValue& eps, const NormValue& alpha);

// a -> phi(a) x phi(a) in S_{n^2}. Requires a Hamming-metric permutation
// target; the new defect and margin are 2x - x^2 of the old ones.
AlmostHom amplify(const AlmostHom& ah);

struct AmplifyStep {
  std::size_t degree;
  NormValue defect;
  NormValue margin;
};

struct AmplifyResult {
  AlmostHom result;
  std::size_t steps = 0;
  bool reached = false;            // false when stopped by the degree cap
  std::vector<AmplifyStep> history;  // history[0] is the input
};

inline constexpr std::size_t kAmplifyDegreeCap = 1296;

// Amplifies t times, t minimal with 1 - (1 - margin)^(2^t) >= target_margin.
AmplifyResult iterate_amplify(const AlmostHom& ah, const Rational& target_margin,
                              std::size_t degree_cap = kAmplifyDegreeCap);

// Distinct cosets [w]_N among words of length <= radius. The representative
// of a coset is its shortlex-least word.
struct CosetBall {
  int rank = 1;
  int radius = 0;
  std::vector<Word> words;             // ball(rank, radius)
  std::vector<std::size_t> label_of;   // word index -> coset label
  std::vector<Word> reps;              // coset label -> representative
  PartialMulSet domain;                // products recorded when they land in the ball
};

CosetBall coset_ball(const NOracle& oracle, int radius);

struct WordBoundCheck {
  Word word;
  NormValue error;  // d(phi~(w), phi([w]_N))
  NormValue bound;  // (2|w| - 1) * defect, 0 for the empty word
  bool holds;
};

// phi~ is the homomorphism x_i -> phi([x_i]_N); one check per ball word.
GenImages extend_generators(const AlmostHom& ah, const CosetBall& cosets);
std::vector<WordBoundCheck> word_error_bound(const AlmostHom& ah, const CosetBall& cosets);

struct SeparationCertificate {
  GenImages hom;
  int radius = 0;
  bool vacuous = false;  // radius 0: the ball holds only the identity
  NormValue defect, margin;
  NormValue eps_bound;    // 2 r defect
  NormValue delta_bound;  // margin - 2 r defect
  std::vector<WordBoundCheck> checks;
  NormValue max_in_n;     // largest d(phi~(w), e) with w in N
  std::optional<NormValue> min_outside_n;
  bool verified = false;
};

// From an almost-homomorphism on the coset labels of `cosets`, the
// homomorphism x_i -> phi([x_i]_N), with the separation bounds re-checked by
// evaluating every ball word. Throws PreconditionFailed when
// margin <= 2 r defect.
SeparationCertificate ahom_to_separating(const AlmostHom& ah, const CosetBall& cosets, const NOracle& oracle);

// The converse: gi must (3r, eps, alpha)-separate N. The result maps each
// coset label of the radius-r ball to phi of its representative.
AlmostHom separating_to_ahom(const GenImages& gi, const Norm& norm, const NOracle& oracle, int radius,
                             const NormValue& eps, const NormValue& alpha);

// Text block: |Phi|, target, defect, margin and the verdict for (eps, alpha).
std::string ahom_report(const AlmostHom& ah, const NormValue& eps, const NormValue& alpha);

}  // namespace sofic
