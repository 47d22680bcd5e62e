#include "sofic/almosthom.hpp"

#include <algorithm>
#include <sstream>

#include "sofic/error.hpp"

namespace sofic {

void PartialMulSet::validate() const {
  const auto n = labels.size();
  if (identity && *identity >= n) throw MalformedInput("identity index out of range");
  for (const auto& [ab, c] : products) {
    auto [a, b] = ab;
    if (a >= n || b >= n || c >= n) throw MalformedInput("product index out of range");
    if (identity && a == *identity && c != b)
      throw MalformedInput("identity * " + labels[b] + " recorded as " + labels[c]);
    if (identity && b == *identity && c != a)
      throw MalformedInput(labels[a] + " * identity recorded as " + labels[c]);
  }
}

PartialMulSet full_table(const FiniteGroup& group) {
  PartialMulSet s;
  for (Elem a = 0; a < group.order(); ++a) s.labels.push_back(group.element_name(a));
  for (Elem a = 0; a < group.order(); ++a)
    for (Elem b = 0; b < group.order(); ++b) s.products[{a, b}] = group.mul(a, b);
  s.identity = 0;
  return s;
}

AlmostHom::AlmostHom(PartialMulSet domain, Norm metric, std::vector<Elem> map)
    : domain_(std::move(domain)), target_(NormedTarget{std::move(metric), std::move(map)}) {
  domain_.validate();
  const auto& t = std::get<NormedTarget>(target_);
  if (t.map.size() != domain_.size())
    throw MalformedInput("map has " + std::to_string(t.map.size()) + " images for " +
                         std::to_string(domain_.size()) + " labels");
  for (auto e : t.map)
    if (e >= t.metric.group()->order()) throw MalformedInput("image index out of range");
}

AlmostHom::AlmostHom(PartialMulSet domain, std::size_t degree, std::vector<Perm> map)
    : domain_(std::move(domain)), target_(HammingTarget{degree, std::move(map)}) {
  domain_.validate();
  const auto& t = std::get<HammingTarget>(target_);
  if (t.map.size() != domain_.size())
    throw MalformedInput("map has " + std::to_string(t.map.size()) + " images for " +
                         std::to_string(domain_.size()) + " labels");
  for (const auto& p : t.map)
    if (p.degree() != degree) throw MalformedInput("image degree differs from target degree");
}

bool AlmostHom::is_hamming_symmetric() const {
  if (std::holds_alternative<HammingTarget>(target_)) return true;
  const auto& t = std::get<NormedTarget>(target_);
  return t.metric.kind() == NormKind::Hamming && t.metric.group()->has_perms();
}

std::string AlmostHom::target_label() const {
  if (const auto* h = std::get_if<HammingTarget>(&target_))
    return "S" + std::to_string(h->degree) + " (hamming)";
  const auto& t = std::get<NormedTarget>(target_);
  return t.metric.group()->label() + " (" + t.metric.label() + ")";
}

NormValue AlmostHom::distance(std::size_t a, std::size_t b) const {
  if (const auto* h = std::get_if<HammingTarget>(&target_)) return hamming_distance(h->map[a], h->map[b]);
  const auto& t = std::get<NormedTarget>(target_);
  return induced_metric(t.metric, t.map[a], t.map[b]);
}

NormValue AlmostHom::product_error(std::size_t a, std::size_t b, std::size_t ab) const {
  if (const auto* h = std::get_if<HammingTarget>(&target_))
    return hamming_distance(h->map[a] * h->map[b], h->map[ab]);
  const auto& t = std::get<NormedTarget>(target_);
  const auto& g = *t.metric.group();
  return induced_metric(t.metric, g.mul(t.map[a], t.map[b]), t.map[ab]);
}

NormValue AlmostHom::size_of(std::size_t a) const {
  if (const auto* h = std::get_if<HammingTarget>(&target_)) return hamming_norm(h->map[a]);
  const auto& t = std::get<NormedTarget>(target_);
  return t.metric(t.map[a]);
}

bool AlmostHom::maps_identity_to_identity() const {
  if (!domain_.identity) return true;
  if (const auto* h = std::get_if<HammingTarget>(&target_)) return h->map[*domain_.identity].is_identity();
  return std::get<NormedTarget>(target_).map[*domain_.identity] == FiniteGroup::identity();
}

NormValue defect(const AlmostHom& ah) {
  NormValue worst(0);
  for (const auto& [ab, c] : ah.domain().products) worst = max(worst, ah.product_error(ab.first, ab.second, c));
  return worst;
}

NormValue margin(const AlmostHom& ah) {
  std::optional<NormValue> best;
  for (std::size_t a = 0; a < ah.domain().size(); ++a) {
    if (ah.domain().identity == a) continue;
    auto v = ah.size_of(a);
    best = best ? min(*best, v) : v;
  }
  if (!best) throw PreconditionFailed("margin is undefined without non-identity labels");
  return *best;
}

AhomVerdict is_ahom(const AlmostHom& ah, const NormValue& eps, const NormValue& alpha) {
  AhomVerdict v;
  v.defect = defect(ah);
  v.identity_ok = ah.maps_identity_to_identity();
  bool has_nonidentity = ah.domain().size() > (ah.domain().identity ? 1u : 0u);
  if (has_nonidentity) v.margin = margin(ah);
  v.is_ahom = v.defect < eps && (!v.margin || *v.margin > alpha) && v.identity_ok;
  return v;
}

AlmostHom amplify(const AlmostHom& ah) {
  if (!ah.is_hamming_symmetric())
    throw PreconditionFailed("amplification needs a permutation target with the Hamming metric, got " +
                             ah.target_label());
  std::vector<Perm> perms;
  std::size_t degree = 0;
  if (const auto* h = std::get_if<HammingTarget>(&ah.target())) {
    perms = h->map;
    degree = h->degree;
  } else {
    const auto& t = std::get<NormedTarget>(ah.target());
    degree = t.metric.group()->degree();
    for (auto e : t.map) perms.push_back(t.metric.group()->perm(e));
  }
  std::vector<Perm> squared;
  squared.reserve(perms.size());
  for (const auto& p : perms) squared.push_back(square_embed(p, p));
  return AlmostHom(ah.domain(), degree * degree, std::move(squared));
}

namespace {

std::size_t target_degree(const AlmostHom& ah) {
  if (const auto* h = std::get_if<HammingTarget>(&ah.target())) return h->degree;
  return std::get<NormedTarget>(ah.target()).metric.group()->degree();
}

}  // namespace

AmplifyResult iterate_amplify(const AlmostHom& ah, const Rational& target_margin, std::size_t degree_cap) {
  if (!ah.is_hamming_symmetric())
    throw PreconditionFailed("amplification needs a permutation target with the Hamming metric, got " +
                             ah.target_label());
  if (target_margin >= 1) throw PreconditionFailed("target margin must be below 1");
  auto eps = defect(ah);
  auto alpha = margin(ah);
  if (!(eps < alpha))
    throw PreconditionFailed("margin " + alpha.str() + " must exceed the defect " + eps.str());
  AmplifyResult out{ah, 0, false, {{target_degree(ah), eps, alpha}}};
  while (out.history.back().margin < NormValue(target_margin)) {
    const auto degree = out.history.back().degree;
    if (degree * degree > degree_cap) return out;
    out.result = amplify(out.result);
    ++out.steps;
    out.history.push_back({degree * degree, defect(out.result), margin(out.result)});
  }
  out.reached = true;
  return out;
}

CosetBall coset_ball(const NOracle& oracle, int radius) {
  CosetBall cb;
  cb.rank = oracle.rank();
  cb.radius = radius;
  cb.words = ball(cb.rank, radius);
  std::vector<Elem> label_image;
  std::map<Elem, std::size_t> label_by_image;
  for (const auto& w : cb.words) {
    Elem q = oracle.image(w);
    auto [it, inserted] = label_by_image.try_emplace(q, cb.reps.size());
    if (inserted) {
      cb.reps.push_back(w);
      label_image.push_back(q);
      cb.domain.labels.push_back("[" + to_string(w) + "]");
    }
    cb.label_of.push_back(it->second);
  }
  cb.domain.identity = cb.label_of[0];
  const auto& q = *oracle.model().group;
  for (std::size_t i = 0; i < cb.reps.size(); ++i)
    for (std::size_t j = 0; j < cb.reps.size(); ++j)
      if (auto it = label_by_image.find(q.mul(label_image[i], label_image[j])); it != label_by_image.end())
        cb.domain.products[{i, j}] = it->second;
  return cb;
}

namespace {

const NormedTarget& normed(const AlmostHom& ah, const CosetBall& cosets) {
  const auto* target = std::get_if<NormedTarget>(&ah.target());
  if (!target) throw PreconditionFailed("ahom_to_separating needs a finite normed target");
  if (ah.domain().size() != cosets.reps.size())
    throw MalformedInput("almost-homomorphism domain does not match the coset ball");
  return *target;
}

}  // namespace

GenImages extend_generators(const AlmostHom& ah, const CosetBall& cosets) {
  const auto& target = normed(ah, cosets);
  GenImages gi{target.metric.group(), std::vector<Elem>(static_cast<std::size_t>(cosets.rank), 0)};
  if (cosets.radius == 0) return gi;
  for (int i = 1; i <= cosets.rank; ++i) {
    auto it = std::find(cosets.words.begin(), cosets.words.end(), generator(cosets.rank, i));
    gi.images[static_cast<std::size_t>(i - 1)] =
        target.map[cosets.label_of[static_cast<std::size_t>(it - cosets.words.begin())]];
  }
  return gi;
}

std::vector<WordBoundCheck> word_error_bound(const AlmostHom& ah, const CosetBall& cosets) {
  const auto& target = normed(ah, cosets);
  auto gi = extend_generators(ah, cosets);
  auto eps = defect(ah);
  std::vector<WordBoundCheck> out;
  for (std::size_t k = 0; k < cosets.words.size(); ++k) {
    const auto& w = cosets.words[k];
    WordBoundCheck check{w, induced_metric(target.metric, evaluate(w, gi), target.map[cosets.label_of[k]]),
                         NormValue(0), false};
    if (!w.is_identity()) check.bound = NormValue(2 * static_cast<std::int64_t>(w.length()) - 1) * eps;
    check.holds = check.error <= check.bound;
    out.push_back(std::move(check));
  }
  return out;
}

SeparationCertificate ahom_to_separating(const AlmostHom& ah, const CosetBall& cosets, const NOracle& oracle) {
  const auto& metric = normed(ah, cosets).metric;

  SeparationCertificate cert;
  cert.radius = cosets.radius;
  cert.hom = extend_generators(ah, cosets);
  cert.defect = defect(ah);
  if (cosets.radius == 0) {
    cert.vacuous = true;
    cert.verified = true;
    return cert;
  }
  cert.margin = margin(ah);
  const NormValue two_r(2 * static_cast<std::int64_t>(cosets.radius));
  cert.eps_bound = two_r * cert.defect;
  cert.delta_bound = cert.margin - cert.eps_bound;
  if (!(cert.eps_bound < cert.margin))
    throw PreconditionFailed("separation gap closed: margin " + cert.margin.str() + " <= 2r * defect " +
                             cert.eps_bound.str());

  cert.checks = word_error_bound(ah, cosets);
  bool ok = true;
  const NormValue inner_bound = NormValue(2 * static_cast<std::int64_t>(cosets.radius) - 1) * cert.defect;
  for (const auto& check : cert.checks) {
    ok = ok && check.holds;
    const auto& dist = metric(evaluate(check.word, cert.hom));
    if (oracle.contains(check.word)) {
      cert.max_in_n = max(cert.max_in_n, dist);
    } else {
      cert.min_outside_n = cert.min_outside_n ? min(*cert.min_outside_n, dist) : dist;
    }
  }
  ok = ok && cert.max_in_n <= inner_bound;
  if (cert.min_outside_n) ok = ok && *cert.min_outside_n >= cert.margin - inner_bound;
  cert.verified = ok;
  return cert;
}

AlmostHom separating_to_ahom(const GenImages& gi, const Norm& norm, const NOracle& oracle, int radius,
                             const NormValue& eps, const NormValue& alpha) {
  if (gi.group != norm.group()) throw MalformedInput("generator images and norm live on different groups");
  if (gi.rank() != oracle.rank()) throw MalformedInput("generator images and oracle differ in rank");
  auto verdict = check_separation(gi, norm, oracle, 3 * radius, eps, alpha);
  if (!verdict.pass()) {
    const auto& v = verdict.violations.front();
    throw PreconditionFailed("homomorphism does not (" + std::to_string(3 * radius) + ", " + eps.str() + ", " +
                             alpha.str() + ")-separate N: word " + to_string(v.word) + (v.in_n ? " in N" : " outside N") +
                             " at distance " + v.distance.str());
  }
  auto cosets = coset_ball(oracle, radius);
  std::vector<Elem> map;
  for (const auto& rep : cosets.reps) map.push_back(evaluate(rep, gi));
  return AlmostHom(std::move(cosets.domain), norm, std::move(map));
}

std::string ahom_report(const AlmostHom& ah, const NormValue& eps, const NormValue& alpha) {
  auto v = is_ahom(ah, eps, alpha);
  std::ostringstream out;
  out << "|Phi|: " << ah.domain().size() << '\n';
  out << "target: " << ah.target_label() << '\n';
  out << "products recorded: " << ah.domain().products.size() << '\n';
  out << "defect: " << v.defect.str() << '\n';
  out << "margin: " << (v.margin ? v.margin->str() : std::string("undefined")) << '\n';
  out << "identity to identity: " << (v.identity_ok ? "yes" : "no") << '\n';
  out << "verdict (eps=" << eps.str() << ", alpha=" << alpha.str() << "): "
      << (v.is_ahom ? "almost-homomorphism" : "not an almost-homomorphism") << '\n';
  return out.str();
}

}  // namespace sofic
