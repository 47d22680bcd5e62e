#include <doctest.h>

#include <random>

#include "sofic/almosthom.hpp"
#include "sofic/error.hpp"
#include "sofic/separability.hpp"
#include "support.hpp"

using namespace sofic;
using sofic::testing::elem;

namespace {

Rational r(std::int64_t p, std::int64_t q = 1) { return Rational(p, q); }

AlmostHom identity_embedding(const GroupPtr& g) {
  std::vector<Elem> map(g->order());
  for (Elem a = 0; a < g->order(); ++a) map[a] = a;
  return AlmostHom(full_table(*g), hamming(g), map);
}

// Oracle: max Hamming error over the full table, computed on permutations.
Rational table_defect(const FiniteGroup& g, const std::vector<Perm>& phi) {
  Rational worst(0);
  for (Elem a = 0; a < g.order(); ++a)
    for (Elem b = 0; b < g.order(); ++b) worst = std::max(worst, hamming_distance(phi[a] * phi[b], phi[g.mul(a, b)]));
  return worst;
}

NOracle s3_oracle() {
  auto s3 = symmetric_group(3);
  return NOracle(GenImages{s3, {elem(s3, "(1 2)"), elem(s3, "(1 2 3)")}});
}

// Random almost-homomorphism into S4: the identity embedding with a few
// non-identity images replaced.
AlmostHom corrupted_s4(std::mt19937_64& rng) {
  auto s4 = symmetric_group(4);
  std::vector<Perm> map;
  for (Elem a = 0; a < 24; ++a) map.push_back(s4->perm(a));
  auto hits = 1 + rng() % 3;
  for (std::size_t i = 0; i < hits; ++i) map[1 + rng() % 23] = testing::random_perm(rng, 4);
  return AlmostHom(full_table(*s4), 4, map);
}

}  // namespace

TEST_CASE("PartialMulSet validation") {
  PartialMulSet s{{"e", "a"}, {{{0, 1}, 1}, {{1, 1}, 0}}, 0};
  CHECK_NOTHROW(s.validate());
  s.products[{0, 1}] = 0;
  CHECK_THROWS_AS(s.validate(), MalformedInput);
  PartialMulSet out_of_range{{"e"}, {{{0, 3}, 0}}, 0};
  CHECK_THROWS_AS(out_of_range.validate(), MalformedInput);
  CHECK_THROWS_AS(AlmostHom(PartialMulSet{{"e"}, {}, 0}, hamming(symmetric_group(3)), {0, 1}), MalformedInput);
}

TEST_CASE("defect examples") {
  auto s3 = symmetric_group(3);
  CHECK(defect(identity_embedding(s3)) == NormValue(0));

  std::vector<Perm> phi;
  for (Elem a = 0; a < 6; ++a) phi.push_back(s3->perm(a));
  phi[elem(s3, "(1 2)")] = parse_perm("(1 3)", 3);
  AlmostHom corrupted(full_table(*s3), 3, phi);
  CHECK(defect(corrupted) == NormValue(table_defect(*s3, phi)));
  CHECK(defect(corrupted) == NormValue(1));

  PartialMulSet bare{{"e", "a", "b"}, {}, 0};
  AlmostHom empty(bare, hamming(s3), {0, 3, 4});
  CHECK(defect(empty) == NormValue(0));

  auto v = is_ahom(corrupted, NormValue(r(3, 2)), NormValue(r(1, 2)));
  CHECK(v.is_ahom);
  CHECK(v.margin == NormValue(r(2, 3)));
  CHECK_FALSE(is_ahom(corrupted, NormValue(1), NormValue(r(1, 2))).is_ahom);
}

TEST_CASE("margin examples") {
  CHECK(margin(identity_embedding(symmetric_group(3))) == NormValue(r(2, 3)));
  CHECK(margin(identity_embedding(symmetric_group(5))) == NormValue(r(2, 5)));
  auto s3 = symmetric_group(3);
  AlmostHom collapsed(full_table(*s3), hamming(s3), {0, 0, 2, 3, 4, 5});
  CHECK(margin(collapsed) == NormValue(0));
  AlmostHom only_identity(PartialMulSet{{"e"}, {{{0, 0}, 0}}, 0}, hamming(s3), {0});
  CHECK_THROWS_AS(margin(only_identity), PreconditionFailed);
  CHECK_FALSE(is_ahom(only_identity, NormValue(1), NormValue(1)).margin.has_value());
}

TEST_CASE("is_ahom examples") {
  auto id5 = identity_embedding(symmetric_group(5));
  CHECK(is_ahom(id5, NormValue(r(1, 100)), NormValue(r(1, 3))).is_ahom);
  auto sofic_form = is_ahom(id5, NormValue(r(3, 10)), NormValue(r(7, 10)));
  CHECK_FALSE(sofic_form.is_ahom);
  CHECK(sofic_form.defect == NormValue(0));
  auto s3 = symmetric_group(3);
  AlmostHom moved_identity(full_table(*s3), hamming(s3), {1, 1, 2, 3, 4, 5});
  auto v = is_ahom(moved_identity, NormValue(2), NormValue(0));
  CHECK_FALSE(v.identity_ok);
  CHECK_FALSE(v.is_ahom);
  auto report = ahom_report(id5, NormValue(r(3, 10)), NormValue(r(7, 10)));
  CHECK(report.find("|Phi|: 120") != std::string::npos);
  CHECK(report.find("margin: 2/5") != std::string::npos);
  CHECK(report.find("not an almost-homomorphism") != std::string::npos);
}

TEST_CASE("amplification") {
  auto amp = amplify(identity_embedding(symmetric_group(4)));
  CHECK(defect(amp) == NormValue(0));
  CHECK(margin(amp) == NormValue(1 - (1 - r(2, 4)) * (1 - r(2, 4))));

  auto s4 = symmetric_group(4);
  PartialMulSet z2{{"e", "t"}, {{{0, 0}, 0}, {{0, 1}, 1}, {{1, 0}, 1}, {{1, 1}, 0}}, 0};
  AlmostHom half(z2, hamming(s4), {0, elem(s4, "(1 2)")});
  REQUIRE(margin(half) == NormValue(r(1, 2)));
  CHECK(margin(amplify(half)) >= NormValue(r(3, 4)));

  auto q8 = testing::bundled("Q8");
  std::vector<Elem> id(8);
  for (Elem a = 0; a < 8; ++a) id[a] = a;
  CHECK_THROWS_AS(amplify(AlmostHom(full_table(*q8), Norm(q8, std::vector<NormValue>(8, 1), "one"), id)),
                  PreconditionFailed);
}

TEST_CASE("amplification identity on random pairs") {
  std::mt19937_64 rng(2024);
  for (std::size_t n : {5, 6})
    for (int i = 0; i < 1000; ++i) {
      auto f = testing::random_perm(rng, n), g = testing::random_perm(rng, n);
      auto lhs = 1 - hamming_distance(square_embed(f, f), square_embed(g, g));
      auto rhs = (1 - hamming_distance(f, g)) * (1 - hamming_distance(f, g));
      REQUIRE(lhs == rhs);
    }
}

TEST_CASE("amplification bounds on corrupted maps into S4") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    auto ah = corrupted_s4(rng);
    auto eps = defect(ah).exact(), alpha = margin(ah).exact();
    auto amp = amplify(ah);
    CHECK(defect(amp).exact() <= 2 * eps - eps * eps);
    CHECK(margin(amp).exact() >= 2 * alpha - alpha * alpha);
  }
}

TEST_CASE("iterate_amplify") {
  auto s4 = symmetric_group(4);
  PartialMulSet z2{{"e", "t"}, {{{0, 0}, 0}, {{0, 1}, 1}, {{1, 0}, 1}, {{1, 1}, 0}}, 0};
  AlmostHom half(z2, hamming(s4), {0, elem(s4, "(1 2)")});
  auto res = iterate_amplify(half, r(9, 10));
  CHECK(res.steps == 2);
  CHECK(res.reached);
  REQUIRE(res.history.size() == 3);
  CHECK(res.history[1].margin == NormValue(r(3, 4)));
  CHECK(res.history[2].margin == NormValue(r(15, 16)));
  CHECK(res.history[2].degree == 256);
  for (const auto& step : res.history) CHECK(step.defect == NormValue(0));

  auto none = iterate_amplify(half, r(1, 2));
  CHECK(none.steps == 0);
  CHECK(none.reached);

  auto capped = iterate_amplify(half, r(999, 1000));
  CHECK_FALSE(capped.reached);
  CHECK(capped.steps == 2);
  CHECK(capped.history.back().margin == NormValue(r(15, 16)));

  CHECK_THROWS_AS(iterate_amplify(half, r(1)), PreconditionFailed);
}

TEST_CASE("coset ball over S3") {
  auto oracle = s3_oracle();
  auto cb = coset_ball(oracle, 1);
  CHECK(cb.words.size() == 5);
  REQUIRE(cb.reps.size() == 4);
  CHECK(cb.reps[0].is_identity());
  CHECK(cb.label_of[1] == cb.label_of[2]);
  CHECK(cb.domain.identity == std::size_t{0});
  for (std::size_t i = 0; i < cb.words.size(); ++i)
    for (std::size_t j = 0; j < cb.words.size(); ++j)
      CHECK((cb.label_of[i] == cb.label_of[j]) == oracle.same_coset(cb.words[i], cb.words[j]));
}

TEST_CASE("exact S3 quotient separates at radius 3") {
  auto oracle = s3_oracle();
  const auto& s3 = oracle.model().group;
  auto cb = coset_ball(oracle, 3);
  std::vector<Elem> map;
  for (const auto& w : cb.reps) map.push_back(oracle.image(w));
  AlmostHom ah(cb.domain, hamming(s3), map);
  auto cert = ahom_to_separating(ah, cb, oracle);
  CHECK(cert.defect == NormValue(0));
  CHECK(cert.verified);
  CHECK(cert.checks.size() == 53);
  CHECK(cert.max_in_n == NormValue(0));
  CHECK(cert.min_outside_n == NormValue(r(2, 3)));
  CHECK(cert.hom.images == oracle.model().images);
  auto h = hamming(s3);
  for (const auto& w : ball(2, 3)) {
    auto d = h(evaluate(w, cert.hom));
    if (oracle.contains(w))
      CHECK(d == NormValue(0));
    else
      CHECK(d >= NormValue(r(2, 3)));
  }

  auto zero = ahom_to_separating(AlmostHom(coset_ball(oracle, 0).domain, hamming(s3), {0}), coset_ball(oracle, 0),
                                 oracle);
  CHECK(zero.vacuous);
  CHECK(zero.verified);
}

TEST_CASE("corrupted certificate thresholds") {
  // S3 acting diagonally on four copies of three points, with a spare pair
  // (13 14) used to corrupt the image of y.
  auto oracle = s3_oracle();
  auto diag = [](const char* cycles) {
    auto p = parse_perm(cycles, 3);
    std::vector<std::uint32_t> img(14);
    for (std::uint32_t c = 0; c < 4; ++c)
      for (std::uint32_t i = 0; i < 3; ++i) img[3 * c + i] = 3 * c + p[i];
    img[12] = 12;
    img[13] = 13;
    return Perm(img);
  };
  auto spare = parse_perm("(13 14)", 14);
  auto target = perm_group(14, {diag("(1 2)"), diag("(1 2 3)"), spare});
  REQUIRE(target->order() == 12);
  auto h = hamming(target);
  auto build = [&](int radius) {
    auto cb = coset_ball(oracle, radius);
    std::vector<Elem> map;
    for (const auto& w : cb.reps) {
      auto img = diag(to_cycle_string(oracle.model().group->perm(oracle.image(w))).c_str());
      if (w == parse_word("y", 2)) img = img * spare;
      map.push_back(*target->find(img));
    }
    return std::pair{cb, AlmostHom(cb.domain, h, map)};
  };
  auto [cb1, ah1] = build(1);
  CHECK(defect(ah1) == NormValue(r(1, 7)));
  CHECK(margin(ah1) == NormValue(r(4, 7)));
  auto cert = ahom_to_separating(ah1, cb1, oracle);
  CHECK(cert.eps_bound == NormValue(r(2, 7)));
  CHECK(cert.delta_bound == NormValue(r(2, 7)));
  CHECK(cert.verified);
  for (const auto& c : cert.checks) CHECK(c.holds);

  auto [cb2, ah2] = build(2);
  CHECK(defect(ah2) == NormValue(r(1, 7)));
  CHECK_THROWS_AS(ahom_to_separating(ah2, cb2, oracle), PreconditionFailed);
  for (const auto& c : word_error_bound(ah2, cb2)) CHECK(c.holds);
}

TEST_CASE("word-error bound on corrupted maps over ball(2,3)") {
  auto s4 = symmetric_group(4);
  NOracle oracle(GenImages{s4, {elem(s4, "(1 2)"), elem(s4, "(1 2 3 4)")}});
  auto cb = coset_ball(oracle, 3);
  auto h = hamming(s4);
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Elem> map;
    for (const auto& w : cb.reps) map.push_back(oracle.image(w));
    for (std::size_t i = 0; i < 1 + rng() % 3; ++i) map[1 + rng() % (map.size() - 1)] = rng() % 24;
    AlmostHom ah(cb.domain, h, map);
    auto eps = defect(ah).exact();
    // phi~ from the generator labels, evaluated letter by letter.
    Elem gx = map[cb.label_of[1]], gy = map[cb.label_of[3]];
    for (std::size_t k = 0; k < cb.words.size(); ++k) {
      const auto& w = cb.words[k];
      Elem tilde = 0;
      for (auto l : w.letters()) {
        Elem g = std::abs(l) == 1 ? gx : gy;
        tilde = s4->mul(tilde, l > 0 ? g : s4->inv(g));
      }
      auto err = hamming_distance(s4->perm(tilde), s4->perm(map[cb.label_of[k]]));
      auto bound = w.is_identity() ? Rational(0) : (2 * static_cast<std::int64_t>(w.length()) - 1) * eps;
      REQUIRE(err <= bound);
    }
    auto checks = word_error_bound(ah, cb);
    CHECK(checks.size() == 53);
    for (const auto& c : checks) CHECK(c.holds);
  }
}

TEST_CASE("separating_to_ahom") {
  auto oracle = s3_oracle();
  const auto& s3 = oracle.model().group;
  auto h = hamming(s3);
  auto eps = NormValue(r(1, 10)), alpha = NormValue(r(1, 2));
  auto ah1 = separating_to_ahom(oracle.model(), h, oracle, 1, eps, alpha);
  CHECK(ah1.domain().size() == 4);
  CHECK(defect(ah1) == NormValue(0));
  CHECK(margin(ah1) == NormValue(r(2, 3)));
  CHECK(is_ahom(ah1, eps, alpha).is_ahom);

  auto ah2 = separating_to_ahom(oracle.model(), h, oracle, 2, eps, alpha);
  CHECK(defect(ah2) == NormValue(0));
  CHECK(margin(ah2) == NormValue(r(2, 3)));
  auto cb = coset_ball(oracle, 2);
  auto cert = ahom_to_separating(ah2, cb, oracle);
  CHECK(cert.verified);
  for (const auto& w : ball(2, 2)) CHECK(evaluate(w, cert.hom) == evaluate(w, oracle.model()));
  auto verdict = check_separation(cert.hom, h, oracle, 2, eps, alpha);
  CHECK(verdict.words_checked == 17);
  CHECK(verdict.pass());

  auto trivial = symmetric_group(1);
  NOracle everything(GenImages{trivial, {0, 0}});
  auto single = separating_to_ahom(everything.model(), hamming(trivial), everything, 2, eps, alpha);
  CHECK(single.domain().size() == 1);
  CHECK(is_ahom(single, eps, alpha).is_ahom);

  GenImages collapse{s3, {0, 0}};
  CHECK_THROWS_AS(separating_to_ahom(collapse, h, oracle, 1, eps, alpha), PreconditionFailed);
}
