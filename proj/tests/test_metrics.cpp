#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "sofic/error.hpp"
#include "sofic/metrics.hpp"
#include "support.hpp"

using namespace sofic;
using sofic::testing::elem;

namespace {

Rational r(std::int64_t p, std::int64_t q = 1) { return Rational(p, q); }

// Parity by counting inversions.
bool is_even(const Perm& p) {
  std::size_t inversions = 0;
  for (std::size_t i = 0; i < p.degree(); ++i)
    for (std::size_t j = i + 1; j < p.degree(); ++j) inversions += p[i] > p[j];
  return inversions % 2 == 0;
}

const AxiomCheck& check(const AxiomReport& rep, int property) { return rep.checks.at(property - 1); }

}  // namespace

TEST_CASE("hamming_norm examples") {
  CHECK(hamming_norm(Perm(5)) == r(0));
  CHECK(hamming_norm(parse_perm("(1 2)", 5)) == r(2, 5));
  CHECK(hamming_norm(parse_perm("(1 2 3 4 5)", 5)) == r(1));
  auto s6 = symmetric_group(6);
  for (Elem g = 0; g < s6->order(); ++g) CHECK(hamming_norm(s6->perm(g).inverse()) == hamming_norm(s6->perm(g)));
}

TEST_CASE("Hamming values per S5 class") {
  ClassPartition p(symmetric_group(5));
  auto h = hamming(p.group());
  std::vector<Rational> expected{r(0), r(2, 5), r(3, 5), r(4, 5), r(4, 5), r(1), r(1)};
  for (ClassId c = 0; c < p.size(); ++c) {
    // Moved points are the sum of the nontrivial cycle lengths.
    std::size_t moved = 0;
    for (auto l : p.group()->perm(p.rep(c)).cycle_type()) moved += l;
    CHECK(h(p.rep(c)) == NormValue(r(static_cast<std::int64_t>(moved), 5)));
    CHECK(h(p.rep(c)) == NormValue(expected[c]));
  }
}

TEST_CASE("character norm examples") {
  ClassPartition p(symmetric_group(5));
  auto cd = fixed_point_character(p);
  CHECK(character_norm(cd, 0) == NormValue(0));
  auto t = elem(p.group(), "(1 2)");
  CHECK(std::fabs(character_norm(cd, t).to_double() - std::sqrt(4.0 / 5.0)) < 1e-12);
  auto h = hamming(p.group());
  for (Elem g = 0; g < 120; ++g)
    CHECK(std::fabs(character_norm(cd, g).to_double() - std::sqrt(2 * h(g).to_double())) < 1e-12);
}

TEST_CASE("bundled fixed-point characters agree with the computed ones") {
  for (int n = 3; n <= 5; ++n) {
    ClassPartition p(symmetric_group(n));
    std::ifstream in(data_dir() / "characters" / ("S" + std::to_string(n) + "_fixed_points.char"));
    REQUIRE(in);
    auto cd = read_character(in, p);
    auto computed = fixed_point_character(p);
    REQUIRE(cd.chi.size() == computed.chi.size());
    for (std::size_t c = 0; c < cd.chi.size(); ++c) CHECK(cd.chi[c] == computed.chi[c]);
    std::ostringstream out;
    write_character(out, computed);
    std::istringstream back(out.str());
    CHECK(read_character(back, p).chi == computed.chi);
  }
}

TEST_CASE("invalid characters are rejected") {
  ClassPartition p(symmetric_group(3));
  CharacterData bad{p, {{3, 0}, {5, 0}, {0, 0}}};
  CHECK_THROWS_AS(bad.validate(), InvalidCharacter);
  CharacterData zero_degree{p, {{0, 0}, {0, 0}, {0, 0}}};
  CHECK_THROWS_AS(zero_degree.validate(), InvalidCharacter);
  std::istringstream wrong_count("char S3 2\n3 0\n1 0\n");
  CHECK_THROWS_AS(read_character(wrong_count, p), MalformedInput);
  std::istringstream wrong_group("char S4 3\n3 0\n1 0\n0 0\n");
  CHECK_THROWS_AS(read_character(wrong_group, p), MalformedInput);
  std::istringstream garbage("char S3 3\n3 0\nfoo\n0 0\n");
  CHECK_THROWS_AS(read_character(garbage, p), MalformedInput);
}

TEST_CASE("sign character gives a seminorm with kernel A3") {
  ClassPartition p(symmetric_group(3));
  CharacterData sign{p, {}};
  for (ClassId c = 0; c < p.size(); ++c) sign.chi.emplace_back(is_even(p.group()->perm(p.rep(c))) ? 1.0 : -1.0, 0.0);
  auto norm = character_norm(sign);
  CHECK(verify_norm_axioms(norm).all_pass());
  CHECK(norm_kernel(norm).group->order() == 3);
}

TEST_CASE("verify_norm_axioms examples") {
  auto s4 = symmetric_group(4);
  auto rep = verify_norm_axioms(hamming(s4));
  CHECK(rep.checks.size() == 5);
  CHECK(rep.all_pass());

  for (const auto& g : {symmetric_group(3), testing::bundled("Q8")}) {
    Norm zero(g, std::vector<NormValue>(g->order(), NormValue(0)), "zero");
    CHECK(verify_norm_axioms(zero).all_pass());
  }

  auto s3 = symmetric_group(3);
  auto h3 = hamming(s3);
  auto values = std::vector<NormValue>(h3.values().begin(), h3.values().end());
  values[elem(s3, "(1 2)")] = NormValue(10);
  auto corrupted = verify_norm_axioms(Norm(s3, values, "corrupted"));
  CHECK_FALSE(corrupted.all_pass());
  CHECK_FALSE(check(corrupted, 4).pass);
  CHECK(check(corrupted, 4).witness.find("(1,2)") != std::string::npos);
  CHECK(check(corrupted, 1).pass);
  CHECK(check(corrupted, 2).pass);

  values = std::vector<NormValue>(s3->order(), NormValue(1));
  values[0] = NormValue(0);
  values[elem(s3, "(1 2 3)")] = NormValue(r(1, 2));
  auto asym = verify_norm_axioms(Norm(s3, values, "asymmetric"));
  CHECK_FALSE(check(asym, 3).pass);

  values = std::vector<NormValue>(s3->order(), NormValue(1));
  values[0] = NormValue(0);
  for (const char* t : {"(1 2)", "(1 3)", "(2 3)"}) values[elem(s3, t)] = NormValue(r(1, 10));
  auto tri = verify_norm_axioms(Norm(s3, values, "short transpositions"));
  CHECK(check(tri, 4).pass);
  CHECK_FALSE(check(tri, 5).pass);

  values = std::vector<NormValue>(s3->order(), NormValue(0));
  values[0] = NormValue(1);
  CHECK_FALSE(check(verify_norm_axioms(Norm(s3, values, "bad identity")), 2).pass);
  values[0] = NormValue(-1);
  CHECK_FALSE(check(verify_norm_axioms(Norm(s3, values, "negative")), 1).pass);
}

TEST_CASE("norm_kernel examples") {
  auto s5 = symmetric_group(5);
  CHECK(norm_kernel(hamming(s5)).group->order() == 1);
  auto s3 = symmetric_group(3);
  Norm zero(s3, std::vector<NormValue>(6, NormValue(0)), "zero");
  CHECK(norm_kernel(zero).group->order() == 6);

  // Pullback of Hamming on S2 along the sign map.
  auto s2 = symmetric_group(2);
  std::vector<NormValue> values;
  for (Elem g = 0; g < 6; ++g) values.emplace_back(hamming_norm(s2->perm(is_even(s3->perm(g)) ? 0 : 1)));
  Norm pullback(s3, values, "sign pullback");
  CHECK(verify_norm_axioms(pullback).all_pass());
  auto ker = norm_kernel(pullback);
  CHECK(ker.group->order() == 3);
  for (auto g : ker.inclusion) {
    CHECK(is_even(s3->perm(g)));
    for (Elem h = 0; h < 6; ++h) CHECK(std::count(ker.inclusion.begin(), ker.inclusion.end(), s3->conj(g, h)) == 1);
  }

  std::vector<NormValue> broken(6, NormValue(1));
  broken[0] = NormValue(0);
  broken[elem(s3, "(1 2)")] = NormValue(0);
  CHECK_THROWS_AS(norm_kernel(Norm(s3, broken, "broken")), PreconditionFailed);
}

TEST_CASE("norm_kernel is normal for every graph-type norm on S4") {
  auto s4 = symmetric_group(4);
  ClassPartition p(s4);
  // Kernels of seminorms vanishing exactly on a normal subgroup.
  for (const auto& zero_classes : std::vector<std::set<ClassId>>{{0}, {0, 3}, {0, 2, 3}}) {
    std::vector<NormValue> values;
    for (Elem g = 0; g < s4->order(); ++g) values.emplace_back(zero_classes.count(p.class_of(g)) ? 0 : 1);
    auto ker = norm_kernel(Norm(s4, values, "k"));
    std::set<Elem> members(ker.inclusion.begin(), ker.inclusion.end());
    for (auto a : members) {
      for (auto b : members) CHECK(members.count(s4->mul(a, b)));
      for (Elem h = 0; h < s4->order(); ++h) CHECK(members.count(s4->conj(a, h)));
    }
  }
}

TEST_CASE("induced metric") {
  auto s5 = symmetric_group(5);
  auto h = hamming(s5);
  for (Elem g = 0; g < 120; ++g) CHECK(induced_metric(h, g, g) == NormValue(0));
  CHECK(induced_metric(h, 0, elem(s5, "(1 2)")) == NormValue(r(2, 5)));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    Elem a = rng() % 120, b = rng() % 120, c = rng() % 120;
    auto d = induced_metric(h, a, b);
    REQUIRE(d.is_exact());
    CHECK(induced_metric(h, s5->mul(c, a), s5->mul(c, b)).exact() == d.exact());
    CHECK(induced_metric(h, s5->mul(a, c), s5->mul(b, c)).exact() == d.exact());
    CHECK(induced_metric(h, b, a).exact() == d.exact());
  }
  auto s6 = symmetric_group(6);
  auto h6 = hamming(s6);
  for (int i = 0; i < 200; ++i) {
    Elem a = rng() % 720, b = rng() % 720;
    std::int64_t differ = 0;
    for (std::size_t x = 0; x < 6; ++x) differ += s6->perm(a)[x] != s6->perm(b)[x];
    CHECK(induced_metric(h6, a, b).exact() == r(differ, 6));
    CHECK(hamming_distance(s6->perm(a), s6->perm(b)) == r(differ, 6));
  }
}

TEST_CASE("NormValue arithmetic and comparisons") {
  NormValue a(r(1, 3)), b(r(2, 3));
  CHECK((a + b).is_exact());
  CHECK((a + b) == NormValue(1));
  CHECK(a < b);
  CHECK((a * b).exact() == r(2, 9));
  CHECK(NormValue::real(1.0 / 3.0) == a);
  CHECK(NormValue::real(0.3333) < a);
  CHECK_FALSE((a + NormValue::real(0)).is_exact());
  CHECK(max(a, b) == b);
  CHECK(min(a, b) == a);
  CHECK(a.str() == "1/3");
  CHECK(NormValue(2).str() == "2");
  CHECK(NormValue::real(std::sqrt(0.8)).str() == "0.894427191");
  CHECK(parse_rational("0.9") == r(9, 10));
  CHECK(parse_rational("-3/6") == r(-1, 2));
  CHECK(parse_rational("7") == r(7));
  CHECK_THROWS_AS(parse_rational("1/0"), MalformedInput);
  CHECK_THROWS_AS(parse_rational("abc"), MalformedInput);
  CHECK(format_real(std::sqrt(2.0)) == "1.41421356237");
}
