#include "sofic/metrics.hpp"

#include <cmath>
#include <sstream>

#include "sofic/error.hpp"

namespace sofic {

Norm::Norm(GroupPtr group, std::vector<NormValue> values, std::string label, NormKind kind)
    : group_(std::move(group)), values_(std::move(values)), label_(std::move(label)), kind_(kind) {
  if (values_.size() != group_->order())
    throw MalformedInput("norm has " + std::to_string(values_.size()) + " values for a group of order " +
                         std::to_string(group_->order()));
}

Norm Norm::from_classes(const ClassPartition& classes, const std::vector<NormValue>& per_class, std::string label,
                        NormKind kind) {
  if (per_class.size() != classes.size())
    throw MalformedInput("expected " + std::to_string(classes.size()) + " class values, got " +
                         std::to_string(per_class.size()));
  std::vector<NormValue> values(classes.group()->order());
  for (Elem g = 0; g < values.size(); ++g) values[g] = per_class[classes.class_of(g)];
  return Norm(classes.group(), std::move(values), std::move(label), kind);
}

Norm Norm::scaled(const NormValue& factor, std::string label) const {
  std::vector<NormValue> values;
  values.reserve(values_.size());
  for (const auto& v : values_) values.push_back(factor * v);
  return Norm(group_, std::move(values), std::move(label), kind_);
}

Rational hamming_norm(const Perm& f) {
  return Rational(static_cast<std::int64_t>(f.moved_points()), static_cast<std::int64_t>(f.degree()));
}

Rational hamming_distance(const Perm& f, const Perm& g) {
  if (f.degree() != g.degree()) throw MalformedInput("hamming_distance: degree mismatch");
  std::int64_t differ = 0;
  for (std::size_t a = 0; a < f.degree(); ++a) differ += f[a] != g[a];
  return Rational(differ, static_cast<std::int64_t>(f.degree()));
}

Norm hamming(const GroupPtr& group) {
  if (!group->has_perms()) throw PreconditionFailed("Hamming norm needs a permutation group, got " + group->label());
  std::vector<NormValue> values;
  values.reserve(group->order());
  for (Elem g = 0; g < group->order(); ++g) values.emplace_back(hamming_norm(group->perm(g)));
  return Norm(group, std::move(values), "hamming", NormKind::Hamming);
}

void CharacterData::validate() const {
  if (chi.size() != classes.size())
    throw InvalidCharacter("character has " + std::to_string(chi.size()) + " values for " +
                           std::to_string(classes.size()) + " classes");
  const auto& e = chi[0];
  if (std::fabs(e.imag()) > kTolerance || e.real() <= kTolerance)
    throw InvalidCharacter("chi(e) must be real and positive");
  for (ClassId c = 0; c < chi.size(); ++c) {
    double radicand = 2 * e.real() - 2 * chi[c].real();
    if (radicand < -kTolerance)
      throw InvalidCharacter("negative radicand " + format_real(radicand) + " at class " + classes.label(c));
  }
}

NormValue character_norm(const CharacterData& cd, Elem g) {
  const double e = cd.chi[0].real();
  const auto& x = cd.chi[cd.classes.class_of(g)];
  double radicand = (2 * e - (x + std::conj(x)).real()) / e;
  if (radicand < -kTolerance)
    throw InvalidCharacter("negative radicand " + format_real(radicand) + " at element " +
                           cd.classes.group()->element_name(g));
  return NormValue::real(std::sqrt(std::max(0.0, radicand)));
}

Norm character_norm(const CharacterData& cd) {
  cd.validate();
  std::vector<NormValue> per_class;
  for (ClassId c = 0; c < cd.classes.size(); ++c) per_class.push_back(character_norm(cd, cd.classes.rep(c)));
  return Norm::from_classes(cd.classes, per_class, "character", NormKind::Character);
}

CharacterData fixed_point_character(const ClassPartition& classes) {
  const auto& g = *classes.group();
  if (!g.has_perms()) throw PreconditionFailed("fixed-point character needs a permutation group");
  CharacterData cd{classes, {}};
  for (ClassId c = 0; c < classes.size(); ++c)
    cd.chi.emplace_back(static_cast<double>(g.perm(classes.rep(c)).fixed_points()), 0.0);
  return cd;
}

CharacterData read_character(std::istream& in, const ClassPartition& classes) {
  std::string line;
  auto next_line = [&](std::size_t& lineno) {
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  std::size_t lineno = 0;
  if (!next_line(lineno)) throw MalformedInput("character file: missing header");
  std::istringstream header(line);
  std::string tag, label;
  std::size_t count = 0;
  if (!(header >> tag >> label >> count) || tag != "char")
    throw MalformedInput("character file line " + std::to_string(lineno) + ": expected 'char <group-label> <#classes>'");
  if (label != classes.group()->label())
    throw MalformedInput("character file is for group '" + label + "', not '" + classes.group()->label() + "'");
  if (count != classes.size())
    throw MalformedInput("character file lists " + std::to_string(count) + " classes, group has " +
                         std::to_string(classes.size()));
  CharacterData cd{classes, {}};
  for (std::size_t c = 0; c < count; ++c) {
    if (!next_line(lineno)) throw MalformedInput("character file: expected " + std::to_string(count) + " value lines");
    std::istringstream row(line);
    double re = 0, im = 0;
    if (!(row >> re >> im))
      throw MalformedInput("character file line " + std::to_string(lineno) + ": expected '<re> <im>'");
    cd.chi.emplace_back(re, im);
  }
  cd.validate();
  return cd;
}

void write_character(std::ostream& out, const CharacterData& cd) {
  out << "char " << cd.classes.group()->label() << ' ' << cd.chi.size() << '\n';
  for (const auto& v : cd.chi) out << format_real(v.real()) << ' ' << format_real(v.imag()) << '\n';
}

bool AxiomReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

AxiomReport verify_norm_axioms(const Norm& norm) {
  const auto& g = *norm.group();
  const auto n = static_cast<Elem>(g.order());
  auto name = [&](Elem a) { return g.element_name(a) + " [" + norm(a).str() + "]"; };
  AxiomReport report;
  for (const char* title : {"nonnegative", "identity has norm 0", "inverse symmetric", "conjugation invariant",
                           "triangle inequality"})
    report.checks.push_back(AxiomCheck{static_cast<int>(report.checks.size()) + 1, title, true, ""});
  auto fail = [&](int property, std::string witness) {
    auto& c = report.checks[static_cast<std::size_t>(property - 1)];
    if (c.pass) {
      c.pass = false;
      c.witness = std::move(witness);
    }
  };
  for (Elem a = 0; a < n; ++a)
    if (norm(a) < NormValue(0)) fail(1, name(a));
  if (norm(0) != NormValue(0)) fail(2, name(0));
  for (Elem a = 0; a < n; ++a)
    if (norm(g.inv(a)) != norm(a)) fail(3, "g = " + name(a) + ", g^-1 = " + name(g.inv(a)));
  for (Elem a = 0; a < n && report.checks[3].pass; ++a)
    for (Elem h = 0; h < n; ++h)
      if (norm(g.conj(a, h)) != norm(a)) {
        fail(4, "g = " + name(a) + ", h = " + g.element_name(h) + ", h^-1 g h = " + name(g.conj(a, h)));
        break;
      }
  for (Elem a = 0; a < n && report.checks[4].pass; ++a)
    for (Elem b = 0; b < n; ++b)
      if (norm(a) + norm(b) < norm(g.mul(a, b))) {
        fail(5, "g = " + name(a) + ", h = " + name(b) + ", gh = " + name(g.mul(a, b)));
        break;
      }
  return report;
}

Subgroup norm_kernel(const Norm& norm) {
  const auto& g = *norm.group();
  const auto n = static_cast<Elem>(g.order());
  std::vector<Elem> zeros;
  std::vector<bool> is_zero(n, false);
  for (Elem a = 0; a < n; ++a)
    if (norm(a) == NormValue(0)) {
      zeros.push_back(a);
      is_zero[a] = true;
    }
  auto refuse = [&](const std::string& why) {
    throw PreconditionFailed("norm '" + norm.label() + "' is not a valid semimetric norm: " + why);
  };
  if (!is_zero[0]) refuse("identity has nonzero norm");
  for (auto a : zeros) {
    if (!is_zero[g.inv(a)]) refuse("zero set not closed under inverse at " + g.element_name(a));
    for (auto b : zeros)
      if (!is_zero[g.mul(a, b)])
        refuse("zero set not closed under product at " + g.element_name(a) + " * " + g.element_name(b));
    for (Elem h = 0; h < n; ++h)
      if (!is_zero[g.conj(a, h)])
        refuse("zero set not normal: " + g.element_name(a) + " conjugated by " + g.element_name(h));
  }
  return image_subgroup(norm.group(), zeros, GroupLimits{n, GroupLimits{}.table_order_cap},
                        "ker(" + norm.label() + ")");
}

NormValue induced_metric(const Norm& norm, Elem a, Elem b) {
  const auto& g = *norm.group();
  return norm(g.mul(a, g.inv(b)));
}

}  // namespace sofic
