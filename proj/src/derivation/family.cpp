#include "cmc/derivation/family.hpp"

#include <array>
#include <utility>

namespace cmc::derivation {

namespace {

constexpr std::array<std::pair<Family, std::string_view>, 7> kFamilyNames = {{
    {Family::Gaussian, "gaussian"},
    {Family::InverseGaussian, "inverse_gaussian"},
    {Family::Gamma, "gamma"},
    {Family::Poisson, "poisson"},
    {Family::NegativeBinomial, "negative_binomial"},
    {Family::Binomial, "binomial"},
    {Family::Multinomial, "multinomial"},
}};

constexpr std::array<std::pair<Link, std::string_view>, 9> kLinkNames = {{
    {Link::Identity, "identity"},
    {Link::Log, "log"},
    {Link::Inverse, "inverse"},
    {Link::InverseSquared, "inverse_squared"},
    {Link::Sqrt, "sqrt"},
    {Link::Logit, "logit"},
    {Link::Probit, "probit"},
    {Link::Cauchit, "cauchit"},
    {Link::CLogLog, "cloglog"},
}};

}  // namespace

std::string_view family_name(Family f) {
  for (auto [fam, name] : kFamilyNames) {
    if (fam == f) return name;
  }
  return "gaussian";
}

std::string_view link_name(Link l) {
  for (auto [link, name] : kLinkNames) {
    if (link == l) return name;
  }
  return "identity";
}

std::optional<Family> parse_family(std::string_view name) {
  for (auto [fam, n] : kFamilyNames) {
    if (n == name) return fam;
  }
  return std::nullopt;
}

std::optional<Link> parse_link(std::string_view name) {
  for (auto [link, n] : kLinkNames) {
    if (n == name) return link;
  }
  return std::nullopt;
}

std::string to_string(const FamilyLink& fl) {
  return std::string(family_name(fl.family)) + "/" + std::string(link_name(fl.link));
}

const std::vector<Family>& families_for(dsl::MeasureKind kind) {
  static const std::vector<Family> continuous = {Family::Gaussian,
                                                 Family::InverseGaussian, Family::Gamma};
  static const std::vector<Family> counts = {Family::Poisson, Family::NegativeBinomial};
  static const std::vector<Family> ordered = {Family::Binomial, Family::Multinomial,
                                              Family::Gaussian, Family::InverseGaussian,
                                              Family::Gamma};
  static const std::vector<Family> unordered = {Family::Binomial, Family::Multinomial};
  switch (kind) {
    case dsl::MeasureKind::Continuous: return continuous;
    case dsl::MeasureKind::Counts: return counts;
    case dsl::MeasureKind::OrderedCategories: return ordered;
    case dsl::MeasureKind::UnorderedCategories: return unordered;
  }
  return continuous;
}

const std::vector<Link>& links_for(Family f) {
  static const std::vector<Link> gaussian = {Link::Identity, Link::Log, Link::Inverse};
  static const std::vector<Link> inverse_gaussian = {Link::InverseSquared, Link::Inverse,
                                                     Link::Identity, Link::Log};
  static const std::vector<Link> gamma = {Link::Inverse, Link::Identity, Link::Log};
  static const std::vector<Link> count = {Link::Log, Link::Identity, Link::Sqrt};
  static const std::vector<Link> binomial = {Link::Logit, Link::Probit, Link::Cauchit,
                                             Link::Log, Link::CLogLog};
  static const std::vector<Link> multinomial = {Link::Logit};
  switch (f) {
    case Family::Gaussian: return gaussian;
    case Family::InverseGaussian: return inverse_gaussian;
    case Family::Gamma: return gamma;
    case Family::Poisson:
    case Family::NegativeBinomial: return count;
    case Family::Binomial: return binomial;
    case Family::Multinomial: return multinomial;
  }
  return gaussian;
}

std::vector<FamilyLink> candidate_family_links(const dsl::MeasureType& dv_type) {
  std::vector<FamilyLink> out;
  for (Family f : families_for(dv_type.kind)) {
    for (Link l : links_for(f)) out.push_back({f, l});
  }
  return out;
}

}  // namespace cmc::derivation
