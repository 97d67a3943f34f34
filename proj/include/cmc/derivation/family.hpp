#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cmc/dsl/model.hpp"

namespace cmc::derivation {

enum class Family {
  Gaussian,
  InverseGaussian,
  Gamma,
  Poisson,
  NegativeBinomial,
  Binomial,
  Multinomial,
};

enum class Link {
  Identity,
  Log,
  Inverse,
  InverseSquared,
  Sqrt,
  Logit,
  Probit,
  Cauchit,
  CLogLog,
};

struct FamilyLink {
  Family family = Family::Gaussian;
  Link link = Link::Identity;

  auto operator<=>(const FamilyLink&) const = default;
};

// Wire names: "gaussian", "inverse_gaussian", ...; "identity", "inverse_squared", ...
std::string_view family_name(Family f);
std::string_view link_name(Link l);
std::optional<Family> parse_family(std::string_view name);
std::optional<Link> parse_link(std::string_view name);
std::string to_string(const FamilyLink& fl);  // "gaussian/identity"

// Families considered for a dependent variable of the given kind.
const std::vector<Family>& families_for(dsl::MeasureKind kind);
// Links supported per family, canonical link first.
const std::vector<Link>& links_for(Family f);

// Every (family, link) pair for the DV type, families in table order and the
// canonical link of each family first. The first element is the default.
std::vector<FamilyLink> candidate_family_links(const dsl::MeasureType& dv_type);

}  // namespace cmc::derivation
