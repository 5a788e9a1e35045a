#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "chaininf/network.hpp"

namespace chaininf {

/// Parse the discrete subset of the BIF interchange format:
///   network NAME { ... }
///   variable X { type discrete [ n ] { l1, ..., ln }; property ...; }
///   probability ( X ) { table p1, ..., pn; }
///   probability ( X | P1, ..., Pk ) { (a1, ..., ak) p1, ..., pn; ... }
/// Conditional rows are keyed by their parent labels; every combination must
/// appear exactly once. `//` and `/* */` comments and `property` lines are
/// skipped. Errors carry the offending line.
BayesNet parse_bif(std::string_view text);

BayesNet read_bif(const std::filesystem::path& path);

/// Inverse of parse_bif on the supported subset; probabilities are written in
/// shortest round-trip form.
std::string write_bif(const BayesNet& net);

}  // namespace chaininf
