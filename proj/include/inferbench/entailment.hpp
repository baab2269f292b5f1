#pragma once

#include <span>

#include "inferbench/rule.hpp"

namespace inferbench {

/// Whether every KG closed under `ruleset` is also closed under `r`.
///
/// Decided by freezing the body of `r` once per way of identifying its
/// variables: each partition of the variables into blocks, with every block
/// mapped either to its own fresh constant or to a distinct constant that
/// some inequality of `ruleset` mentions. Identifications that violate an
/// inequality of `r` are skipped. `ruleset` is materialised over each frozen
/// body and must derive the frozen head every time. When `ruleset` has no
/// inequalities, the single all-distinct freezing suffices.
bool entails(std::span<const Rule> ruleset, const Rule& r);

}  // namespace inferbench
