#pragma once

#include <optional>
#include <string>

#include "tgr/term.hpp"

namespace tgr {

/// Most general unifier of two finite total terms, with occurs-check. The
/// result is idempotent: no bound variable occurs in any binding.
std::optional<Substitution> unify(const Term& a, const Term& b);

/// Appends `suffix` to every variable name.
Term rename_variables(const Term& t, const std::string& suffix);

}  // namespace tgr
