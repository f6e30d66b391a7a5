#pragma once

#include "lexer.hpp"
#include "tgr/term.hpp"

namespace tgr::detail {

/// Parses one term literal starting at the lexer's current token.
Term parse_term(Lexer& lex, const Signature& sig);

}  // namespace tgr::detail
