#pragma once

#include "conman/dsl.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace conman::dsl::detail {

enum class TokType { Ident, String, Int, LBrace, RBrace, Colon, DashDash, At, Equals, End };

const char* describe(TokType t);

struct Token {
    TokType type = TokType::End;
    std::string text; // identifier name, decoded string, or digits
    SourceSpan span;
    long long value = 0;
};

/// Splits `text` into tokens. Lexical errors are appended to `diags`; the
/// offending bytes are skipped. The result always ends with an End token.
std::vector<Token> lex(std::string_view text, const std::string& filename, std::vector<Diagnostic>& diags);

} // namespace conman::dsl::detail
