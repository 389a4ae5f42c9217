#include "dsl_lexer.hpp"

#include <cctype>
#include <limits>

namespace conman::dsl::detail {

const char* describe(TokType t)
{
    switch (t) {
    case TokType::Ident: return "identifier";
    case TokType::String: return "string";
    case TokType::Int: return "integer";
    case TokType::LBrace: return "'{'";
    case TokType::RBrace: return "'}'";
    case TokType::Colon: return "':'";
    case TokType::DashDash: return "'--'";
    case TokType::At: return "'@'";
    case TokType::Equals: return "'='";
    case TokType::End: return "end of input";
    }
    return "?";
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
public:
    Lexer(std::string_view text, const std::string& file, std::vector<Diagnostic>& diags)
        : text_(text), file_(file), diags_(diags)
    {
    }

    std::vector<Token> run()
    {
        std::vector<Token> out;
        while (true) {
            skip_blank();
            if (at_end()) {
                out.push_back({TokType::End, {}, span_from(pos()), 0});
                return out;
            }
            const SourcePos start = pos();
            const char c = peek();
            if (ident_start(c)) {
                std::string s;
                while (!at_end() && ident_char(peek()))
                    s += advance();
                out.push_back({TokType::Ident, std::move(s), span_from(start), 0});
            } else if (digit(c)) {
                std::string s;
                while (!at_end() && digit(peek()))
                    s += advance();
                long long v = 0;
                bool overflow = false;
                for (char d : s) {
                    if (v > (std::numeric_limits<int>::max() - (d - '0')) / 10) {
                        overflow = true;
                        break;
                    }
                    v = v * 10 + (d - '0');
                }
                if (overflow) {
                    error(start, "integer literal out of range");
                    continue;
                }
                out.push_back({TokType::Int, std::move(s), span_from(start), v});
            } else if (c == '"') {
                advance();
                std::string s;
                bool closed = false;
                while (!at_end()) {
                    char d = advance();
                    if (d == '"') {
                        closed = true;
                        break;
                    }
                    if (d == '\n') {
                        break;
                    }
                    if (d == '\\') {
                        if (at_end())
                            break;
                        char e = advance();
                        switch (e) {
                        case 'n': s += '\n'; break;
                        case 't': s += '\t'; break;
                        case '\\': s += '\\'; break;
                        case '"': s += '"'; break;
                        default: error(start, std::string("unknown escape '\\") + e + "'");
                        }
                        continue;
                    }
                    s += d;
                }
                if (!closed) {
                    error(start, "unterminated string literal");
                    continue;
                }
                out.push_back({TokType::String, std::move(s), span_from(start), 0});
            } else if (c == '{') {
                advance();
                out.push_back({TokType::LBrace, "{", span_from(start), 0});
            } else if (c == '}') {
                advance();
                out.push_back({TokType::RBrace, "}", span_from(start), 0});
            } else if (c == ':') {
                advance();
                out.push_back({TokType::Colon, ":", span_from(start), 0});
            } else if (c == '@') {
                advance();
                out.push_back({TokType::At, "@", span_from(start), 0});
            } else if (c == '=') {
                advance();
                out.push_back({TokType::Equals, "=", span_from(start), 0});
            } else if (c == '-' && offset_ + 1 < text_.size() && text_[offset_ + 1] == '-') {
                advance();
                advance();
                out.push_back({TokType::DashDash, "--", span_from(start), 0});
            } else {
                advance();
                const auto byte = static_cast<unsigned char>(c);
                std::string shown = std::isprint(byte) ? std::string(1, c) : "\\x" + hex(byte);
                error(start, "unexpected character '" + shown + "'");
            }
        }
    }

private:
    static std::string hex(unsigned char b)
    {
        const char* digits = "0123456789abcdef";
        return {digits[b >> 4], digits[b & 15]};
    }

    bool at_end() const { return offset_ >= text_.size(); }
    char peek() const { return text_[offset_]; }
    SourcePos pos() const { return {line_, column_}; }

    char advance()
    {
        char c = text_[offset_++];
        if (c == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        return c;
    }

    void skip_blank()
    {
        while (!at_end()) {
            char c = peek();
            if (c == '#') {
                while (!at_end() && peek() != '\n')
                    advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else {
                return;
            }
        }
    }

    SourceSpan span_from(SourcePos start) const { return {file_, start, pos()}; }

    void error(SourcePos start, std::string message)
    {
        diags_.push_back({span_from(start), std::move(message), {}});
    }

    std::string_view text_;
    const std::string& file_;
    std::vector<Diagnostic>& diags_;
    std::size_t offset_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

} // namespace

std::vector<Token> lex(std::string_view text, const std::string& filename, std::vector<Diagnostic>& diags)
{
    return Lexer(text, filename, diags).run();
}

} // namespace conman::dsl::detail
