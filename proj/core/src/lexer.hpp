#pragma once

// Internal lexer shared by the model, presettings, rule and extension
// parsers. Not installed.

#include <array>
#include <cctype>
#include <string>
#include <string_view>

#include "cdimpact/model.hpp"

namespace cdimpact::detail {

enum class TokKind { Ident, Int, String, Punct, End };

struct Token {
    TokKind kind = TokKind::End;
    std::string text;  // identifier, digits, decoded string value, or punct spelling
    std::string raw;   // strings only: escape-preserving span between the quotes
    SourceLocation loc;
};

// '//' starts a line comment. A raw line break inside a string literal is
// wrapping, not content: it collapses together with the surrounding
// horizontal whitespace into one space (both in the decoded text and in the
// raw span). Escapes: \" \\ \n \{ \}.
class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }

    Token next() {
        Token current = tok_;
        advance();
        return current;
    }

    bool at_end() const { return tok_.kind == TokKind::End; }

    bool is_punct(std::string_view p) const {
        return tok_.kind == TokKind::Punct && tok_.text == p;
    }

    bool is_keyword(std::string_view word) const {
        return tok_.kind == TokKind::Ident && tok_.text == word;
    }

    Token expect_punct(std::string_view p) {
        if (!is_punct(p)) fail("expected '" + std::string(p) + "'");
        return next();
    }

    Token expect_keyword(std::string_view word) {
        if (!is_keyword(word)) fail("expected '" + std::string(word) + "'");
        return next();
    }

    Token expect_ident(std::string_view what = "identifier") {
        if (tok_.kind != TokKind::Ident) fail("expected " + std::string(what));
        return next();
    }

    Token expect_string(std::string_view what = "string literal") {
        if (tok_.kind != TokKind::String) fail("expected " + std::string(what));
        return next();
    }

    Token expect_int() {
        if (tok_.kind != TokKind::Int) fail("expected integer");
        return next();
    }

    [[noreturn]] void fail(const std::string& message) const {
        std::string got;
        switch (tok_.kind) {
            case TokKind::End: got = "end of input"; break;
            case TokKind::String: got = "string literal"; break;
            default: got = "'" + tok_.text + "'"; break;
        }
        throw ParseError(message + ", got " + got, tok_.loc);
    }

private:
    static bool ident_start(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }
    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    }
    static bool horizontal_ws(char c) { return c == ' ' || c == '\t' || c == '\r'; }

    char cur() const { return src_[pos_]; }
    bool done() const { return pos_ >= src_.size(); }

    void bump() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_trivia() {
        while (!done()) {
            char c = cur();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                bump();
            } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
                while (!done() && cur() != '\n') bump();
            } else {
                break;
            }
        }
    }

    void advance() {
        skip_trivia();
        tok_ = Token{};
        tok_.loc = {line_, col_};
        if (done()) {
            tok_.kind = TokKind::End;
            return;
        }
        char c = cur();
        if (ident_start(c)) {
            tok_.kind = TokKind::Ident;
            while (!done() && ident_char(cur())) {
                tok_.text += cur();
                bump();
            }
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            tok_.kind = TokKind::Int;
            while (!done() && std::isdigit(static_cast<unsigned char>(cur()))) {
                tok_.text += cur();
                bump();
            }
            return;
        }
        if (c == '"') {
            lex_string();
            return;
        }
        static constexpr std::array<std::string_view, 7> two_char = {"<<", ">>", "..", "->",
                                                                     "=>", "&&", "||"};
        if (pos_ + 1 < src_.size()) {
            std::string_view pair = src_.substr(pos_, 2);
            for (std::string_view p : two_char) {
                if (pair == p) {
                    tok_.kind = TokKind::Punct;
                    tok_.text = std::string(p);
                    bump();
                    bump();
                    return;
                }
            }
        }
        static constexpr std::string_view singles = "{}:[].*();=!,";
        if (singles.find(c) != std::string_view::npos) {
            tok_.kind = TokKind::Punct;
            tok_.text = std::string(1, c);
            bump();
            return;
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "'", tok_.loc);
    }

    void lex_string() {
        tok_.kind = TokKind::String;
        bump();  // opening quote
        while (true) {
            if (done()) throw ParseError("unterminated string literal", tok_.loc);
            char c = cur();
            if (c == '"') {
                bump();
                return;
            }
            if (c == '\\') {
                SourceLocation esc_loc{line_, col_};
                bump();
                if (done()) throw ParseError("unterminated string literal", tok_.loc);
                char e = cur();
                char decoded;
                switch (e) {
                    case '"': decoded = '"'; break;
                    case '\\': decoded = '\\'; break;
                    case 'n': decoded = '\n'; break;
                    case '{': decoded = '{'; break;
                    case '}': decoded = '}'; break;
                    default:
                        throw ParseError("invalid escape '\\" + std::string(1, e) + "'", esc_loc);
                }
                tok_.text += decoded;
                tok_.raw += '\\';
                tok_.raw += e;
                bump();
                continue;
            }
            if (c == '\n') {
                // Wrapped literal: the break and surrounding spaces are one space.
                while (!tok_.text.empty() && horizontal_ws(tok_.text.back())) {
                    tok_.text.pop_back();
                    tok_.raw.pop_back();
                }
                bump();
                while (!done() && horizontal_ws(cur())) bump();
                tok_.text += ' ';
                tok_.raw += ' ';
                continue;
            }
            tok_.text += c;
            tok_.raw += c;
            bump();
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token tok_;
};

}  // namespace cdimpact::detail
