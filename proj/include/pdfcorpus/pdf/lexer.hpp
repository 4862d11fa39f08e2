#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <string_view>

namespace pdfcorpus::pdf {

enum class TokenType {
    end,
    integer,
    real,
    string,     // decoded bytes
    name,       // without slash, #xx expanded
    array_open,
    array_close,
    dict_open,
    dict_close,
    keyword,    // obj, endobj, stream, R, true, false, null, xref, trailer, ...
};

struct Token {
    TokenType type = TokenType::end;
    std::string text;   // keyword text, name text, or string bytes
    int64_t int_value = 0;
    double real_value = 0.0;
    size_t offset = 0;  // byte offset of the token start
};

// Tokenizer for the PDF object syntax. Comments are skipped; brace tokens of
// Type 4 functions are surfaced as keywords.
class Lexer {
  public:
    explicit Lexer(std::string_view data, size_t pos = 0) : data_(data), pos_(pos) {}

    const Token& peek(size_t ahead = 0);
    Token next();
    void push_back(Token t) { lookahead_.push_front(std::move(t)); }

    size_t position() const;
    void seek(size_t pos) {
        pos_ = pos;
        lookahead_.clear();
    }
    std::string_view data() const { return data_; }

    // Skips the single EOL sequence that follows the `stream` keyword.
    void skip_stream_eol();

  private:
    Token lex();
    void skip_ws_and_comments();

    std::string_view data_;
    size_t pos_ = 0;
    std::deque<Token> lookahead_;
};

bool is_pdf_whitespace(char c);
bool is_pdf_delimiter(char c);

}  // namespace pdfcorpus::pdf
