#include "pdfcorpus/pdf/lexer.hpp"

#include <cctype>
#include <cstdlib>

namespace pdfcorpus::pdf {

bool is_pdf_whitespace(char c) {
    return c == '\0' || c == '\t' || c == '\n' || c == '\f' || c == '\r' || c == ' ';
}

bool is_pdf_delimiter(char c) {
    return c == '(' || c == ')' || c == '<' || c == '>' || c == '[' || c == ']' || c == '{' ||
           c == '}' || c == '/' || c == '%';
}

const Token& Lexer::peek(size_t ahead) {
    while (lookahead_.size() <= ahead) {
        lookahead_.push_back(lex());
    }
    return lookahead_[ahead];
}

Token Lexer::next() {
    if (!lookahead_.empty()) {
        Token t = std::move(lookahead_.front());
        lookahead_.pop_front();
        return t;
    }
    return lex();
}

size_t Lexer::position() const {
    if (!lookahead_.empty()) return lookahead_.front().offset;
    return pos_;
}

void Lexer::skip_ws_and_comments() {
    while (pos_ < data_.size()) {
        char c = data_[pos_];
        if (is_pdf_whitespace(c)) {
            ++pos_;
        } else if (c == '%') {
            while (pos_ < data_.size() && data_[pos_] != '\n' && data_[pos_] != '\r') ++pos_;
        } else {
            break;
        }
    }
}

void Lexer::skip_stream_eol() {
    lookahead_.clear();
    if (pos_ < data_.size() && data_[pos_] == '\r') ++pos_;
    if (pos_ < data_.size() && data_[pos_] == '\n') ++pos_;
}

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

Token Lexer::lex() {
    skip_ws_and_comments();
    Token t;
    t.offset = pos_;
    if (pos_ >= data_.size()) {
        t.type = TokenType::end;
        return t;
    }

    char c = data_[pos_];

    if (c == '[') {
        ++pos_;
        t.type = TokenType::array_open;
        return t;
    }
    if (c == ']') {
        ++pos_;
        t.type = TokenType::array_close;
        return t;
    }
    if (c == '<') {
        if (pos_ + 1 < data_.size() && data_[pos_ + 1] == '<') {
            pos_ += 2;
            t.type = TokenType::dict_open;
            return t;
        }
        // Hex string.
        ++pos_;
        std::string out;
        int hi = -1;
        while (pos_ < data_.size() && data_[pos_] != '>') {
            int v = hex_value(data_[pos_]);
            ++pos_;
            if (v < 0) continue;
            if (hi < 0) {
                hi = v;
            } else {
                out.push_back(static_cast<char>((hi << 4) | v));
                hi = -1;
            }
        }
        if (hi >= 0) out.push_back(static_cast<char>(hi << 4));
        if (pos_ < data_.size()) ++pos_;  // '>'
        t.type = TokenType::string;
        t.text = std::move(out);
        return t;
    }
    if (c == '>') {
        if (pos_ + 1 < data_.size() && data_[pos_ + 1] == '>') {
            pos_ += 2;
            t.type = TokenType::dict_close;
            return t;
        }
        ++pos_;  // stray '>'
        t.type = TokenType::keyword;
        t.text = ">";
        return t;
    }
    if (c == '(') {
        ++pos_;
        std::string out;
        int depth = 1;
        while (pos_ < data_.size()) {
            char ch = data_[pos_++];
            if (ch == '\\') {
                if (pos_ >= data_.size()) break;
                char esc = data_[pos_++];
                switch (esc) {
                    case 'n': out.push_back('\n'); break;
                    case 'r': out.push_back('\r'); break;
                    case 't': out.push_back('\t'); break;
                    case 'b': out.push_back('\b'); break;
                    case 'f': out.push_back('\f'); break;
                    case '(': out.push_back('('); break;
                    case ')': out.push_back(')'); break;
                    case '\\': out.push_back('\\'); break;
                    case '\r':
                        if (pos_ < data_.size() && data_[pos_] == '\n') ++pos_;
                        break;  // line continuation
                    case '\n': break;
                    default:
                        if (esc >= '0' && esc <= '7') {
                            int val = esc - '0';
                            for (int k = 0; k < 2 && pos_ < data_.size(); ++k) {
                                char d = data_[pos_];
                                if (d < '0' || d > '7') break;
                                val = val * 8 + (d - '0');
                                ++pos_;
                            }
                            out.push_back(static_cast<char>(val & 0xFF));
                        } else {
                            out.push_back(esc);
                        }
                }
            } else if (ch == '(') {
                ++depth;
                out.push_back(ch);
            } else if (ch == ')') {
                if (--depth == 0) break;
                out.push_back(ch);
            } else {
                out.push_back(ch);
            }
        }
        t.type = TokenType::string;
        t.text = std::move(out);
        return t;
    }
    if (c == '/') {
        ++pos_;
        std::string out;
        while (pos_ < data_.size() && !is_pdf_whitespace(data_[pos_]) &&
               !is_pdf_delimiter(data_[pos_])) {
            char ch = data_[pos_];
            if (ch == '#' && pos_ + 2 < data_.size()) {
                int hi = hex_value(data_[pos_ + 1]);
                int lo = hex_value(data_[pos_ + 2]);
                if (hi >= 0 && lo >= 0) {
                    out.push_back(static_cast<char>((hi << 4) | lo));
                    pos_ += 3;
                    continue;
                }
            }
            out.push_back(ch);
            ++pos_;
        }
        t.type = TokenType::name;
        t.text = std::move(out);
        return t;
    }
    if (c == '{' || c == '}') {
        ++pos_;
        t.type = TokenType::keyword;
        t.text = std::string(1, c);
        return t;
    }
    if (c == '+' || c == '-' || c == '.' || std::isdigit(static_cast<unsigned char>(c))) {
        size_t start = pos_;
        bool is_real = false;
        if (c == '+' || c == '-') ++pos_;
        while (pos_ < data_.size()) {
            char ch = data_[pos_];
            if (std::isdigit(static_cast<unsigned char>(ch))) {
                ++pos_;
            } else if (ch == '.') {
                is_real = true;
                ++pos_;
            } else if (ch == '-' || ch == '+') {
                ++pos_;  // broken writers emit things like 1-2; swallow
            } else {
                break;
            }
        }
        std::string text(data_.substr(start, pos_ - start));
        if (is_real) {
            t.type = TokenType::real;
            t.real_value = std::strtod(text.c_str(), nullptr);
            t.int_value = static_cast<int64_t>(t.real_value);
        } else {
            t.type = TokenType::integer;
            t.int_value = std::strtoll(text.c_str(), nullptr, 10);
            t.real_value = static_cast<double>(t.int_value);
        }
        return t;
    }

    // Keyword: run of regular characters.
    size_t start = pos_;
    while (pos_ < data_.size() && !is_pdf_whitespace(data_[pos_]) &&
           !is_pdf_delimiter(data_[pos_])) {
        ++pos_;
    }
    if (pos_ == start) ++pos_;  // lone delimiter we do not understand
    t.type = TokenType::keyword;
    t.text = std::string(data_.substr(start, pos_ - start));
    return t;
}

}  // namespace pdfcorpus::pdf
