#include "pdfcorpus/pdf/object.hpp"

#include "pdfcorpus/pdf/lexer.hpp"
#include "pdfcorpus/util.hpp"

namespace pdfcorpus::pdf {

// Parses one object starting at the lexer position. Streams are NOT consumed
// here (the document layer needs /Length resolution); the caller sees the dict
// followed by the `stream` keyword. Returns null object at end of input.
Object parse_object(Lexer& lex, int depth) {
    if (depth > 64) return Object::make_null();
    Token t = lex.next();
    switch (t.type) {
        case TokenType::end:
            return Object::make_null();
        case TokenType::integer: {
            // Lookahead for "num gen R".
            const Token& t1 = lex.peek(0);
            if (t1.type == TokenType::integer) {
                const Token& t2 = lex.peek(1);
                if (t2.type == TokenType::keyword && t2.text == "R") {
                    int num = static_cast<int>(t.int_value);
                    int gen = static_cast<int>(t1.int_value);
                    lex.next();
                    lex.next();
                    return Object::make_ref(Ref{num, gen});
                }
            }
            return Object::make_int(t.int_value);
        }
        case TokenType::real:
            return Object::make_real(t.real_value);
        case TokenType::string:
            return Object::make_string(std::move(t.text));
        case TokenType::name:
            return Object::make_name(std::move(t.text));
        case TokenType::array_open: {
            Array items;
            while (true) {
                const Token& p = lex.peek();
                if (p.type == TokenType::array_close) {
                    lex.next();
                    break;
                }
                if (p.type == TokenType::end) break;
                items.push_back(parse_object(lex, depth + 1));
            }
            return Object::make_array(std::move(items));
        }
        case TokenType::dict_open: {
            Dict d;
            while (true) {
                const Token& p = lex.peek();
                if (p.type == TokenType::dict_close) {
                    lex.next();
                    break;
                }
                if (p.type == TokenType::end) break;
                if (p.type != TokenType::name) {
                    // Tolerate junk keys by skipping one token.
                    lex.next();
                    continue;
                }
                std::string key = lex.next().text;
                d[key] = parse_object(lex, depth + 1);
            }
            return Object::make_dict(std::move(d));
        }
        case TokenType::array_close:
        case TokenType::dict_close:
            return Object::make_null();
        case TokenType::keyword: {
            if (t.text == "true") return Object::make_bool(true);
            if (t.text == "false") return Object::make_bool(false);
            if (t.text == "null") return Object::make_null();
            // Unknown keyword (often `endobj` seen early); surface as null.
            lex.push_back(std::move(t));
            return Object::make_null();
        }
    }
    return Object::make_null();
}

std::string pdf_text_to_utf8(std::string_view raw) {
    // UTF-16BE with BOM, else PDFDocEncoding treated as Latin-1.
    if (raw.size() >= 2 && static_cast<unsigned char>(raw[0]) == 0xFE &&
        static_cast<unsigned char>(raw[1]) == 0xFF) {
        std::string out;
        size_t i = 2;
        while (i + 1 < raw.size()) {
            char32_t unit = (static_cast<unsigned char>(raw[i]) << 8) |
                            static_cast<unsigned char>(raw[i + 1]);
            i += 2;
            if (unit >= 0xD800 && unit <= 0xDBFF && i + 1 < raw.size()) {
                char32_t low = (static_cast<unsigned char>(raw[i]) << 8) |
                               static_cast<unsigned char>(raw[i + 1]);
                if (low >= 0xDC00 && low <= 0xDFFF) {
                    unit = 0x10000 + ((unit - 0xD800) << 10) + (low - 0xDC00);
                    i += 2;
                }
            }
            pdfcorpus::utf8_append(out, unit);
        }
        return out;
    }
    std::string out;
    for (unsigned char c : raw) {
        pdfcorpus::utf8_append(out, c);
    }
    return out;
}

}  // namespace pdfcorpus::pdf
