#include "pdfcorpus/pdf/content.hpp"

#include "pdfcorpus/pdf/lexer.hpp"

namespace pdfcorpus::pdf {

namespace {

// Inline image data runs from just after ID to an EI delimited by whitespace.
size_t skip_inline_image_data(std::string_view data, size_t pos) {
    if (pos < data.size() && is_pdf_whitespace(data[pos])) ++pos;
    while (pos + 1 < data.size()) {
        size_t ei = data.find("EI", pos);
        if (ei == std::string_view::npos) return data.size();
        bool before_ok = ei == 0 || is_pdf_whitespace(data[ei - 1]);
        bool after_ok = ei + 2 >= data.size() || is_pdf_whitespace(data[ei + 2]) ||
                        is_pdf_delimiter(data[ei + 2]);
        if (before_ok && after_ok) return ei + 2;
        pos = ei + 1;
    }
    return data.size();
}

}  // namespace

void for_each_content_op(std::string_view content,
                         const std::function<void(const ContentOp&)>& fn) {
    Lexer lex(content);
    std::vector<Object> stack;
    while (true) {
        Token t = lex.peek();
        if (t.type == TokenType::end) break;

        if (t.type == TokenType::keyword) {
            lex.next();
            if (t.text == "true") {
                stack.push_back(Object::make_bool(true));
                continue;
            }
            if (t.text == "false") {
                stack.push_back(Object::make_bool(false));
                continue;
            }
            if (t.text == "null") {
                stack.push_back(Object::make_null());
                continue;
            }
            if (t.text == "BI") {
                // Key/value pairs up to ID, then raw data up to EI.
                ContentOp op;
                op.op = "BI";
                while (true) {
                    Token k = lex.next();
                    if (k.type == TokenType::end) break;
                    if (k.type == TokenType::keyword && k.text == "ID") break;
                    if (k.type != TokenType::name) continue;
                    Object value = parse_object(lex);
                    op.inline_image_dict[k.text] = std::move(value);
                }
                size_t resume = skip_inline_image_data(content, lex.position());
                lex.seek(resume);
                fn(op);
                stack.clear();
                continue;
            }
            ContentOp op;
            op.op = std::move(t.text);
            op.operands = std::move(stack);
            stack.clear();
            fn(op);
            continue;
        }

        // Operand: reuse the object parser (handles arrays/dicts/strings).
        Object obj = parse_object(lex);
        stack.push_back(std::move(obj));
        if (stack.size() > 64) stack.erase(stack.begin());  // no real operator takes this many
    }
}

}  // namespace pdfcorpus::pdf
