#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pdfcorpus::pdf {

struct Ref {
    int num = 0;
    int gen = 0;
    bool operator==(const Ref&) const = default;
    bool operator<(const Ref& o) const { return num != o.num ? num < o.num : gen < o.gen; }
};

class Object;
using Array = std::vector<Object>;
using Dict = std::map<std::string, Object>;

struct Stream {
    Dict dict;
    std::string raw;  // bytes as stored in the file, filters not applied
};

// A PDF object. Strings hold decoded bytes (escapes and hex resolved); names
// hold the text after #xx expansion, without the slash.
class Object {
  public:
    struct NameTag {
        std::string value;
    };

    Object() = default;
    static Object make_null() { return Object(); }
    static Object make_bool(bool b) { return Object(Value(b)); }
    static Object make_int(int64_t v) { return Object(Value(v)); }
    static Object make_real(double v) { return Object(Value(v)); }
    static Object make_string(std::string s) { return Object(Value(std::move(s))); }
    static Object make_name(std::string n) { return Object(Value(NameTag{std::move(n)})); }
    static Object make_array(Array a) { return Object(Value(std::make_shared<Array>(std::move(a)))); }
    static Object make_dict(Dict d) { return Object(Value(std::make_shared<Dict>(std::move(d)))); }
    static Object make_stream(Stream s) { return Object(Value(std::make_shared<Stream>(std::move(s)))); }
    static Object make_ref(Ref r) { return Object(Value(r)); }

    bool is_null() const { return std::holds_alternative<std::monostate>(v_); }
    bool is_bool() const { return std::holds_alternative<bool>(v_); }
    bool is_int() const { return std::holds_alternative<int64_t>(v_); }
    bool is_real() const { return std::holds_alternative<double>(v_); }
    bool is_number() const { return is_int() || is_real(); }
    bool is_string() const { return std::holds_alternative<std::string>(v_); }
    bool is_name() const { return std::holds_alternative<NameTag>(v_); }
    bool is_array() const { return std::holds_alternative<std::shared_ptr<Array>>(v_); }
    bool is_dict() const { return std::holds_alternative<std::shared_ptr<Dict>>(v_); }
    bool is_stream() const { return std::holds_alternative<std::shared_ptr<Stream>>(v_); }
    bool is_ref() const { return std::holds_alternative<Ref>(v_); }

    bool as_bool(bool def = false) const { return is_bool() ? std::get<bool>(v_) : def; }
    int64_t as_int(int64_t def = 0) const {
        if (is_int()) return std::get<int64_t>(v_);
        if (is_real()) return static_cast<int64_t>(std::get<double>(v_));
        return def;
    }
    double as_real(double def = 0.0) const {
        if (is_real()) return std::get<double>(v_);
        if (is_int()) return static_cast<double>(std::get<int64_t>(v_));
        return def;
    }
    const std::string& str() const {
        static const std::string empty;
        return is_string() ? std::get<std::string>(v_) : empty;
    }
    const std::string& name() const {
        static const std::string empty;
        return is_name() ? std::get<NameTag>(v_).value : empty;
    }
    const Array& array() const {
        static const Array empty;
        return is_array() ? *std::get<std::shared_ptr<Array>>(v_) : empty;
    }
    const Dict& dict() const {
        static const Dict empty;
        if (is_dict()) return *std::get<std::shared_ptr<Dict>>(v_);
        if (is_stream()) return std::get<std::shared_ptr<Stream>>(v_)->dict;
        return empty;
    }
    const Stream* stream() const {
        return is_stream() ? std::get<std::shared_ptr<Stream>>(v_).get() : nullptr;
    }
    Ref ref() const { return is_ref() ? std::get<Ref>(v_) : Ref{}; }

    // Dict lookup without resolving references; missing keys give null.
    const Object& get(const std::string& key) const {
        static const Object null_obj;
        const Dict& d = dict();
        auto it = d.find(key);
        return it == d.end() ? null_obj : it->second;
    }
    bool has(const std::string& key) const { return dict().count(key) != 0; }

  private:
    using Value = std::variant<std::monostate, bool, int64_t, double, std::string, NameTag, Ref,
                               std::shared_ptr<Array>, std::shared_ptr<Dict>,
                               std::shared_ptr<Stream>>;
    explicit Object(Value v) : v_(std::move(v)) {}
    Value v_;
};

class Lexer;

// Parses one object at the lexer position. Stream bodies are not consumed;
// the document layer handles `stream` after the dict.
Object parse_object(Lexer& lex, int depth = 0);

// Text-string decode: UTF-16BE when BOM-prefixed, PDFDocEncoding otherwise.
std::string pdf_text_to_utf8(std::string_view raw);

}  // namespace pdfcorpus::pdf
