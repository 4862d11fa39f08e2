#include "pdfcorpus/pdf/document.hpp"

#include <algorithm>
#include <cctype>

#include "pdfcorpus/pdf/lexer.hpp"

namespace pdfcorpus::pdf {

namespace {

constexpr size_t kMaxObjects = 1u << 20;
constexpr int kMaxPages = 100000;
constexpr int kMaxTreeDepth = 64;

std::optional<Rect> rect_from(const Object& obj) {
    if (!obj.is_array() || obj.array().size() != 4) return std::nullopt;
    const Array& a = obj.array();
    for (const auto& v : a) {
        if (!v.is_number()) return std::nullopt;
    }
    double x0 = a[0].as_real(), y0 = a[1].as_real(), x1 = a[2].as_real(), y1 = a[3].as_real();
    Rect r{std::min(x0, x1), std::min(y0, y1), std::max(x0, x1), std::max(y0, y1)};
    if (!r.valid()) return std::nullopt;
    return r;
}

std::string version_from_header(std::string_view data) {
    size_t window = std::min<size_t>(data.size(), 1024);
    size_t at = data.substr(0, window).find("%PDF-");
    if (at == std::string_view::npos) return "";
    std::string v;
    for (size_t i = at + 5; i < data.size(); ++i) {
        char c = data[i];
        if ((c >= '0' && c <= '9') || c == '.') {
            v.push_back(c);
        } else {
            break;
        }
    }
    return v;
}

}  // namespace

Document::ParseOutcome Document::parse(std::string bytes) {
    auto doc = std::unique_ptr<Document>(new Document());
    doc->data_ = std::move(bytes);
    doc->version_ = version_from_header(doc->data_);

    // startxref in the tail; take the last occurrence.
    size_t tail_len = std::min<size_t>(doc->data_.size(), 2048);
    std::string_view tail(doc->data_.data() + doc->data_.size() - tail_len, tail_len);
    size_t sx = tail.rfind("startxref");
    bool chain_ok = false;
    if (sx != std::string_view::npos) {
        Lexer lex(doc->data_, doc->data_.size() - tail_len + sx + 9);
        Token t = lex.next();
        if (t.type == TokenType::integer && t.int_value >= 0 &&
            static_cast<uint64_t>(t.int_value) < doc->data_.size()) {
            chain_ok = doc->parse_xref_chain(static_cast<size_t>(t.int_value));
        }
    }
    if (!chain_ok || doc->trailer_.count("Root") == 0) {
        doc->rebuild_by_scan();
    }

    if (doc->trailer_.count("Encrypt") != 0) {
        return {nullptr, {PdfErrorKind::encrypted, "document has an /Encrypt dictionary"}};
    }

    if (!doc->build_pages()) {
        // One more chance: a damaged xref can point at garbage even when the
        // objects themselves are intact.
        if (!doc->used_recovery_) {
            doc->rebuild_by_scan();
            if (doc->trailer_.count("Encrypt") != 0) {
                return {nullptr, {PdfErrorKind::encrypted, "document has an /Encrypt dictionary"}};
            }
            if (doc->build_pages()) {
                return {std::move(doc), {}};
            }
        }
        if (doc->xref_.empty()) {
            return {nullptr, {PdfErrorKind::unparseable, "no readable objects"}};
        }
        return {nullptr, {PdfErrorKind::no_pages, "no page tree"}};
    }
    return {std::move(doc), {}};
}

bool Document::parse_xref_chain(size_t start_offset) {
    std::set<size_t> visited;
    size_t offset = start_offset;
    bool any = false;
    while (offset < data_.size() && visited.insert(offset).second) {
        Lexer lex(data_, offset);
        const Token& first = lex.peek();
        if (first.type == TokenType::keyword && first.text == "xref") {
            lex.next();
            if (!parse_classic_xref(lex, &visited)) return any;
            any = true;
        } else if (first.type == TokenType::integer) {
            if (!parse_xref_stream_at(offset, &visited)) return any;
            any = true;
        } else {
            return any;
        }
        // take_trailer_fields collected /Prev offsets; follow them oldest-last.
        auto it = pending_prev_.begin();
        if (it == pending_prev_.end()) break;
        offset = *it;
        pending_prev_.erase(it);
    }
    return any;
}

void Document::take_trailer_fields(const Dict& trailer) {
    for (const auto& [key, value] : trailer) {
        if (key == "Prev") {
            int64_t p = value.as_int(-1);
            if (p >= 0) pending_prev_.insert(static_cast<size_t>(p));
            continue;
        }
        trailer_.emplace(key, value);  // newest wins; emplace keeps the first
    }
}

bool Document::parse_classic_xref(Lexer& lex, std::set<size_t>* visited) {
    while (true) {
        const Token& t = lex.peek();
        if (t.type == TokenType::keyword && t.text == "trailer") {
            lex.next();
            Object tr = parse_object(lex);
            if (!tr.is_dict()) return false;
            // Hybrid files keep extra entries in an xref stream.
            const Object& xstm = tr.get("XRefStm");
            if (xstm.is_int() && xstm.as_int() >= 0 &&
                static_cast<uint64_t>(xstm.as_int()) < data_.size()) {
                parse_xref_stream_at(static_cast<size_t>(xstm.as_int()), visited);
            }
            take_trailer_fields(tr.dict());
            return true;
        }
        if (t.type != TokenType::integer) return false;
        int64_t start = lex.next().int_value;
        const Token& ct = lex.peek();
        if (ct.type != TokenType::integer) return false;
        int64_t count = lex.next().int_value;
        if (start < 0 || count < 0 || count > static_cast<int64_t>(kMaxObjects)) return false;
        for (int64_t i = 0; i < count; ++i) {
            Token off = lex.next();
            Token gen = lex.next();
            Token kind = lex.next();
            if (off.type != TokenType::integer || gen.type != TokenType::integer ||
                kind.type != TokenType::keyword) {
                return false;
            }
            int num = static_cast<int>(start + i);
            if (kind.text == "n") {
                xref_.emplace(num, XrefEntry{1, static_cast<uint64_t>(off.int_value), 0, 0});
            } else if (kind.text == "f") {
                xref_.emplace(num, XrefEntry{0, 0, 0, 0});
            } else {
                return false;
            }
        }
    }
}

std::optional<std::string> Document::read_stream_body(Lexer& lex, const Dict& dict) const {
    // Caller consumed the `stream` keyword.
    lex.skip_stream_eol();
    size_t body_start = lex.position();

    int64_t length = -1;
    auto it = dict.find("Length");
    if (it != dict.end()) {
        Object len_obj = it->second;
        if (len_obj.is_ref()) len_obj = resolve(len_obj);
        if (len_obj.is_int()) length = len_obj.as_int();
    }

    if (length >= 0 && body_start + static_cast<size_t>(length) <= data_.size()) {
        size_t after = body_start + static_cast<size_t>(length);
        Lexer check(data_, after);
        const Token& t = check.peek();
        if (t.type == TokenType::keyword && t.text == "endstream") {
            check.next();
            lex.seek(check.position());
            return std::string(data_.substr(body_start, static_cast<size_t>(length)));
        }
    }

    // Length missing or wrong: scan for endstream.
    size_t end = data_.find("endstream", body_start);
    if (end == std::string::npos) return std::nullopt;
    size_t body_end = end;
    while (body_end > body_start &&
           (data_[body_end - 1] == '\n' || data_[body_end - 1] == '\r')) {
        --body_end;
    }
    lex.seek(end + 9);
    return std::string(data_.substr(body_start, body_end - body_start));
}

bool Document::parse_xref_stream_at(size_t offset, std::set<size_t>* visited) {
    (void)visited;
    Lexer lex(data_, offset);
    Token num = lex.next();
    Token gen = lex.next();
    Token kw = lex.next();
    if (num.type != TokenType::integer || gen.type != TokenType::integer ||
        kw.type != TokenType::keyword || kw.text != "obj") {
        return false;
    }
    Object dict_obj = parse_object(lex);
    if (!dict_obj.is_dict()) return false;
    const Token& st = lex.peek();
    if (st.type != TokenType::keyword || st.text != "stream") return false;
    lex.next();
    auto raw = read_stream_body(lex, dict_obj.dict());
    if (!raw) return false;

    // Resolve W/Index/Size directly (they must be direct objects).
    Dict resolved = dict_obj.dict();
    DecodeResult dec = decode_stream(resolved, *raw);
    if (!dec.ok || dec.unsupported_filter) return false;

    const Object& w_obj = dict_obj.get("W");
    if (!w_obj.is_array() || w_obj.array().size() < 3) return false;
    int w[3];
    for (int i = 0; i < 3; ++i) {
        w[i] = static_cast<int>(w_obj.array()[static_cast<size_t>(i)].as_int(0));
        if (w[i] < 0 || w[i] > 8) return false;
    }
    size_t entry_size = static_cast<size_t>(w[0] + w[1] + w[2]);
    if (entry_size == 0) return false;

    std::vector<std::pair<int64_t, int64_t>> index_ranges;
    const Object& index_obj = dict_obj.get("Index");
    if (index_obj.is_array()) {
        const Array& ia = index_obj.array();
        for (size_t i = 0; i + 1 < ia.size(); i += 2) {
            index_ranges.emplace_back(ia[i].as_int(0), ia[i + 1].as_int(0));
        }
    } else {
        index_ranges.emplace_back(0, dict_obj.get("Size").as_int(0));
    }

    const std::string& body = dec.data;
    size_t pos = 0;
    auto read_field = [&](int width) -> uint64_t {
        uint64_t v = 0;
        for (int i = 0; i < width; ++i) {
            v = (v << 8) | static_cast<unsigned char>(body[pos++]);
        }
        return v;
    };
    for (auto [first, count] : index_ranges) {
        if (first < 0 || count < 0) return false;
        for (int64_t i = 0; i < count; ++i) {
            if (pos + entry_size > body.size()) break;
            uint64_t f0 = w[0] == 0 ? 1 : read_field(w[0]);
            uint64_t f1 = read_field(w[1]);
            uint64_t f2 = read_field(w[2]);
            int obj_num = static_cast<int>(first + i);
            if (f0 == 1) {
                xref_.emplace(obj_num, XrefEntry{1, f1, 0, 0});
            } else if (f0 == 2) {
                xref_.emplace(obj_num,
                              XrefEntry{2, 0, static_cast<int>(f1), static_cast<int>(f2)});
            } else {
                xref_.emplace(obj_num, XrefEntry{0, 0, 0, 0});
            }
        }
    }
    take_trailer_fields(dict_obj.dict());
    return true;
}

void Document::rebuild_by_scan() {
    used_recovery_ = true;
    xref_.clear();
    cache_.clear();
    trailer_.clear();
    pending_prev_.clear();

    // Every "N G obj" occurrence becomes an xref entry; later ones win, which
    // matches incremental-update semantics.
    size_t pos = 0;
    while ((pos = data_.find("obj", pos)) != std::string::npos) {
        size_t at = pos;
        pos += 3;
        // Walk back over: whitespace, generation digits, whitespace, object digits.
        size_t i = at;
        auto skip_ws_back = [&](size_t j) {
            while (j > 0 && is_pdf_whitespace(data_[j - 1])) --j;
            return j;
        };
        auto skip_digits_back = [&](size_t j) {
            while (j > 0 && std::isdigit(static_cast<unsigned char>(data_[j - 1]))) --j;
            return j;
        };
        size_t gen_end = skip_ws_back(i);
        size_t gen_start = skip_digits_back(gen_end);
        if (gen_start == gen_end) continue;
        size_t num_end = skip_ws_back(gen_start);
        size_t num_start = skip_digits_back(num_end);
        if (num_start == num_end || gen_end == i) continue;
        if (num_start > 0 && !is_pdf_whitespace(data_[num_start - 1]) &&
            !is_pdf_delimiter(data_[num_start - 1])) {
            continue;  // e.g. "12endobj"
        }
        int num = std::atoi(data_.c_str() + num_start);
        xref_[num] = XrefEntry{1, static_cast<uint64_t>(num_start), 0, 0};
        if (xref_.size() > kMaxObjects) break;
    }

    // Trailers, newest last; also expand object streams so their contents are
    // reachable, then locate the catalog if no trailer names it.
    size_t tpos = 0;
    while ((tpos = data_.find("trailer", tpos)) != std::string::npos) {
        Lexer lex(data_, tpos + 7);
        Object tr = parse_object(lex);
        if (tr.is_dict()) {
            for (const auto& [k, v] : tr.dict()) {
                if (k != "Prev" && k != "XRefStm") trailer_[k] = v;
            }
        }
        tpos += 7;
    }

    for (const auto& [num, entry] : xref_) {
        if (entry.type != 1) continue;
        Object obj = object(num);
        const Object* dict_src = nullptr;
        if (obj.is_dict() || obj.is_stream()) dict_src = &obj;
        if (dict_src == nullptr) continue;
        const Object& type_obj = dict_src->get("Type");
        if (type_obj.is_name() && type_obj.name() == "ObjStm") {
            load_object_stream(num);
        }
    }

    if (trailer_.count("Root") == 0) {
        for (const auto& [num, entry] : xref_) {
            Object obj = object(num);
            const Object& type_obj = obj.get("Type");
            if (type_obj.is_name() && type_obj.name() == "Catalog") {
                trailer_["Root"] = Object::make_ref(Ref{num, 0});
                break;
            }
        }
    }
    if (trailer_.count("Info") == 0) {
        for (const auto& [num, entry] : xref_) {
            Object obj = object(num);
            if (obj.is_dict() && (obj.has("CreationDate") || obj.has("Producer") ||
                                  (obj.has("Creator") && !obj.has("Type")))) {
                trailer_["Info"] = Object::make_ref(Ref{num, 0});
                break;
            }
        }
    }
}

Object Document::load_object_at(size_t offset, int expected_num) const {
    if (offset >= data_.size()) return Object::make_null();
    Lexer lex(data_, offset);
    Token num = lex.next();
    Token gen = lex.next();
    Token kw = lex.next();
    if (num.type != TokenType::integer || gen.type != TokenType::integer ||
        kw.type != TokenType::keyword || kw.text != "obj") {
        return Object::make_null();
    }
    if (expected_num != 0 && num.int_value != expected_num) return Object::make_null();
    Object obj = parse_object(lex);
    const Token& maybe_stream = lex.peek();
    if (obj.is_dict() && maybe_stream.type == TokenType::keyword &&
        maybe_stream.text == "stream") {
        lex.next();
        auto body = read_stream_body(lex, obj.dict());
        if (!body) return Object::make_null();
        Stream s;
        s.dict = obj.dict();
        s.raw = std::move(*body);
        return Object::make_stream(std::move(s));
    }
    return obj;
}

void Document::load_object_stream(int stream_num) const {
    Object container = object(stream_num);
    const Stream* s = container.stream();
    if (s == nullptr) return;
    DecodeResult dec = decode(*s);
    if (!dec.ok || dec.unsupported_filter) return;

    int n = static_cast<int>(resolve(container.get("N")).as_int(0));
    int64_t first = resolve(container.get("First")).as_int(0);
    if (n <= 0 || first < 0 || n > static_cast<int>(kMaxObjects)) return;

    Lexer header(dec.data);
    std::vector<std::pair<int, int64_t>> locations;
    for (int i = 0; i < n; ++i) {
        Token onum = header.next();
        Token ooff = header.next();
        if (onum.type != TokenType::integer || ooff.type != TokenType::integer) break;
        locations.emplace_back(static_cast<int>(onum.int_value), ooff.int_value);
    }
    for (auto [onum, ooff] : locations) {
        if (cache_.count(onum) != 0) continue;
        size_t at = static_cast<size_t>(first + ooff);
        if (at >= dec.data.size()) continue;
        Lexer lex(dec.data, at);
        cache_[onum] = parse_object(lex);
    }
}

Object Document::object(int num) const {
    auto it = cache_.find(num);
    if (it != cache_.end()) return it->second;
    if (loading_.count(num) != 0) return Object::make_null();
    auto entry_it = xref_.find(num);
    if (entry_it == xref_.end()) return Object::make_null();
    const XrefEntry& entry = entry_it->second;
    loading_.insert(num);
    Object result;
    if (entry.type == 1) {
        result = load_object_at(entry.offset, num);
    } else if (entry.type == 2) {
        load_object_stream(entry.container);
        loading_.erase(num);
        auto loaded = cache_.find(num);
        return loaded != cache_.end() ? loaded->second : Object::make_null();
    }
    loading_.erase(num);
    cache_[num] = result;
    return result;
}

Object Document::resolve(const Object& obj) const {
    Object cur = obj;
    for (int depth = 0; depth < 32 && cur.is_ref(); ++depth) {
        cur = object(cur.ref().num);
    }
    return cur.is_ref() ? Object::make_null() : cur;
}

DecodeResult Document::decode(const Stream& s) const {
    // Filter/DecodeParms may be indirect; give decode_stream resolved copies.
    Dict resolved = s.dict;
    for (const char* key : {"Filter", "DecodeParms", "DP"}) {
        auto it = resolved.find(key);
        if (it != resolved.end() && it->second.is_ref()) {
            it->second = resolve(it->second);
        }
    }
    return decode_stream(resolved, s.raw);
}

bool Document::build_pages() {
    pages_.clear();
    Object root = resolve(trailer_.count("Root") ? trailer_.at("Root") : Object::make_null());
    if (!root.is_dict()) return false;

    // Catalog /Version overrides the header when well-formed.
    Object cat_version = resolve(root.get("Version"));
    if (cat_version.is_name()) {
        const std::string& v = cat_version.name();
        if (v.size() >= 3 && std::isdigit(static_cast<unsigned char>(v[0])) && v[1] == '.') {
            version_ = v;
        }
    }

    Object info_obj = resolve(trailer_.count("Info") ? trailer_.at("Info") : Object::make_null());
    if (info_obj.is_dict()) info_ = info_obj.dict();

    struct Frame {
        Object node;
        Object media_box;
        Object resources;
        Object rotate;
        int depth;
    };
    std::vector<Frame> stack;
    Object pages_ref = root.get("Pages");
    std::set<std::pair<int, int>> visited;
    if (pages_ref.is_ref()) visited.insert({pages_ref.ref().num, pages_ref.ref().gen});
    stack.push_back({resolve(pages_ref), Object(), Object(), Object(), 0});

    while (!stack.empty() && pages_.size() < kMaxPages) {
        Frame frame = std::move(stack.back());
        stack.pop_back();
        if (!frame.node.is_dict() || frame.depth > kMaxTreeDepth) continue;

        Object media = frame.node.has("MediaBox") ? frame.node.get("MediaBox") : frame.media_box;
        Object res = frame.node.has("Resources") ? frame.node.get("Resources") : frame.resources;
        Object rot = frame.node.has("Rotate") ? frame.node.get("Rotate") : frame.rotate;

        const Object& type_obj = frame.node.get("Type");
        bool is_page = type_obj.is_name() ? type_obj.name() == "Page"
                                          : !frame.node.has("Kids");
        if (!is_page && frame.node.has("Kids")) {
            Object kids = resolve(frame.node.get("Kids"));
            if (kids.is_array()) {
                const Array& arr = kids.array();
                // Push in reverse so document order pops first.
                for (auto it = arr.rbegin(); it != arr.rend(); ++it) {
                    if (it->is_ref()) {
                        auto key = std::make_pair(it->ref().num, it->ref().gen);
                        if (!visited.insert(key).second) continue;
                    }
                    stack.push_back({resolve(*it), media, res, rot, frame.depth + 1});
                }
            }
            continue;
        }
        if (!is_page) continue;

        Page page;
        if (auto rect = rect_from(resolve(media))) {
            page.media_box = *rect;
        } else {
            warnings_.push_back("page without MediaBox; assuming 612x792");
        }
        int rotation = static_cast<int>(resolve(rot).as_int(0));
        rotation = ((rotation % 360) + 360) % 360;
        page.rotation = (rotation % 90 == 0) ? rotation : 0;
        page.resources = resolve(res);

        Object contents = resolve(frame.node.get("Contents"));
        auto append_stream = [&](const Object& stream_obj) {
            const Stream* s = stream_obj.stream();
            if (s == nullptr) return;
            DecodeResult dec = decode(*s);
            if (dec.ok && !dec.unsupported_filter) {
                if (!page.content.empty()) page.content.push_back('\n');
                page.content += dec.data;
            } else if (!dec.ok) {
                warnings_.push_back("content stream decode failed");
            }
        };
        if (contents.is_stream()) {
            append_stream(contents);
        } else if (contents.is_array()) {
            for (const auto& part : contents.array()) {
                append_stream(resolve(part));
            }
        }
        pages_.push_back(std::move(page));
    }
    return !pages_.empty();
}

std::string Document::info_text(const std::string& key) const {
    auto it = info_.find(key);
    if (it == info_.end()) return "";
    Object v = resolve(it->second);
    if (!v.is_string()) return "";
    return pdf_text_to_utf8(v.str());
}

}  // namespace pdfcorpus::pdf
