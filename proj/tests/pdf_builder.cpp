#include "pdf_builder.hpp"

#include <cstdio>
#include <map>
#include <set>

#include "pdfcorpus/gzip.hpp"
#include "pdfcorpus/pdf/fonts.hpp"
#include "pdfcorpus/util.hpp"

namespace testfx {

std::string utf8_to_winansi(const std::string& text) {
    const auto& table = pdfcorpus::pdf::win_ansi_encoding();
    std::string out;
    size_t i = 0;
    while (i < text.size()) {
        char32_t cp = pdfcorpus::utf8_next(text, i);
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
            continue;
        }
        bool found = false;
        for (int code = 128; code < 256; ++code) {
            if (table[static_cast<size_t>(code)] == cp) {
                out.push_back(static_cast<char>(code));
                found = true;
                break;
            }
        }
        if (!found) out.push_back('?');
    }
    return out;
}

namespace {

std::string escape_literal(const std::string& bytes) {
    std::string out;
    for (char c : bytes) {
        if (c == '(' || c == ')' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

class ObjectWriter {
  public:
    explicit ObjectWriter(std::string header) : out_(std::move(header)) {}

    int reserve() { return next_num_++; }

    void defer_dict_objects() { defer_dicts_ = true; }

    void put(int num, const std::string& body) {
        if (defer_dicts_) {
            deferred_.emplace_back(num, body);
            return;
        }
        offsets_[num] = out_.size();
        out_ += std::to_string(num) + " 0 obj\n" + body + "\nendobj\n";
    }

    void put_stream(int num, const std::string& dict_extra, const std::string& data) {
        // Stream objects are not allowed inside object streams.
        std::string body = "<< /Length " + std::to_string(data.size()) + dict_extra +
                           " >>\nstream\n" + data + "\nendstream";
        offsets_[num] = out_.size();
        out_ += std::to_string(num) + " 0 obj\n" + body + "\nendobj\n";
    }

    size_t current_offset() const { return out_.size(); }
    std::string& out() { return out_; }
    const std::map<int, size_t>& offsets() const { return offsets_; }
    std::vector<std::pair<int, std::string>>& deferred() { return deferred_; }
    std::map<int, size_t>& offsets_for_test() { return offsets_; }
    int next_num() const { return next_num_; }

  private:
    std::string out_;
    std::map<int, size_t> offsets_;
    std::vector<std::pair<int, std::string>> deferred_;
    int next_num_ = 1;
    bool defer_dicts_ = false;
};

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

BuiltPdf build_pdf(const PdfSpec& spec) {
    BuiltPdf built;
    bool xref_stream = spec.use_xref_stream || spec.use_object_streams;
    ObjectWriter w("%PDF-" + spec.version + "\n%\xE2\xE3\xCF\xD3\n");
    if (spec.use_object_streams) w.defer_dict_objects();

    int catalog_num = w.reserve();
    int pages_num = w.reserve();
    int info_num = w.reserve();

    // Fonts shared across the document, one object per distinct base font.
    std::map<std::string, int> font_objects;
    std::map<std::string, std::string> font_names;
    int font_index = 1;
    for (const auto& page : spec.pages) {
        for (const auto& item : page.items) {
            if (font_objects.count(item.font) != 0) continue;
            font_objects[item.font] = w.reserve();
            font_names[item.font] = "F" + std::to_string(font_index++);
        }
    }

    std::vector<int> shared_image_objects;
    for (int i = 0; i < spec.shared_images; ++i) {
        shared_image_objects.push_back(w.reserve());
    }

    struct PagePlan {
        int page_num;
        int content_num;
        std::vector<int> own_image_objects;
        bool needs_alpha_gs = false;
    };
    std::vector<PagePlan> plans;
    for (const auto& page : spec.pages) {
        PagePlan plan;
        plan.page_num = w.reserve();
        plan.content_num = w.reserve();
        for (int i = 0; i < page.own_images; ++i) plan.own_image_objects.push_back(w.reserve());
        for (const auto& item : page.items) {
            if (item.zero_alpha) plan.needs_alpha_gs = true;
        }
        plans.push_back(plan);
    }
    int alpha_gs_num = 0;
    for (const auto& plan : plans) {
        if (plan.needs_alpha_gs) {
            alpha_gs_num = w.reserve();
            break;
        }
    }

    // Emit objects.
    w.put(catalog_num, "<< /Type /Catalog /Pages " + std::to_string(pages_num) + " 0 R >>");

    std::string kids;
    for (const auto& plan : plans) {
        if (!kids.empty()) kids += " ";
        kids += std::to_string(plan.page_num) + " 0 R";
    }
    w.put(pages_num, "<< /Type /Pages /Kids [" + kids + "] /Count " +
                         std::to_string(plans.size()) + " >>");

    std::string info = "<<";
    if (!spec.creator.empty()) info += " /Creator (" + escape_literal(spec.creator) + ")";
    if (!spec.producer.empty()) info += " /Producer (" + escape_literal(spec.producer) + ")";
    if (!spec.creation_date.empty()) {
        info += " /CreationDate (" + escape_literal(spec.creation_date) + ")";
    }
    info += " >>";
    w.put(info_num, info);

    for (const auto& [font, num] : font_objects) {
        w.put(num, "<< /Type /Font /Subtype /Type1 /BaseFont /" + font +
                       " /Encoding /WinAnsiEncoding >>");
    }

    auto emit_image = [&](int num) {
        std::string pixels(16, '\x55');
        w.put_stream(num,
                     " /Type /XObject /Subtype /Image /Width 4 /Height 4 "
                     "/ColorSpace /DeviceGray /BitsPerComponent 8",
                     pixels);
    };
    for (int num : shared_image_objects) emit_image(num);

    if (alpha_gs_num != 0) {
        w.put(alpha_gs_num, "<< /Type /ExtGState /ca 0 >>");
    }

    std::set<int> counted_shared;
    for (size_t p = 0; p < spec.pages.size(); ++p) {
        const PageSpec& page = spec.pages[p];
        const PagePlan& plan = plans[p];

        for (int num : plan.own_image_objects) emit_image(num);

        // Content stream.
        std::string content;
        for (const auto& item : page.items) {
            std::string bytes = utf8_to_winansi(item.text);
            if (item.render_mode == 3 || item.zero_alpha) {
                built.hidden_chars += bytes.size();
            } else {
                built.visible_chars += bytes.size();
            }
            if (item.zero_alpha) content += "q\n/GSa gs\n";
            content += "BT\n";
            content += "/" + font_names[item.font] + " " + format_real(item.size) + " Tf\n";
            content += std::to_string(item.render_mode) + " Tr\n";
            content += format_real(item.x) + " " + format_real(item.y) + " Td\n";
            content += "(" + escape_literal(bytes) + ") Tj\n";
            content += "ET\n";
            if (item.zero_alpha) content += "Q\n";
        }
        int img_counter = 1;
        for (int i = 0; i < page.own_images; ++i) {
            content += "q 100 0 0 100 50 " + std::to_string(400 + i * 110) + " cm /Im" +
                       std::to_string(img_counter++) + " Do Q\n";
        }
        for (size_t i = 0; i < page.shared_image_refs.size(); ++i) {
            content += "q 80 0 0 80 300 " + std::to_string(400 + i * 90) + " cm /Im" +
                       std::to_string(img_counter++) + " Do Q\n";
        }
        content += page.raw_content;

        std::string stream_dict_extra;
        std::string stream_data = content;
        if (spec.compress_content) {
            stream_data = pdfcorpus::zlib_deflate(content);
            stream_dict_extra = " /Filter /FlateDecode";
        } else if (spec.ascii_hex_content) {
            static const char* hex = "0123456789abcdef";
            std::string encoded;
            for (unsigned char c : content) {
                encoded.push_back(hex[c >> 4]);
                encoded.push_back(hex[c & 0xF]);
            }
            encoded.push_back('>');
            stream_data = encoded;
            stream_dict_extra = " /Filter /ASCIIHexDecode";
        }
        w.put_stream(plan.content_num, stream_dict_extra, stream_data);

        // Page object with resources.
        std::string res = "<< /Font <<";
        for (const auto& [font, num] : font_objects) {
            res += " /" + font_names[font] + " " + std::to_string(num) + " 0 R";
        }
        res += " >>";
        if (!plan.own_image_objects.empty() || !page.shared_image_refs.empty()) {
            res += " /XObject <<";
            int name_counter = 1;
            for (int num : plan.own_image_objects) {
                res += " /Im" + std::to_string(name_counter++) + " " + std::to_string(num) +
                       " 0 R";
                built.image_count += 1;
            }
            for (int shared_idx : page.shared_image_refs) {
                res += " /Im" + std::to_string(name_counter++) + " " +
                       std::to_string(shared_image_objects[static_cast<size_t>(shared_idx)]) +
                       " 0 R";
                if (counted_shared.insert(shared_idx).second) built.image_count += 1;
            }
            res += " >>";
        }
        if (alpha_gs_num != 0 && plan.needs_alpha_gs) {
            res += " /ExtGState << /GSa " + std::to_string(alpha_gs_num) + " 0 R >>";
        }
        res += " >>";

        std::string body = "<< /Type /Page /Parent " + std::to_string(pages_num) + " 0 R";
        body += " /MediaBox [0 0 " + format_real(page.width) + " " + format_real(page.height) + "]";
        if (page.rotate != 0) body += " /Rotate " + std::to_string(page.rotate);
        body += " /Resources " + res;
        body += " /Contents " + std::to_string(plan.content_num) + " 0 R >>";
        w.put(plan.page_num, body);
    }

    // Objects packed into an object stream, when asked for.
    int objstm_num = 0;
    std::map<int, int> objstm_index_of;
    if (spec.use_object_streams && !w.deferred().empty()) {
        objstm_num = w.reserve();
        std::string header;
        std::string bodies;
        int idx = 0;
        for (const auto& [num, body] : w.deferred()) {
            header += std::to_string(num) + " " + std::to_string(bodies.size()) + " ";
            bodies += body + "\n";
            objstm_index_of[num] = idx++;
        }
        std::string content = header + bodies;
        std::string compressed = pdfcorpus::zlib_deflate(content);
        std::string dict = "<< /Type /ObjStm /N " + std::to_string(w.deferred().size()) +
                           " /First " + std::to_string(header.size()) +
                           " /Filter /FlateDecode /Length " + std::to_string(compressed.size()) +
                           " >>";
        w.offsets_for_test()[objstm_num] = w.current_offset();
        w.out() += std::to_string(objstm_num) + " 0 obj\n" + dict + "\nstream\n" + compressed +
                   "\nendstream\nendobj\n";
    }

    // Cross-reference section.
    int total_objects = w.next_num();
    built.xref_offset = w.current_offset();

    if (!xref_stream) {
        std::string xref = "xref\n0 " + std::to_string(total_objects) + "\n";
        xref += "0000000000 65535 f \n";
        for (int num = 1; num < total_objects; ++num) {
            char line[32];
            size_t off = w.offsets().count(num) ? w.offsets().at(num) : 0;
            std::snprintf(line, sizeof(line), "%010zu 00000 n \n", off);
            xref += line;
        }
        std::string trailer = "trailer\n<< /Size " + std::to_string(total_objects) + " /Root " +
                              std::to_string(catalog_num) + " 0 R /Info " +
                              std::to_string(info_num) + " 0 R";
        if (spec.encrypted_marker) {
            trailer += " /Encrypt << /Filter /Standard /V 4 /R 4 >>";
        }
        trailer += " >>\nstartxref\n" + std::to_string(built.xref_offset) + "\n%%EOF\n";
        w.out() += xref + trailer;
    } else {
        // Xref stream with PNG up-predictor, as real writers emit it.
        int xref_num = total_objects;
        size_t entry_bytes = 1 + 4 + 2;
        std::string entries;
        auto push_entry = [&](int type, uint64_t field2, int field3) {
            entries.push_back(static_cast<char>(type));
            for (int shift = 24; shift >= 0; shift -= 8) {
                entries.push_back(static_cast<char>((field2 >> shift) & 0xFF));
            }
            entries.push_back(static_cast<char>((field3 >> 8) & 0xFF));
            entries.push_back(static_cast<char>(field3 & 0xFF));
        };
        push_entry(0, 0, 65535);
        for (int num = 1; num < total_objects; ++num) {
            if (auto it = objstm_index_of.find(num); it != objstm_index_of.end()) {
                push_entry(2, static_cast<uint64_t>(objstm_num), it->second);
            } else {
                push_entry(1, w.offsets().count(num) ? w.offsets().at(num) : 0, 0);
            }
        }
        push_entry(1, built.xref_offset, 0);

        std::string predicted;
        std::string prev_row(entry_bytes, '\0');
        for (size_t row = 0; row * entry_bytes < entries.size(); ++row) {
            predicted.push_back('\x02');  // Up
            for (size_t i = 0; i < entry_bytes; ++i) {
                char cur = entries[row * entry_bytes + i];
                predicted.push_back(static_cast<char>(
                    static_cast<unsigned char>(cur) - static_cast<unsigned char>(prev_row[i])));
                prev_row[i] = cur;
            }
        }
        std::string compressed = pdfcorpus::zlib_deflate(predicted);
        std::string dict = "<< /Type /XRef /Size " + std::to_string(total_objects + 1) +
                           " /W [1 4 2] /Root " + std::to_string(catalog_num) + " 0 R /Info " +
                           std::to_string(info_num) + " 0 R /Filter /FlateDecode" +
                           " /DecodeParms << /Predictor 12 /Colors 1 /BitsPerComponent 8 "
                           "/Columns " +
                           std::to_string(entry_bytes) + " >> /Length " +
                           std::to_string(compressed.size());
        if (spec.encrypted_marker) dict += " /Encrypt << /Filter /Standard >>";
        dict += " >>";
        w.out() += std::to_string(xref_num) + " 0 obj\n" + dict + "\nstream\n" + compressed +
                   "\nendstream\nendobj\n";
        w.out() += "startxref\n" + std::to_string(built.xref_offset) + "\n%%EOF\n";
    }

    built.bytes = std::move(w.out());
    return built;
}

BuiltPdf minimal_pdf(const std::string& text) {
    PdfSpec spec;
    PageSpec page;
    page.items.push_back({72, 700, 12, text, 0, "Helvetica", false});
    spec.pages.push_back(page);
    return build_pdf(spec);
}

}  // namespace testfx
