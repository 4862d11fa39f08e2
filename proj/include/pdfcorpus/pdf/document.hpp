#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pdfcorpus/geom.hpp"
#include "pdfcorpus/pdf/filters.hpp"
#include "pdfcorpus/pdf/object.hpp"

namespace pdfcorpus::pdf {

enum class PdfErrorKind {
    encrypted,
    unparseable,
    no_pages,
};

struct PdfError {
    PdfErrorKind kind = PdfErrorKind::unparseable;
    std::string detail;
};

struct Page {
    Rect media_box{0, 0, 612, 792};
    int rotation = 0;  // 0, 90, 180, 270
    std::string content;   // decoded, concatenated content streams
    Object resources;      // dict; values may still be indirect
    Ref ref;

    // Width/height as displayed (swapped when rotated 90/270).
    double display_width() const {
        return rotation == 90 || rotation == 270 ? media_box.height() : media_box.width();
    }
    double display_height() const {
        return rotation == 90 || rotation == 270 ? media_box.width() : media_box.height();
    }
};

// Parsed PDF file: header version, object store behind the xref (classic
// tables, xref streams, object streams), page tree, Info dictionary. When the
// xref is damaged or the file truncated, a linear object scan rebuilds it.
class Document {
  public:
    struct ParseOutcome {
        std::unique_ptr<Document> doc;
        PdfError error;
        bool ok() const { return doc != nullptr; }
    };

    static ParseOutcome parse(std::string bytes);

    const std::string& version() const { return version_; }
    const std::vector<Page>& pages() const { return pages_; }
    const Dict& info() const { return info_; }
    bool used_xref_recovery() const { return used_recovery_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    // Dereferences until the object is not a reference.
    Object resolve(const Object& obj) const;
    Object object(int num) const;

    // Stream decode with Filter/DecodeParms references resolved first.
    DecodeResult decode(const Stream& s) const;

    // Info-dictionary string by key, decoded to UTF-8; empty when absent.
    std::string info_text(const std::string& key) const;

  private:
    Document() = default;

    bool parse_xref_chain(size_t start_offset);
    bool parse_classic_xref(Lexer& lex, std::set<size_t>* visited);
    bool parse_xref_stream_at(size_t offset, std::set<size_t>* visited);
    void take_trailer_fields(const Dict& trailer);
    void rebuild_by_scan();
    bool build_pages();
    Object load_object_at(size_t offset, int expected_num) const;
    void load_object_stream(int stream_num) const;
    std::optional<std::string> read_stream_body(Lexer& lex, const Dict& dict) const;

    struct XrefEntry {
        int type = 0;  // 0 free, 1 offset, 2 in object stream
        uint64_t offset = 0;
        int container = 0;  // object-stream number for type 2
        int index = 0;
    };

    std::string data_;
    std::string version_;
    std::map<int, XrefEntry> xref_;
    std::set<size_t> pending_prev_;
    Dict trailer_;
    Dict info_;
    std::vector<Page> pages_;
    bool used_recovery_ = false;
    std::vector<std::string> warnings_;

    mutable std::map<int, Object> cache_;
    mutable std::set<int> loading_;
};

}  // namespace pdfcorpus::pdf
