#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pdfcorpus {

// One capture from a CDX-J index line: SURT key, 14-digit timestamp, then a
// JSON payload locating the capture inside a WARC file.
struct CdxRecord {
    std::string surt_key;
    std::string timestamp;  // YYYYMMDDhhmmss
    std::string url;
    std::string mime;
    int http_status = 200;
    std::string digest;
    std::string warc_filename;
    uint64_t warc_offset = 0;
    uint64_t warc_length = 0;
    std::vector<std::string> declared_languages;

    bool operator==(const CdxRecord&) const = default;
};

enum class CdxErrorKind {
    malformed_json,
    missing_field,
    invalid_field,
};

struct CdxError {
    CdxErrorKind kind = CdxErrorKind::malformed_json;
    std::string detail;
};

struct CdxParseResult {
    std::optional<CdxRecord> record;
    CdxError error;
    bool ok() const { return record.has_value(); }
};

CdxParseResult parse_cdx_line(std::string_view line);

// Canonical single-line form: `surt timestamp {json}`. parse_cdx_line on the
// output reproduces the record exactly.
std::string serialize_cdx_record(const CdxRecord& rec);

// Pure JSON-object form carrying every field (the link-manifest format).
std::string cdx_record_to_jsonl(const CdxRecord& rec);
std::optional<CdxRecord> cdx_record_from_jsonl(std::string_view line);

// `application/pdf` after lowercasing and stripping `;` parameters.
std::string normalize_mime(std::string_view mime);
bool is_pdf_record(const CdxRecord& rec);

// Keeps records whose normalized MIME is application/pdf and status is 200.
std::vector<CdxRecord> filter_pdf_records(const std::vector<CdxRecord>& records);

// First capture per exact URL wins; survivor order preserved.
std::vector<CdxRecord> dedupe_by_url(const std::vector<CdxRecord>& records);

struct CdxIngestStats {
    uint64_t lines = 0;
    uint64_t parsed = 0;
    uint64_t parse_errors = 0;
    uint64_t pdf_records = 0;
};

// Streams a CDX-J file (plain or gzip), applying the PDF filter line by line.
// Memory use is bounded by the line length, not the file size.
bool ingest_cdx_file(const std::string& path, const std::function<void(const CdxRecord&)>& on_pdf,
                     CdxIngestStats* stats = nullptr);

}  // namespace pdfcorpus
