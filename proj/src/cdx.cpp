#include "pdfcorpus/cdx.hpp"

#include <cctype>
#include <unordered_set>

#include <json.hpp>

#include "pdfcorpus/gzip.hpp"
#include "pdfcorpus/url.hpp"
#include "pdfcorpus/util.hpp"

namespace pdfcorpus {

using nlohmann::json;

namespace {

CdxParseResult fail(CdxErrorKind kind, std::string detail) {
    CdxParseResult r;
    r.error = {kind, std::move(detail)};
    return r;
}

// CDX-J carries numbers as JSON strings; tolerate both forms.
std::optional<uint64_t> get_u64(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) return std::nullopt;
    if (it->is_number_unsigned()) return it->get<uint64_t>();
    if (it->is_number_integer()) {
        auto v = it->get<int64_t>();
        if (v < 0) return std::nullopt;
        return static_cast<uint64_t>(v);
    }
    if (it->is_string()) {
        const std::string& s = it->get_ref<const std::string&>();
        if (s.empty()) return std::nullopt;
        uint64_t v = 0;
        for (char c : s) {
            if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
            v = v * 10 + static_cast<uint64_t>(c - '0');
        }
        return v;
    }
    return std::nullopt;
}

std::optional<std::string> get_str(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) return std::nullopt;
    return it->get<std::string>();
}

}  // namespace

CdxParseResult parse_cdx_line(std::string_view line) {
    size_t sp1 = line.find(' ');
    if (sp1 == std::string_view::npos) return fail(CdxErrorKind::malformed_json, "no JSON payload");
    size_t sp2 = line.find(' ', sp1 + 1);
    if (sp2 == std::string_view::npos) return fail(CdxErrorKind::malformed_json, "no JSON payload");

    CdxRecord rec;
    rec.surt_key = std::string(line.substr(0, sp1));
    rec.timestamp = std::string(line.substr(sp1 + 1, sp2 - sp1 - 1));

    std::string_view payload = line.substr(sp2 + 1);
    json j = json::parse(payload, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        return fail(CdxErrorKind::malformed_json, "payload is not a JSON object");
    }

    if (rec.timestamp.size() != 14) return fail(CdxErrorKind::invalid_field, "timestamp");
    for (char c : rec.timestamp) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            return fail(CdxErrorKind::invalid_field, "timestamp");
        }
    }

    auto url = get_str(j, "url");
    if (!url) return fail(CdxErrorKind::missing_field, "url");
    auto mime = get_str(j, "mime");
    if (!mime) return fail(CdxErrorKind::missing_field, "mime");
    auto filename = get_str(j, "filename");
    if (!filename) return fail(CdxErrorKind::missing_field, "filename");
    auto offset = get_u64(j, "offset");
    if (!offset) return fail(CdxErrorKind::missing_field, "offset");
    auto length = get_u64(j, "length");
    if (!length) return fail(CdxErrorKind::missing_field, "length");

    if (!parse_url(*url)) return fail(CdxErrorKind::invalid_field, "url");
    if (*length == 0) return fail(CdxErrorKind::invalid_field, "length");
    if (*offset > UINT64_MAX - *length) return fail(CdxErrorKind::invalid_field, "offset");

    rec.url = std::move(*url);
    rec.mime = std::move(*mime);
    rec.warc_filename = std::move(*filename);
    rec.warc_offset = *offset;
    rec.warc_length = *length;

    if (auto status = get_u64(j, "status")) {
        rec.http_status = static_cast<int>(*status);
    }
    if (auto digest = get_str(j, "digest")) {
        rec.digest = std::move(*digest);
    }
    if (auto langs = get_str(j, "languages")) {
        for (auto& l : split(*langs, ',')) {
            auto t = trim(l);
            if (!t.empty()) rec.declared_languages.push_back(t);
        }
    }
    return CdxParseResult{std::move(rec), {}};
}

std::string serialize_cdx_record(const CdxRecord& rec) {
    json j;
    j["url"] = rec.url;
    j["mime"] = rec.mime;
    j["status"] = std::to_string(rec.http_status);
    if (!rec.digest.empty()) j["digest"] = rec.digest;
    j["filename"] = rec.warc_filename;
    j["offset"] = std::to_string(rec.warc_offset);
    j["length"] = std::to_string(rec.warc_length);
    if (!rec.declared_languages.empty()) {
        std::string langs;
        for (size_t i = 0; i < rec.declared_languages.size(); ++i) {
            if (i) langs += ",";
            langs += rec.declared_languages[i];
        }
        j["languages"] = langs;
    }
    return rec.surt_key + " " + rec.timestamp + " " + j.dump();
}

std::string cdx_record_to_jsonl(const CdxRecord& rec) {
    json j;
    j["surt_key"] = rec.surt_key;
    j["timestamp"] = rec.timestamp;
    j["url"] = rec.url;
    j["mime"] = rec.mime;
    j["status"] = rec.http_status;
    if (!rec.digest.empty()) j["digest"] = rec.digest;
    j["filename"] = rec.warc_filename;
    j["offset"] = rec.warc_offset;
    j["length"] = rec.warc_length;
    if (!rec.declared_languages.empty()) j["languages"] = rec.declared_languages;
    return j.dump();
}

std::optional<CdxRecord> cdx_record_from_jsonl(std::string_view line) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return std::nullopt;
    try {
        CdxRecord rec;
        rec.surt_key = j.value("surt_key", "");
        rec.timestamp = j.value("timestamp", "");
        rec.url = j.value("url", "");
        rec.mime = j.value("mime", "");
        rec.http_status = j.value("status", 200);
        rec.digest = j.value("digest", "");
        rec.warc_filename = j.value("filename", "");
        rec.warc_offset = j.value("offset", 0ull);
        rec.warc_length = j.value("length", 0ull);
        if (j.contains("languages") && j["languages"].is_array()) {
            for (const auto& l : j["languages"]) {
                if (l.is_string()) rec.declared_languages.push_back(l.get<std::string>());
            }
        }
        if (rec.url.empty() || rec.warc_length == 0) return std::nullopt;
        return rec;
    } catch (const json::exception&) {
        return std::nullopt;
    }
}

std::string normalize_mime(std::string_view mime) {
    std::string m = to_lower(mime);
    size_t semi = m.find(';');
    if (semi != std::string::npos) m.resize(semi);
    return trim(m);
}

bool is_pdf_record(const CdxRecord& rec) {
    return normalize_mime(rec.mime) == "application/pdf" && rec.http_status == 200;
}

std::vector<CdxRecord> filter_pdf_records(const std::vector<CdxRecord>& records) {
    std::vector<CdxRecord> out;
    for (const auto& r : records) {
        if (is_pdf_record(r)) out.push_back(r);
    }
    return out;
}

std::vector<CdxRecord> dedupe_by_url(const std::vector<CdxRecord>& records) {
    std::vector<CdxRecord> out;
    std::unordered_set<std::string> seen;
    for (const auto& r : records) {
        if (seen.insert(r.url).second) out.push_back(r);
    }
    return out;
}

bool ingest_cdx_file(const std::string& path, const std::function<void(const CdxRecord&)>& on_pdf,
                     CdxIngestStats* stats) {
    CdxIngestStats local;
    bool ok = for_each_line(path, [&](std::string_view line) {
        if (trim(line).empty()) return;
        ++local.lines;
        auto res = parse_cdx_line(line);
        if (!res.ok()) {
            ++local.parse_errors;
            return;
        }
        ++local.parsed;
        if (is_pdf_record(*res.record)) {
            ++local.pdf_records;
            on_pdf(*res.record);
        }
    });
    if (stats != nullptr) *stats = local;
    return ok;
}

}  // namespace pdfcorpus
