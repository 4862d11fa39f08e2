#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pdfcorpus/cdx.hpp"
#include "pdfcorpus/fetch.hpp"
#include "pdfcorpus/lang.hpp"
#include "pdfcorpus/lang_id.hpp"
#include "pdfcorpus/pdf/scan.hpp"
#include "pdfcorpus/url_filter.hpp"

namespace pdfcorpus {

struct PipelineConfig {
    std::vector<LangCode> languages{kCorpusLanguages.begin(), kCorpusLanguages.end()};
    uint64_t max_per_language = 200000;
    uint64_t seed = 42;
    SpamConfig spam;
    LangMap langmap_overrides;

    std::string source = "origin-then-warc";  // origin | warc | origin-then-warc
    std::string warc_base;                    // directory or http(s) prefix
    int concurrency = 4;
    double timeout_seconds = 30.0;
    int retries = 3;
    int64_t per_domain_delay_ms = 500;
    uint64_t max_payload_bytes = 512ull << 20;

    pdf::BornDigitalThresholds born_digital;
    double mismatch_confidence = 0.8;
    std::string ocr_command;     // template: {input} {lang} {output}; empty = none
    std::string profiles_path;   // trained language profile bundle

    std::string workdir = "work";
    double fail_threshold = 1.0;  // exit 2 when failed/selected >= this
    std::string fixed_timestamp;  // when set, used for every stage timestamp
};

struct ConfigResult {
    std::optional<PipelineConfig> config;
    std::string error;
    bool ok() const { return config.has_value(); }
};

// JSON config file; missing file or malformed keys are config errors.
ConfigResult load_config(const std::string& path);
PipelineConfig config_from_json_text(const std::string& text, std::string* error);

enum class DocStatus {
    selected,
    downloaded,
    download_failed,
    parsed,
    parse_failed,
    born_digital,
    needs_ocr,
    lang_mismatch_dropped,
    indexed,
};

std::string_view doc_status_name(DocStatus s);
std::optional<DocStatus> doc_status_from(std::string_view name);

// Stage transitions form a DAG; anything else is a bookkeeping bug.
bool can_transition(DocStatus from, DocStatus to);

struct DocumentRecord {
    std::string url;
    std::string sha256;
    LangCode url_lang = LangCode::unknown;
    LangCode content_lang = LangCode::unknown;
    double content_confidence = 0.0;
    bool multi_language = false;
    DocStatus status = DocStatus::selected;
    std::string source;  // "origin" or "warc"
    bool truncated = false;
    std::string payload_path;

    bool has_scan = false;
    uint64_t visible_text_len = 0;
    uint64_t hidden_text_len = 0;
    uint64_t image_count = 0;
    int page_count = 0;
    std::string pdf_version;
    std::optional<int> creation_year;
    std::string creator_vendor;

    std::string cdx_warc_filename;
    uint64_t cdx_warc_offset = 0;
    uint64_t cdx_warc_length = 0;

    std::map<std::string, std::string> timestamps;  // stage -> UTC time
    std::string error;
};

std::string document_record_to_json(const DocumentRecord& rec);
std::optional<DocumentRecord> document_record_from_json(std::string_view line);

enum class Route { native_extraction, external_ocr };

struct RouteDecision {
    Route route = Route::native_extraction;
    LangCode ocr_lang = LangCode::unknown;  // unknown = engine's own detection
};

RouteDecision route_document(const DocumentRecord& rec);

struct LangStageCounts {
    uint64_t urls_found = 0;
    uint64_t after_spam = 0;
    uint64_t domain_balanced = 0;
    uint64_t language_balanced = 0;
    uint64_t downloaded = 0;
    uint64_t processed = 0;
    uint64_t indexed = 0;
};

struct PipelineResult {
    int exit_code = 0;  // 0 ok, 1 config, 2 failure ratio above threshold
    std::string error;
    std::map<LangCode, LangStageCounts> summary;
    std::string index_path;
    bool ok() const { return exit_code == 0; }
};

// Runs the whole pipeline: link extraction, URL language detection, spam
// filtering, balancing, download, born-digital detection, native extraction
// or external OCR, content language identification, index. Each stage
// checkpoints into workdir and is skipped when already complete.
PipelineResult run_pipeline(const PipelineConfig& config,
                            const std::vector<std::string>& cdx_paths);

std::string format_summary_table(const std::map<LangCode, LangStageCounts>& summary);

}  // namespace pdfcorpus
