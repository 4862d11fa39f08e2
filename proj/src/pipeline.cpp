#include "pdfcorpus/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "pdfcorpus/extract.hpp"
#include "pdfcorpus/gzip.hpp"
#include "pdfcorpus/hash.hpp"
#include "pdfcorpus/hocr.hpp"
#include "pdfcorpus/psl.hpp"
#include "pdfcorpus/sampler.hpp"
#include "pdfcorpus/util.hpp"

namespace pdfcorpus {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view doc_status_name(DocStatus s) {
    switch (s) {
        case DocStatus::selected: return "selected";
        case DocStatus::downloaded: return "downloaded";
        case DocStatus::download_failed: return "download_failed";
        case DocStatus::parsed: return "parsed";
        case DocStatus::parse_failed: return "parse_failed";
        case DocStatus::born_digital: return "born_digital";
        case DocStatus::needs_ocr: return "needs_ocr";
        case DocStatus::lang_mismatch_dropped: return "lang_mismatch_dropped";
        case DocStatus::indexed: return "indexed";
    }
    return "selected";
}

std::optional<DocStatus> doc_status_from(std::string_view name) {
    for (DocStatus s : {DocStatus::selected, DocStatus::downloaded, DocStatus::download_failed,
                        DocStatus::parsed, DocStatus::parse_failed, DocStatus::born_digital,
                        DocStatus::needs_ocr, DocStatus::lang_mismatch_dropped,
                        DocStatus::indexed}) {
        if (doc_status_name(s) == name) return s;
    }
    return std::nullopt;
}

bool can_transition(DocStatus from, DocStatus to) {
    switch (from) {
        case DocStatus::selected:
            return to == DocStatus::downloaded || to == DocStatus::download_failed;
        case DocStatus::downloaded:
            // Encrypted files skip parsing and go straight to the OCR bucket.
            return to == DocStatus::parsed || to == DocStatus::parse_failed ||
                   to == DocStatus::needs_ocr;
        case DocStatus::parsed:
            return to == DocStatus::born_digital || to == DocStatus::needs_ocr;
        case DocStatus::born_digital:
        case DocStatus::needs_ocr:
            return to == DocStatus::indexed || to == DocStatus::lang_mismatch_dropped;
        default:
            return false;
    }
}

std::string document_record_to_json(const DocumentRecord& rec) {
    json j;
    j["url"] = rec.url;
    j["sha256"] = rec.sha256;
    j["url_lang"] = std::string(lang_name(rec.url_lang));
    j["content_lang"] = std::string(lang_name(rec.content_lang));
    j["content_confidence"] = rec.content_confidence;
    j["multi_language"] = rec.multi_language;
    j["status"] = std::string(doc_status_name(rec.status));
    j["source"] = rec.source;
    j["truncated"] = rec.truncated;
    j["payload_path"] = rec.payload_path;
    if (rec.has_scan) {
        json s;
        s["visible_text_len"] = rec.visible_text_len;
        s["hidden_text_len"] = rec.hidden_text_len;
        s["image_count"] = rec.image_count;
        s["page_count"] = rec.page_count;
        s["version"] = rec.pdf_version;
        if (rec.creation_year) s["creation_year"] = *rec.creation_year;
        s["creator_vendor"] = rec.creator_vendor;
        j["scan"] = std::move(s);
    }
    json w;
    w["filename"] = rec.cdx_warc_filename;
    w["offset"] = rec.cdx_warc_offset;
    w["length"] = rec.cdx_warc_length;
    j["warc"] = std::move(w);
    j["timestamps"] = rec.timestamps;
    if (!rec.error.empty()) j["error"] = rec.error;
    return j.dump();
}

std::optional<DocumentRecord> document_record_from_json(std::string_view line) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return std::nullopt;
    try {
    DocumentRecord rec;
    rec.url = j.value("url", "");
    if (rec.url.empty()) return std::nullopt;
    rec.sha256 = j.value("sha256", "");
    rec.url_lang = lang_from_string(j.value("url_lang", "unknown")).value_or(LangCode::unknown);
    rec.content_lang =
        lang_from_string(j.value("content_lang", "unknown")).value_or(LangCode::unknown);
    rec.content_confidence = j.value("content_confidence", 0.0);
    rec.multi_language = j.value("multi_language", false);
    auto status = doc_status_from(j.value("status", "selected"));
    if (!status) return std::nullopt;
    rec.status = *status;
    rec.source = j.value("source", "");
    rec.truncated = j.value("truncated", false);
    rec.payload_path = j.value("payload_path", "");
    if (j.contains("scan") && j["scan"].is_object()) {
        const json& s = j["scan"];
        rec.has_scan = true;
        rec.visible_text_len = s.value("visible_text_len", 0ull);
        rec.hidden_text_len = s.value("hidden_text_len", 0ull);
        rec.image_count = s.value("image_count", 0ull);
        rec.page_count = s.value("page_count", 0);
        rec.pdf_version = s.value("version", "");
        if (s.contains("creation_year") && s["creation_year"].is_number_integer()) {
            rec.creation_year = s["creation_year"].get<int>();
        }
        rec.creator_vendor = s.value("creator_vendor", "");
    }
    if (j.contains("warc") && j["warc"].is_object()) {
        rec.cdx_warc_filename = j["warc"].value("filename", "");
        rec.cdx_warc_offset = j["warc"].value("offset", 0ull);
        rec.cdx_warc_length = j["warc"].value("length", 0ull);
    }
    if (j.contains("timestamps") && j["timestamps"].is_object()) {
        for (auto it = j["timestamps"].begin(); it != j["timestamps"].end(); ++it) {
            rec.timestamps[it.key()] = it.value().get<std::string>();
        }
    }
    rec.error = j.value("error", "");
    return rec;
    } catch (const json::exception&) {
        return std::nullopt;
    }
}

RouteDecision route_document(const DocumentRecord& rec) {
    if (rec.status == DocStatus::born_digital) {
        return {Route::native_extraction, LangCode::unknown};
    }
    return {Route::external_ocr,
            is_corpus_language(rec.url_lang) ? rec.url_lang : LangCode::unknown};
}

PipelineConfig config_from_json_text(const std::string& text, std::string* error) {
    PipelineConfig cfg;
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        *error = "config is not a JSON object";
        return cfg;
    }
    try {
    if (j.contains("languages")) {
        cfg.languages.clear();
        for (const auto& l : j["languages"]) {
            auto code = lang_from_string(l.get<std::string>());
            if (!code || !is_corpus_language(*code)) {
                *error = "unknown language in config: " + l.get<std::string>();
                return cfg;
            }
            cfg.languages.push_back(*code);
        }
    }
    cfg.max_per_language = j.value("max_per_language", cfg.max_per_language);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("spam")) {
        cfg.spam.ratio_threshold = j["spam"].value("ratio_threshold", cfg.spam.ratio_threshold);
        cfg.spam.min_domain_size = j["spam"].value("min_domain_size", cfg.spam.min_domain_size);
    }
    if (j.contains("langmap") && j["langmap"].is_object()) {
        for (auto it = j["langmap"].begin(); it != j["langmap"].end(); ++it) {
            auto code = lang_from_string(it.value().get<std::string>());
            if (!code) {
                *error = "bad langmap target: " + it.value().get<std::string>();
                return cfg;
            }
            cfg.langmap_overrides[it.key()] = *code;
        }
    }
    if (j.contains("fetch")) {
        const json& f = j["fetch"];
        cfg.source = f.value("source", cfg.source);
        cfg.warc_base = f.value("warc_base", cfg.warc_base);
        cfg.concurrency = f.value("concurrency", cfg.concurrency);
        cfg.timeout_seconds = f.value("timeout", cfg.timeout_seconds);
        cfg.retries = f.value("retries", cfg.retries);
        cfg.per_domain_delay_ms = f.value("per_domain_delay_ms", cfg.per_domain_delay_ms);
        cfg.max_payload_bytes = f.value("max_payload_bytes", cfg.max_payload_bytes);
    }
    if (j.contains("born_digital")) {
        const json& b = j["born_digital"];
        cfg.born_digital.min_visible_text =
            b.value("min_visible_text", cfg.born_digital.min_visible_text);
        cfg.born_digital.max_hidden_text =
            b.value("max_hidden_text", cfg.born_digital.max_hidden_text);
        cfg.born_digital.max_images = b.value("max_images", cfg.born_digital.max_images);
    }
    cfg.mismatch_confidence = j.value("mismatch_confidence", cfg.mismatch_confidence);
    if (j.contains("ocr")) {
        cfg.ocr_command = j["ocr"].value("command", cfg.ocr_command);
    }
    cfg.profiles_path = j.value("profiles", cfg.profiles_path);
    cfg.workdir = j.value("workdir", cfg.workdir);
    cfg.fail_threshold = j.value("fail_threshold", cfg.fail_threshold);
    cfg.fixed_timestamp = j.value("fixed_timestamp", cfg.fixed_timestamp);
    if (cfg.source != "origin" && cfg.source != "warc" && cfg.source != "origin-then-warc") {
        *error = "fetch.source must be origin, warc, or origin-then-warc";
        return cfg;
    }
    } catch (const json::exception& e) {
        *error = std::string("config: ") + e.what();
        return cfg;
    }
    return cfg;
}

ConfigResult load_config(const std::string& path) {
    auto text = read_file(path);
    if (!text) return {std::nullopt, "cannot read config file " + path};
    std::string error;
    PipelineConfig cfg = config_from_json_text(*text, &error);
    if (!error.empty()) return {std::nullopt, error};
    return {cfg, ""};
}

namespace {

struct Candidate {
    CdxRecord cdx;
    LangCode lang = LangCode::unknown;
};

std::string candidate_to_json(const Candidate& c) {
    json j = json::parse(cdx_record_to_jsonl(c.cdx));
    j["url_lang"] = std::string(lang_name(c.lang));
    return j.dump();
}

std::optional<Candidate> candidate_from_json(std::string_view line) {
    auto rec = cdx_record_from_jsonl(line);
    if (!rec) return std::nullopt;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) return std::nullopt;
    Candidate c;
    c.cdx = std::move(*rec);
    c.lang = lang_from_string(j.value("url_lang", "unknown")).value_or(LangCode::unknown);
    return c;
}

class StageRunner {
  public:
    StageRunner(const PipelineConfig& config, const std::vector<std::string>& cdx_paths)
        : cfg_(config), cdx_paths_(cdx_paths) {}

    PipelineResult run();

  private:
    std::string path(const std::string& name) const { return cfg_.workdir + "/" + name; }
    bool done(const std::string& stage) const { return fs::exists(path(stage + ".done")); }
    void mark_done(const std::string& stage) { write_file(path(stage + ".done"), "done\n"); }

    std::string now() const {
        return cfg_.fixed_timestamp.empty() ? utc_timestamp_now() : cfg_.fixed_timestamp;
    }

    bool read_jsonl(const std::string& name, const std::function<void(std::string_view)>& fn) {
        return for_each_line(path(name), fn);
    }

    bool write_lines(const std::string& name, const std::vector<std::string>& lines) {
        std::string blob;
        for (const auto& l : lines) {
            blob += l;
            blob += '\n';
        }
        return write_file_atomic(path(name), blob);
    }

    bool stage_links(std::string* error);
    bool stage_filter(std::string* error);
    bool stage_balance(std::string* error);
    bool stage_download(std::string* error);
    bool stage_scan(std::string* error);
    bool stage_extract(std::string* error);
    bool stage_langid(std::string* error);
    bool stage_index(std::string* error);

    std::vector<DocumentRecord> load_documents(const std::string& name, bool* ok);
    bool store_documents(const std::string& name, std::vector<DocumentRecord> docs);

    std::string tokens_path(const DocumentRecord& rec) const {
        return path("tokens/" + sha256_hex(rec.url) + ".jsonl");
    }

    const PipelineConfig& cfg_;
    std::vector<std::string> cdx_paths_;
    std::map<LangCode, LangStageCounts> summary_;
    std::vector<LanguageProfile> profiles_;
};

std::vector<DocumentRecord> StageRunner::load_documents(const std::string& name, bool* ok) {
    std::vector<DocumentRecord> docs;
    *ok = read_jsonl(name, [&](std::string_view line) {
        if (trim(line).empty()) return;
        if (auto rec = document_record_from_json(line)) docs.push_back(std::move(*rec));
    });
    return docs;
}

bool StageRunner::store_documents(const std::string& name, std::vector<DocumentRecord> docs) {
    std::sort(docs.begin(), docs.end(),
              [](const DocumentRecord& a, const DocumentRecord& b) { return a.url < b.url; });
    std::vector<std::string> lines;
    lines.reserve(docs.size());
    for (const auto& d : docs) lines.push_back(document_record_to_json(d));
    return write_lines(name, lines);
}

bool StageRunner::stage_links(std::string* error) {
    if (done("01_links")) return true;
    // Streamed: only the dedupe URL set stays in memory.
    std::string out_path = path("01_links.jsonl");
    std::string tmp_path = out_path + ".tmp";
    std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
    if (!out) {
        *error = "cannot write links manifest";
        return false;
    }
    std::unordered_set<std::string> seen;
    for (const auto& p : cdx_paths_) {
        CdxIngestStats stats;
        bool ok = ingest_cdx_file(
            p,
            [&](const CdxRecord& rec) {
                if (seen.insert(rec.url).second) {
                    out << cdx_record_to_jsonl(rec) << '\n';
                }
            },
            &stats);
        if (!ok) {
            *error = "cannot read CDX input " + p;
            return false;
        }
    }
    out.close();
    if (!out) {
        *error = "cannot write links manifest";
        return false;
    }
    std::error_code ec;
    fs::rename(tmp_path, out_path, ec);
    if (ec) {
        *error = "cannot finalize links manifest";
        return false;
    }
    mark_done("01_links");
    return true;
}

bool StageRunner::stage_filter(std::string* error) {
    if (done("02_candidates")) return true;
    json counts = json::object();

    // Pass 1: spam aggregation and per-language URL counts, streaming.
    DomainJudge judge(cfg_.spam);
    std::map<LangCode, uint64_t> urls_found;
    if (!read_jsonl("01_links.jsonl", [&](std::string_view line) {
            if (trim(line).empty()) return;
            auto rec = cdx_record_from_jsonl(line);
            if (!rec) return;
            judge.observe(rec->url);
            LangCode lang = detect_url_language(rec->url, cfg_.langmap_overrides);
            if (is_corpus_language(lang)) ++urls_found[lang];
        })) {
        *error = "cannot read links manifest";
        return false;
    }
    auto verdicts = judge.finish();

    std::vector<std::string> verdict_lines;
    for (const auto& [domain, v] : verdicts) {
        json vj;
        vj["domain"] = v.domain;
        vj["url_count"] = v.url_count;
        vj["suspicious_count"] = v.suspicious_count;
        vj["spam_ratio"] = v.spam_ratio;
        vj["is_spam"] = v.is_spam;
        verdict_lines.push_back(vj.dump());
    }
    write_lines("02_verdicts.jsonl", verdict_lines);

    // Pass 2: filter and emit candidates.
    std::map<LangCode, uint64_t> after_spam;
    std::vector<std::string> lines;
    std::set<LangCode> wanted(cfg_.languages.begin(), cfg_.languages.end());
    if (!read_jsonl("01_links.jsonl", [&](std::string_view line) {
            if (trim(line).empty()) return;
            auto rec = cdx_record_from_jsonl(line);
            if (!rec) return;
            auto verdict_it = verdicts.find(registrable_domain(rec->url));
            if (verdict_it != verdicts.end() && verdict_it->second.is_spam) return;
            LangCode lang = detect_url_language(rec->url, cfg_.langmap_overrides);
            if (!is_corpus_language(lang)) return;  // unknowns cannot be bucketed
            ++after_spam[lang];
            if (wanted.count(lang) == 0) return;
            lines.push_back(candidate_to_json(Candidate{std::move(*rec), lang}));
        })) {
        *error = "cannot read links manifest";
        return false;
    }
    if (!write_lines("02_candidates.jsonl", lines)) {
        *error = "cannot write candidates";
        return false;
    }
    for (const auto& [lang, n] : urls_found) {
        counts[std::string(lang_name(lang))]["urls_found"] = n;
    }
    for (const auto& [lang, n] : after_spam) {
        counts[std::string(lang_name(lang))]["after_spam"] = n;
    }
    write_file_atomic(path("02_counts.json"), counts.dump());
    mark_done("02_candidates");
    return true;
}

bool StageRunner::stage_balance(std::string* error) {
    if (done("03_selected")) return true;
    std::map<LangCode, std::vector<CdxRecord>> by_lang;
    if (!read_jsonl("02_candidates.jsonl", [&](std::string_view line) {
            if (trim(line).empty()) return;
            if (auto c = candidate_from_json(line)) by_lang[c->lang].push_back(std::move(c->cdx));
        })) {
        *error = "cannot read candidates";
        return false;
    }

    json counts = json::object();
    std::vector<std::string> selected_lines;
    std::vector<std::string> manifest_lines;
    for (auto& [lang, records] : by_lang) {
        BalanceResult balanced = balance_language(records, lang, cfg_.max_per_language, cfg_.seed);
        uint64_t domain_balanced = 0;
        for (const auto& entry : balanced.manifest) {
            if (entry.reason != "domain_cap") ++domain_balanced;
            json mj;
            mj["url"] = entry.url;
            mj["domain"] = entry.domain;
            mj["lang"] = std::string(lang_name(entry.lang));
            mj["kept"] = entry.kept;
            mj["reason"] = entry.reason;
            manifest_lines.push_back(mj.dump());
        }
        counts[std::string(lang_name(lang))]["domain_balanced"] = domain_balanced;
        counts[std::string(lang_name(lang))]["language_balanced"] = balanced.selected.size();
        for (const auto& rec : balanced.selected) {
            selected_lines.push_back(candidate_to_json(Candidate{rec, lang}));
        }
    }
    std::sort(selected_lines.begin(), selected_lines.end());
    std::sort(manifest_lines.begin(), manifest_lines.end());
    if (!write_lines("03_selected.jsonl", selected_lines) ||
        !write_lines("03_manifest.jsonl", manifest_lines)) {
        *error = "cannot write selection";
        return false;
    }
    write_file_atomic(path("03_counts.json"), counts.dump());
    mark_done("03_selected");
    return true;
}

bool StageRunner::stage_download(std::string* error) {
    if (done("04_documents")) return true;
    std::vector<Candidate> candidates;
    if (!read_jsonl("03_selected.jsonl", [&](std::string_view line) {
            if (trim(line).empty()) return;
            if (auto c = candidate_from_json(line)) candidates.push_back(std::move(*c));
        })) {
        *error = "cannot read selection";
        return false;
    }

    FetchOptions fopt;
    fopt.timeout_seconds = cfg_.timeout_seconds;
    fopt.max_retries = cfg_.retries;
    fopt.max_payload_bytes = cfg_.max_payload_bytes;

    std::vector<FetchTask> tasks;
    tasks.reserve(candidates.size());
    for (const auto& c : candidates) {
        tasks.push_back({c.cdx.url, registrable_domain(c.cdx.url)});
    }

    auto fetch_one = [&](size_t idx) -> FetchOutcome {
        const CdxRecord& cdx = candidates[idx].cdx;
        if (cfg_.source == "warc") {
            return fetch_from_warc(cfg_.warc_base, cdx.warc_filename, cdx.warc_offset,
                                   cdx.warc_length, cdx.url, fopt);
        }
        FetchOutcome origin = fetch_original(cdx.url, fopt);
        if (origin.ok() || cfg_.source == "origin" || cfg_.warc_base.empty()) return origin;
        return fetch_from_warc(cfg_.warc_base, cdx.warc_filename, cdx.warc_offset,
                               cdx.warc_length, cdx.url, fopt);
    };

    std::unordered_map<std::string, size_t> index_of;
    for (size_t i = 0; i < tasks.size(); ++i) index_of[tasks[i].url] = i;
    auto outcomes = run_fetch_pool(tasks, cfg_.concurrency, cfg_.per_domain_delay_ms,
                                   [&](const std::string& url) {
                                       return fetch_one(index_of.at(url));
                                   });

    fs::create_directories(path("corpus"));
    std::vector<DocumentRecord> docs;
    docs.reserve(candidates.size());
    for (size_t i = 0; i < candidates.size(); ++i) {
        const Candidate& c = candidates[i];
        DocumentRecord rec;
        rec.url = c.cdx.url;
        rec.url_lang = c.lang;
        rec.cdx_warc_filename = c.cdx.warc_filename;
        rec.cdx_warc_offset = c.cdx.warc_offset;
        rec.cdx_warc_length = c.cdx.warc_length;
        rec.timestamps["selected"] = now();

        const FetchOutcome& outcome = outcomes[i];
        if (!outcome.ok()) {
            rec.status = DocStatus::download_failed;
            rec.error = std::string(fetch_error_name(outcome.error.kind));
            if (!outcome.error.detail.empty()) rec.error += ": " + outcome.error.detail;
            docs.push_back(std::move(rec));
            continue;
        }
        const FetchResult& fr = *outcome.result;
        PayloadStatus payload = validate_pdf_payload(fr.bytes, fr.truncated);
        if (payload == PayloadStatus::no_magic || payload == PayloadStatus::no_eof) {
            rec.status = DocStatus::download_failed;
            rec.error = payload == PayloadStatus::no_magic ? "invalid_payload: no %PDF- magic"
                                                           : "invalid_payload: missing %%EOF";
            docs.push_back(std::move(rec));
            continue;
        }
        std::string lang_dir = path("corpus/" + std::string(lang_name(c.lang)));
        fs::create_directories(lang_dir);
        std::string file = lang_dir + "/" + sha256_hex(rec.url) + ".pdf";
        if (!write_file(file, fr.bytes)) {
            rec.status = DocStatus::download_failed;
            rec.error = "io: cannot store payload";
            docs.push_back(std::move(rec));
            continue;
        }
        rec.status = DocStatus::downloaded;
        rec.sha256 = sha256_hex(fr.bytes);
        rec.source = fr.source == FetchSource::origin ? "origin" : "warc";
        rec.truncated = fr.truncated;
        rec.payload_path = file;
        rec.timestamps["downloaded"] = now();
        if (payload == PayloadStatus::ok_truncated_no_eof) {
            rec.error = "warning: truncated payload without %%EOF";
        }
        docs.push_back(std::move(rec));
    }
    if (!store_documents("04_documents.jsonl", std::move(docs))) {
        *error = "cannot write download manifest";
        return false;
    }
    mark_done("04_documents");
    return true;
}

bool StageRunner::stage_scan(std::string* error) {
    if (done("05_documents")) return true;
    bool ok = false;
    auto docs = load_documents("04_documents.jsonl", &ok);
    if (!ok) {
        *error = "cannot read download manifest";
        return false;
    }

    std::atomic<size_t> next{0};
    auto worker = [&] {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= docs.size()) return;
            DocumentRecord& rec = docs[i];
            if (rec.status != DocStatus::downloaded) continue;
            auto bytes = read_file(rec.payload_path);
            if (!bytes) {
                rec.status = DocStatus::parse_failed;
                rec.error = "io: payload missing";
                continue;
            }
            auto parsed = pdf::Document::parse(std::move(*bytes));
            if (!parsed.ok()) {
                if (parsed.error.kind == pdf::PdfErrorKind::encrypted) {
                    rec.status = DocStatus::needs_ocr;
                    rec.error = "encrypted";
                } else {
                    rec.status = DocStatus::parse_failed;
                    rec.error = parsed.error.kind == pdf::PdfErrorKind::no_pages ? "no_pages"
                                                                                 : "unparseable";
                }
                continue;
            }
            pdf::ScanReport report = pdf::scan(*parsed.doc);
            rec.status = DocStatus::parsed;
            rec.has_scan = true;
            rec.visible_text_len = report.visible_text_len;
            rec.hidden_text_len = report.hidden_text_len;
            rec.image_count = report.image_count;
            rec.page_count = report.page_count;
            rec.pdf_version = report.version;
            rec.creation_year = report.creation_year;
            rec.creator_vendor = report.creator_vendor;
        }
    };
    int workers = std::max(1, cfg_.concurrency);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::string ts = now();
    for (auto& rec : docs) {
        if (rec.status == DocStatus::parsed || rec.status == DocStatus::parse_failed) {
            rec.timestamps["scanned"] = ts;
        }
        if (rec.status == DocStatus::parsed && rec.has_scan) {
            pdf::ScanReport report;
            report.visible_text_len = rec.visible_text_len;
            report.hidden_text_len = rec.hidden_text_len;
            report.image_count = rec.image_count;
            if (pdf::classify_born_digital(report, cfg_.born_digital)) {
                rec.status = DocStatus::born_digital;
            } else {
                rec.status = DocStatus::needs_ocr;
            }
        }
    }
    if (!store_documents("05_documents.jsonl", std::move(docs))) {
        *error = "cannot write scan manifest";
        return false;
    }
    mark_done("05_documents");
    return true;
}

bool StageRunner::stage_extract(std::string* error) {
    if (done("06_documents")) return true;
    bool ok = false;
    auto docs = load_documents("05_documents.jsonl", &ok);
    if (!ok) {
        *error = "cannot read scan manifest";
        return false;
    }
    fs::create_directories(path("tokens"));
    fs::create_directories(path("hocr"));

    std::atomic<size_t> next{0};
    auto native_worker = [&] {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= docs.size()) return;
            DocumentRecord& rec = docs[i];
            if (rec.status != DocStatus::born_digital) continue;
            auto bytes = read_file(rec.payload_path);
            if (!bytes) continue;
            auto parsed = pdf::Document::parse(std::move(*bytes));
            if (!parsed.ok()) continue;
            auto pages = extract_tokens(*parsed.doc);
            std::string blob;
            for (const auto& page : pages) {
                blob += page_text_to_json(page);
                blob += '\n';
            }
            write_file_atomic(tokens_path(rec), blob);
        }
    };
    int workers = std::max(1, cfg_.concurrency);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(native_worker);
    for (auto& t : pool) t.join();

    // External OCR runs sequentially through the command template.
    for (auto& rec : docs) {
        if (rec.status != DocStatus::needs_ocr) continue;
        if (cfg_.ocr_command.empty()) {
            if (rec.error.empty()) rec.error = "no OCR engine configured";
            continue;
        }
        RouteDecision route = route_document(rec);
        std::string hocr_file = path("hocr/" + sha256_hex(rec.url) + ".hocr");
        std::string cmd = cfg_.ocr_command;
        auto replace_all = [](std::string s, const std::string& from, const std::string& to) {
            size_t at = 0;
            while ((at = s.find(from, at)) != std::string::npos) {
                s.replace(at, from.size(), to);
                at += to.size();
            }
            return s;
        };
        cmd = replace_all(cmd, "{input}", rec.payload_path);
        cmd = replace_all(cmd, "{lang}", std::string(lang_name(route.ocr_lang)));
        cmd = replace_all(cmd, "{output}", hocr_file);
        int rc = std::system(cmd.c_str());
        auto hocr_text = read_file(hocr_file);
        if (rc != 0 || !hocr_text) {
            rec.error = "ocr command failed";
            continue;
        }
        auto pages = import_hocr(*hocr_text);
        std::string blob;
        for (const auto& page : pages) {
            blob += page_text_to_json(page);
            blob += '\n';
        }
        write_file_atomic(tokens_path(rec), blob);
        rec.error.clear();
    }

    std::string ts = now();
    for (auto& rec : docs) {
        if (fs::exists(tokens_path(rec))) rec.timestamps["extracted"] = ts;
    }
    if (!store_documents("06_documents.jsonl", std::move(docs))) {
        *error = "cannot write extraction manifest";
        return false;
    }
    mark_done("06_documents");
    return true;
}

bool StageRunner::stage_langid(std::string* error) {
    if (done("07_documents")) return true;
    bool ok = false;
    auto docs = load_documents("06_documents.jsonl", &ok);
    if (!ok) {
        *error = "cannot read extraction manifest";
        return false;
    }
    std::string ts = now();
    for (auto& rec : docs) {
        if (rec.status != DocStatus::born_digital && rec.status != DocStatus::needs_ocr) continue;
        std::string tok_path = tokens_path(rec);
        if (!fs::exists(tok_path)) continue;
        std::string text;
        for_each_line(tok_path, [&](std::string_view line) {
            if (trim(line).empty()) return;
            if (auto page = page_text_from_json(line)) {
                if (!text.empty()) text.push_back(' ');
                text += page_plain_text(*page);
            }
        });
        LangVerdict verdict = detect_language(text, profiles_);
        rec.timestamps["detected"] = ts;
        if (verdict.lang == LangCode::unknown) {
            // Not enough text to judge; the URL language stands.
            rec.content_lang = rec.url_lang;
            rec.content_confidence = 0.0;
            continue;
        }
        rec.content_lang = verdict.lang;
        rec.content_confidence = verdict.confidence;
        rec.multi_language = verdict.multi_language_suspected;
        if (mismatch_filter(rec.url_lang, verdict, cfg_.mismatch_confidence) ==
            MismatchAction::drop_mismatch) {
            rec.status = DocStatus::lang_mismatch_dropped;
        }
    }
    if (!store_documents("07_documents.jsonl", std::move(docs))) {
        *error = "cannot write language manifest";
        return false;
    }
    mark_done("07_documents");
    return true;
}

bool StageRunner::stage_index(std::string* error) {
    if (done("index")) return true;
    bool ok = false;
    auto docs = load_documents("07_documents.jsonl", &ok);
    if (!ok) {
        *error = "cannot read language manifest";
        return false;
    }
    std::string ts = now();
    for (auto& rec : docs) {
        bool has_text = fs::exists(tokens_path(rec));
        if ((rec.status == DocStatus::born_digital || rec.status == DocStatus::needs_ocr) &&
            has_text && rec.content_lang != LangCode::unknown) {
            rec.status = DocStatus::indexed;
            rec.timestamps["indexed"] = ts;
        }
    }
    if (!store_documents("index.jsonl", std::move(docs))) {
        *error = "cannot write index";
        return false;
    }
    mark_done("index");
    return true;
}

PipelineResult StageRunner::run() {
    PipelineResult result;
    std::error_code ec;
    fs::create_directories(cfg_.workdir, ec);
    if (ec) {
        result.exit_code = 1;
        result.error = "cannot create workdir " + cfg_.workdir;
        return result;
    }

    // Language profiles are needed by the detection stage; fail early.
    if (!cfg_.profiles_path.empty()) {
        auto text = read_file(cfg_.profiles_path);
        if (!text) {
            result.exit_code = 1;
            result.error = "cannot read profiles bundle " + cfg_.profiles_path;
            return result;
        }
        auto profiles = profiles_from_json(*text);
        if (!profiles) {
            result.exit_code = 1;
            result.error = "malformed profiles bundle " + cfg_.profiles_path;
            return result;
        }
        profiles_ = std::move(*profiles);
    } else {
        result.exit_code = 1;
        result.error = "config: profiles bundle path is required for run";
        return result;
    }

    std::string error;
    struct StageEntry {
        const char* name;
        bool (StageRunner::*fn)(std::string*);
    };
    const StageEntry stages[] = {
        {"links", &StageRunner::stage_links},       {"filter", &StageRunner::stage_filter},
        {"balance", &StageRunner::stage_balance},   {"download", &StageRunner::stage_download},
        {"scan", &StageRunner::stage_scan},         {"extract", &StageRunner::stage_extract},
        {"lang-id", &StageRunner::stage_langid},    {"index", &StageRunner::stage_index},
    };
    for (const auto& stage : stages) {
        if (!(this->*stage.fn)(&error)) {
            result.exit_code = 1;
            result.error = std::string(stage.name) + ": " + error;
            return result;
        }
    }

    // Summary in the shape of the per-language pipeline table.
    auto read_counts = [&](const std::string& name, const std::string& key,
                           uint64_t LangStageCounts::*field) {
        auto text = read_file(path(name));
        if (!text) return;
        json j = json::parse(*text, nullptr, false);
        if (j.is_discarded() || !j.is_object()) return;
        for (auto it = j.begin(); it != j.end(); ++it) {
            auto lang = lang_from_string(it.key());
            if (!lang) continue;
            if (it.value().contains(key)) {
                summary_[*lang].*field = it.value()[key].get<uint64_t>();
            }
        }
    };
    read_counts("02_counts.json", "urls_found", &LangStageCounts::urls_found);
    read_counts("02_counts.json", "after_spam", &LangStageCounts::after_spam);
    read_counts("03_counts.json", "domain_balanced", &LangStageCounts::domain_balanced);
    read_counts("03_counts.json", "language_balanced", &LangStageCounts::language_balanced);

    bool ok = false;
    auto docs = load_documents("index.jsonl", &ok);
    uint64_t selected_total = 0, processed_total = 0;
    for (const auto& rec : docs) {
        auto& row = summary_[rec.url_lang];
        ++selected_total;
        bool downloaded = rec.status != DocStatus::download_failed;
        bool processed = rec.status == DocStatus::indexed ||
                         rec.status == DocStatus::lang_mismatch_dropped;
        if (downloaded) ++row.downloaded;
        if (processed) {
            ++row.processed;
            ++processed_total;
        }
        if (rec.status == DocStatus::indexed) ++row.indexed;
    }

    result.summary = summary_;
    result.index_path = path("index.jsonl");
    if (selected_total > 0) {
        double fail_ratio =
            1.0 - static_cast<double>(processed_total) / static_cast<double>(selected_total);
        if (fail_ratio >= cfg_.fail_threshold) result.exit_code = 2;
    }
    return result;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config,
                            const std::vector<std::string>& cdx_paths) {
    StageRunner runner(config, cdx_paths);
    return runner.run();
}

std::string format_summary_table(const std::map<LangCode, LangStageCounts>& summary) {
    std::ostringstream out;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-6s %12s %12s %12s %12s %22s %22s\n", "lang", "URLs found",
                  "anti-spam", "domain bal.", "lang bal.", "downloaded", "processed");
    out << buf;
    LangStageCounts all;
    auto row = [&](const std::string& name, const LangStageCounts& c) {
        double dl_pct = c.language_balanced > 0
                            ? 100.0 * static_cast<double>(c.downloaded) /
                                  static_cast<double>(c.language_balanced)
                            : 0.0;
        double pr_pct = c.language_balanced > 0
                            ? 100.0 * static_cast<double>(c.processed) /
                                  static_cast<double>(c.language_balanced)
                            : 0.0;
        std::snprintf(buf, sizeof(buf), "%-6s %12s %12s %12s %12s %14s (%5.2f%%) %14s (%5.2f%%)\n",
                      name.c_str(), format_count(c.urls_found).c_str(),
                      format_count(c.after_spam).c_str(), format_count(c.domain_balanced).c_str(),
                      format_count(c.language_balanced).c_str(), format_count(c.downloaded).c_str(),
                      dl_pct, format_count(c.processed).c_str(), pr_pct);
        out << buf;
    };
    for (const auto& [lang, counts] : summary) {
        row(std::string(lang_name(lang)), counts);
        all.urls_found += counts.urls_found;
        all.after_spam += counts.after_spam;
        all.domain_balanced += counts.domain_balanced;
        all.language_balanced += counts.language_balanced;
        all.downloaded += counts.downloaded;
        all.processed += counts.processed;
        all.indexed += counts.indexed;
    }
    row("all", all);
    return out.str();
}

}  // namespace pdfcorpus
