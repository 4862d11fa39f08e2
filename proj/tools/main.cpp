#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdfcorpus/cdx.hpp"
#include "pdfcorpus/extract.hpp"
#include "pdfcorpus/fetch.hpp"
#include "pdfcorpus/gzip.hpp"
#include "pdfcorpus/hash.hpp"
#include "pdfcorpus/hocr.hpp"
#include "pdfcorpus/lang_id.hpp"
#include "pdfcorpus/pdf/document.hpp"
#include "pdfcorpus/pdf/scan.hpp"
#include "pdfcorpus/pipeline.hpp"
#include "pdfcorpus/psl.hpp"
#include "pdfcorpus/sampler.hpp"
#include "pdfcorpus/stats.hpp"
#include "pdfcorpus/url_filter.hpp"
#include "pdfcorpus/util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pdfcorpus;

namespace {

int write_or_fail(const std::string& path, const std::string& content) {
    if (!write_file_atomic(path, content)) {
        std::cerr << "error: cannot write " << path << "\n";
        return 1;
    }
    return 0;
}

std::vector<CdxRecord> read_links_file(const std::string& path, bool* ok) {
    std::vector<CdxRecord> records;
    *ok = for_each_line(path, [&](std::string_view line) {
        if (trim(line).empty()) return;
        // Link manifests are JSON objects; raw CDX-J lines are accepted too.
        if (auto rec = cdx_record_from_jsonl(line)) {
            records.push_back(std::move(*rec));
            return;
        }
        auto parsed = parse_cdx_line(line);
        if (parsed.ok()) records.push_back(std::move(*parsed.record));
    });
    return records;
}

struct CandidateLine {
    CdxRecord cdx;
    LangCode lang;
};

std::vector<CandidateLine> read_candidates(const std::string& path, bool* ok) {
    std::vector<CandidateLine> out;
    *ok = for_each_line(path, [&](std::string_view line) {
        if (trim(line).empty()) return;
        auto rec = cdx_record_from_jsonl(line);
        if (!rec) return;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) return;
        auto lang = lang_from_string(j.value("url_lang", ""));
        if (lang) out.push_back({std::move(*rec), *lang});
    });
    return out;
}

std::string candidate_line(const CdxRecord& rec, LangCode lang) {
    json j = json::parse(cdx_record_to_jsonl(rec));
    j["url_lang"] = std::string(lang_name(lang));
    return j.dump();
}

int cmd_extract_links(const std::vector<std::string>& cdx_paths, const std::string& out) {
    std::vector<CdxRecord> records;
    CdxIngestStats total;
    for (const auto& p : cdx_paths) {
        CdxIngestStats stats;
        if (!ingest_cdx_file(p, [&](const CdxRecord& r) { records.push_back(r); }, &stats)) {
            std::cerr << "error: cannot read " << p << "\n";
            return 1;
        }
        total.lines += stats.lines;
        total.parsed += stats.parsed;
        total.parse_errors += stats.parse_errors;
        total.pdf_records += stats.pdf_records;
    }
    records = dedupe_by_url(records);
    std::string blob;
    for (const auto& r : records) {
        blob += cdx_record_to_jsonl(r);
        blob += '\n';
    }
    std::cerr << "lines=" << total.lines << " parsed=" << total.parsed
              << " errors=" << total.parse_errors << " pdf=" << total.pdf_records
              << " unique=" << records.size() << "\n";
    return write_or_fail(out, blob);
}

int cmd_filter(const std::string& links, const std::string& out, const std::string& verdicts_out,
               const SpamConfig& spam, const std::string& langmap_path) {
    bool ok = false;
    auto records = read_links_file(links, &ok);
    if (!ok) {
        std::cerr << "error: cannot read " << links << "\n";
        return 1;
    }
    LangMap overrides;
    if (!langmap_path.empty()) {
        auto text = read_file(langmap_path);
        if (!text) {
            std::cerr << "error: cannot read langmap " << langmap_path << "\n";
            return 1;
        }
        json j = json::parse(*text, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            std::cerr << "error: langmap must be a JSON object\n";
            return 1;
        }
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!it.value().is_string()) {
                std::cerr << "error: langmap values must be language codes\n";
                return 1;
            }
            auto code = lang_from_string(it.value().get<std::string>());
            if (code) overrides[it.key()] = *code;
        }
    }

    auto verdicts = judge_domains(records, spam);
    auto kept = drop_spam_domains(records, verdicts);

    std::string vblob;
    for (const auto& [domain, v] : verdicts) {
        json vj;
        vj["domain"] = v.domain;
        vj["url_count"] = v.url_count;
        vj["suspicious_count"] = v.suspicious_count;
        vj["spam_ratio"] = v.spam_ratio;
        vj["is_spam"] = v.is_spam;
        vblob += vj.dump();
        vblob += '\n';
    }
    if (!verdicts_out.empty() && write_or_fail(verdicts_out, vblob) != 0) return 1;

    std::string blob;
    size_t kept_count = 0;
    for (const auto& rec : kept) {
        LangCode lang = detect_url_language(rec.url, overrides);
        if (!is_corpus_language(lang)) continue;
        blob += candidate_line(rec, lang);
        blob += '\n';
        ++kept_count;
    }
    std::cerr << "input=" << records.size() << " kept=" << kept_count << "\n";
    return write_or_fail(out, blob);
}

int cmd_balance(const std::string& candidates_path, const std::string& out,
                const std::string& manifest_out, uint64_t seed, uint64_t max_per_language) {
    bool ok = false;
    auto candidates = read_candidates(candidates_path, &ok);
    if (!ok) {
        std::cerr << "error: cannot read " << candidates_path << "\n";
        return 1;
    }
    std::map<LangCode, std::vector<CdxRecord>> by_lang;
    for (auto& c : candidates) by_lang[c.lang].push_back(std::move(c.cdx));

    std::vector<std::string> selected, manifest;
    for (auto& [lang, records] : by_lang) {
        BalanceResult result = balance_language(records, lang, max_per_language, seed);
        for (const auto& rec : result.selected) selected.push_back(candidate_line(rec, lang));
        for (const auto& entry : result.manifest) {
            json mj;
            mj["url"] = entry.url;
            mj["domain"] = entry.domain;
            mj["lang"] = std::string(lang_name(entry.lang));
            mj["kept"] = entry.kept;
            mj["reason"] = entry.reason;
            manifest.push_back(mj.dump());
        }
    }
    std::sort(selected.begin(), selected.end());
    std::sort(manifest.begin(), manifest.end());
    std::string blob, mblob;
    for (const auto& l : selected) blob += l + "\n";
    for (const auto& l : manifest) mblob += l + "\n";
    if (!manifest_out.empty() && write_or_fail(manifest_out, mblob) != 0) return 1;
    std::cerr << "selected=" << selected.size() << "\n";
    return write_or_fail(out, blob);
}

int cmd_scan(const std::string& input, const std::string& out) {
    std::vector<std::string> files;
    if (fs::is_directory(input)) {
        for (const auto& entry : fs::recursive_directory_iterator(input)) {
            if (entry.is_regular_file() && entry.path().extension() == ".pdf") {
                files.push_back(entry.path().string());
            }
        }
        std::sort(files.begin(), files.end());
    } else {
        files.push_back(input);
    }
    std::string blob;
    size_t failures = 0;
    for (const auto& file : files) {
        auto bytes = read_file(file);
        json j;
        j["file"] = file;
        // Pipeline corpora name payloads corpus/<lang>/<sha256(url)>.pdf, so
        // the stem keys reports back to their URL.
        j["key"] = fs::path(file).stem().string();
        if (!bytes) {
            j["error"] = "unreadable";
            ++failures;
        } else {
            std::string key = sha256_hex(*bytes);
            auto parsed = pdf::Document::parse(std::move(*bytes));
            if (!parsed.ok()) {
                j["error"] = parsed.error.kind == pdf::PdfErrorKind::encrypted ? "encrypted"
                             : parsed.error.kind == pdf::PdfErrorKind::no_pages ? "no_pages"
                                                                                : "unparseable";
                ++failures;
            } else {
                pdf::ScanReport r = pdf::scan(*parsed.doc);
                j["sha256"] = key;
                j["visible_text_len"] = r.visible_text_len;
                j["hidden_text_len"] = r.hidden_text_len;
                j["image_count"] = r.image_count;
                j["page_count"] = r.page_count;
                j["version"] = r.version;
                if (r.creation_year) j["creation_year"] = *r.creation_year;
                if (r.raw_creation_year) j["raw_creation_year"] = *r.raw_creation_year;
                j["creator_vendor"] = r.creator_vendor;
                j["born_digital"] = pdf::classify_born_digital(r);
            }
        }
        blob += j.dump();
        blob += '\n';
    }
    std::cerr << "scanned=" << files.size() << " failures=" << failures << "\n";
    return write_or_fail(out, blob);
}

int cmd_extract_text(const std::string& input, const std::string& out_dir) {
    std::vector<std::string> files;
    if (fs::is_directory(input)) {
        for (const auto& entry : fs::recursive_directory_iterator(input)) {
            if (entry.is_regular_file() && entry.path().extension() == ".pdf") {
                files.push_back(entry.path().string());
            }
        }
        std::sort(files.begin(), files.end());
    } else {
        files.push_back(input);
    }
    fs::create_directories(out_dir);
    size_t done = 0;
    for (const auto& file : files) {
        auto bytes = read_file(file);
        if (!bytes) continue;
        auto parsed = pdf::Document::parse(std::move(*bytes));
        if (!parsed.ok()) continue;
        auto pages = extract_tokens(*parsed.doc);
        std::string blob;
        for (const auto& page : pages) {
            blob += page_text_to_json(page);
            blob += '\n';
        }
        std::string name = fs::path(file).stem().string() + ".jsonl";
        if (write_file_atomic(out_dir + "/" + name, blob)) ++done;
    }
    std::cerr << "extracted=" << done << "/" << files.size() << "\n";
    return done == files.size() ? 0 : 2;
}

int cmd_detect_lang(const std::string& text_dir, const std::string& profiles_path,
                    const std::string& out) {
    auto text = read_file(profiles_path);
    if (!text) {
        std::cerr << "error: cannot read profiles " << profiles_path << "\n";
        return 1;
    }
    auto profiles = profiles_from_json(*text);
    if (!profiles) {
        std::cerr << "error: malformed profiles bundle\n";
        return 1;
    }
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(text_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
            files.push_back(entry.path().string());
        }
    }
    std::sort(files.begin(), files.end());
    std::string blob;
    for (const auto& file : files) {
        std::string doc_text;
        for_each_line(file, [&](std::string_view line) {
            if (trim(line).empty()) return;
            if (auto page = page_text_from_json(line)) {
                if (!doc_text.empty()) doc_text.push_back(' ');
                doc_text += page_plain_text(*page);
            }
        });
        LangVerdict v = detect_language(doc_text, *profiles);
        json j;
        j["file"] = file;
        j["lang"] = std::string(lang_name(v.lang));
        j["confidence"] = v.confidence;
        j["multi_language_suspected"] = v.multi_language_suspected;
        blob += j.dump();
        blob += '\n';
    }
    return write_or_fail(out, blob);
}

int cmd_train_profiles(const std::string& corpus_dir, const std::string& out) {
    std::vector<LanguageProfile> profiles;
    for (LangCode lang : kCorpusLanguages) {
        std::string file = corpus_dir + "/" + std::string(lang_name(lang)) + ".train.txt";
        auto text = read_file(file);
        if (!text) {
            std::cerr << "error: missing training corpus " << file << "\n";
            return 1;
        }
        auto trained = train_profile(*text, lang, fs::path(file).filename().string());
        if (!trained.ok()) {
            std::cerr << "error: " << std::string(lang_name(lang)) << ": " << trained.error
                      << "\n";
            return 1;
        }
        profiles.push_back(std::move(*trained.profile));
    }
    return write_or_fail(out, profiles_to_json(profiles));
}

int cmd_hocr_import(const std::string& input, const std::string& out) {
    auto text = read_file(input);
    if (!text) {
        std::cerr << "error: cannot read " << input << "\n";
        return 1;
    }
    auto pages = import_hocr(*text);
    std::string blob;
    for (const auto& page : pages) {
        blob += page_text_to_json(page);
        blob += '\n';
    }
    return write_or_fail(out, blob);
}

int cmd_stats(const std::string& scans_path, const std::string& tokens_dir,
              const std::string& out_dir) {
    fs::create_directories(out_dir);

    std::vector<pdf::ScanReport> reports;
    if (!scans_path.empty()) {
        for_each_line(scans_path, [&](std::string_view line) {
            if (trim(line).empty()) return;
            json j = json::parse(line, nullptr, false);
            if (j.is_discarded() || j.contains("error")) return;
            pdf::ScanReport r;
            r.visible_text_len = j.value("visible_text_len", 0ull);
            r.hidden_text_len = j.value("hidden_text_len", 0ull);
            r.image_count = j.value("image_count", 0ull);
            r.page_count = j.value("page_count", 0);
            r.version = j.value("version", "");
            if (j.contains("creation_year") && j["creation_year"].is_number_integer()) {
                r.creation_year = j["creation_year"].get<int>();
            }
            r.creator_vendor = j.value("creator_vendor", "");
            reports.push_back(std::move(r));
        });
    }

    std::vector<std::vector<PageText>> documents;
    if (!tokens_dir.empty() && fs::is_directory(tokens_dir)) {
        std::vector<std::string> files;
        for (const auto& entry : fs::directory_iterator(tokens_dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
                files.push_back(entry.path().string());
            }
        }
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            std::vector<PageText> pages;
            for_each_line(file, [&](std::string_view line) {
                if (trim(line).empty()) return;
                if (auto page = page_text_from_json(line)) pages.push_back(std::move(*page));
            });
            if (!pages.empty()) documents.push_back(std::move(pages));
        }
    }

    int rc = 0;
    rc |= write_or_fail(out_dir + "/years.csv", year_histogram(reports).to_csv());
    rc |= write_or_fail(out_dir + "/versions.csv", version_histogram(reports).to_csv());

    WordCountStats wc = word_count_stats(documents);
    rc |= write_or_fail(out_dir + "/words_per_document.csv", wc.per_document.to_csv());
    rc |= write_or_fail(out_dir + "/words_per_page.csv", wc.per_page.to_csv());

    // Line counts, coverage, format classes.
    Histogram lines;
    for (double e = 0; e <= 100; e += 5) lines.bucket_edges.push_back(e);
    lines.bucket_edges.push_back(1e18);
    lines.counts.assign(lines.bucket_edges.size() - 1, 0);
    Histogram coverage;
    for (double e = 0; e <= 1.0001; e += 0.05) coverage.bucket_edges.push_back(e);
    coverage.counts.assign(coverage.bucket_edges.size() - 1, 0);
    uint64_t abc = 0, letter = 0, other_fmt = 0, vertical = 0, horizontal = 0;

    std::vector<PageText> all_pages;
    for (const auto& doc : documents) {
        for (const auto& page : doc) {
            lines.add(page.line_count);
            double cov = page_coverage(page);
            coverage.add(std::min(cov, 0.9999));
            if (page.width > 0 && page.height > 0) {
                FormatClass fc = classify_page_format(page.width, page.height);
                if (fc.series == PaperSeries::abc_series) ++abc;
                else if (fc.series == PaperSeries::letter) ++letter;
                else ++other_fmt;
                if (fc.orientation == Orientation::vertical) ++vertical;
                else ++horizontal;
            }
            all_pages.push_back(page);
        }
    }
    rc |= write_or_fail(out_dir + "/lines_per_page.csv", lines.to_csv());
    rc |= write_or_fail(out_dir + "/coverage.csv", coverage.to_csv());

    json fmt;
    fmt["abc_series"] = abc;
    fmt["letter"] = letter;
    fmt["other"] = other_fmt;
    fmt["vertical"] = vertical;
    fmt["horizontal"] = horizontal;
    rc |= write_or_fail(out_dir + "/formats.json", fmt.dump(2) + "\n");

    HeatmapGrid vgrid = accumulate_heatmap(all_pages, Orientation::vertical);
    HeatmapGrid hgrid = accumulate_heatmap(all_pages, Orientation::horizontal);
    rc |= write_or_fail(out_dir + "/heatmap_vertical.pgm", vgrid.to_pgm());
    rc |= write_or_fail(out_dir + "/heatmap_horizontal.pgm", hgrid.to_pgm());
    rc |= write_or_fail(out_dir + "/heatmap_vertical.json", vgrid.to_json());
    rc |= write_or_fail(out_dir + "/heatmap_horizontal.json", hgrid.to_json());

    std::cerr << "documents=" << documents.size() << " pages=" << all_pages.size()
              << " reports=" << reports.size() << "\n";
    return rc == 0 ? 0 : 1;
}

int cmd_download(const std::string& selected_path, const std::string& workdir,
                 const PipelineConfig& base_cfg) {
    bool ok = false;
    auto candidates = read_candidates(selected_path, &ok);
    if (!ok) {
        std::cerr << "error: cannot read " << selected_path << "\n";
        return 1;
    }
    FetchOptions fopt;
    fopt.timeout_seconds = base_cfg.timeout_seconds;
    fopt.max_retries = base_cfg.retries;
    fopt.max_payload_bytes = base_cfg.max_payload_bytes;

    std::vector<FetchTask> tasks;
    for (const auto& c : candidates) {
        tasks.push_back({c.cdx.url, registrable_domain(c.cdx.url)});
    }
    std::map<std::string, size_t> index_of;
    for (size_t i = 0; i < tasks.size(); ++i) index_of[tasks[i].url] = i;

    fs::create_directories(workdir + "/corpus");
    auto outcomes = run_fetch_pool(
        tasks, base_cfg.concurrency, base_cfg.per_domain_delay_ms,
        [&](const std::string& url) -> FetchOutcome {
            const CandidateLine& c = candidates[index_of.at(url)];
            if (base_cfg.source == "warc") {
                return fetch_from_warc(base_cfg.warc_base, c.cdx.warc_filename,
                                       c.cdx.warc_offset, c.cdx.warc_length, url, fopt);
            }
            FetchOutcome origin = fetch_original(url, fopt);
            if (origin.ok() || base_cfg.source == "origin" || base_cfg.warc_base.empty()) {
                return origin;
            }
            return fetch_from_warc(base_cfg.warc_base, c.cdx.warc_filename, c.cdx.warc_offset,
                                   c.cdx.warc_length, url, fopt);
        });

    std::string blob;
    size_t succeeded = 0;
    for (size_t i = 0; i < candidates.size(); ++i) {
        const auto& c = candidates[i];
        json j;
        j["url"] = c.cdx.url;
        j["lang"] = std::string(lang_name(c.lang));
        if (outcomes[i].ok()) {
            const FetchResult& fr = *outcomes[i].result;
            std::string dir = workdir + "/corpus/" + std::string(lang_name(c.lang));
            fs::create_directories(dir);
            std::string file = dir + "/" + sha256_hex(c.cdx.url) + ".pdf";
            write_file(file, fr.bytes);
            j["path"] = file;
            j["sha256"] = sha256_hex(fr.bytes);
            j["source"] = fr.source == FetchSource::origin ? "origin" : "warc";
            j["truncated"] = fr.truncated;
            j["http_status"] = fr.http_status;
            j["fetched_at"] = fr.fetched_at;
            ++succeeded;
        } else {
            j["error"] = std::string(fetch_error_name(outcomes[i].error.kind));
            j["detail"] = outcomes[i].error.detail;
        }
        blob += j.dump();
        blob += '\n';
    }
    std::cerr << "downloaded=" << succeeded << "/" << candidates.size() << "\n";
    if (write_or_fail(workdir + "/downloads.jsonl", blob) != 0) return 1;
    return succeeded == candidates.size() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PDF corpus construction toolkit: turn web-crawl CDX indexes into a "
                 "balanced, language-identified index of PDF documents"};
    app.require_subcommand(1);

    // extract-links
    auto* links_cmd = app.add_subcommand("extract-links", "Parse CDX-J files into PDF link records");
    std::vector<std::string> cdx_paths;
    std::string links_out = "links.jsonl";
    links_cmd->add_option("--cdx", cdx_paths, "CDX-J input files (plain or .gz)")->required();
    links_cmd->add_option("--out", links_out, "Output JSON-lines file");

    // filter
    auto* filter_cmd = app.add_subcommand("filter", "URL language detection and spam filtering");
    std::string filter_links = "links.jsonl", filter_out = "candidates.jsonl";
    std::string filter_verdicts = "verdicts.jsonl", filter_langmap;
    SpamConfig spam;
    filter_cmd->add_option("--links", filter_links, "Links file from extract-links");
    filter_cmd->add_option("--out", filter_out, "Candidates output");
    filter_cmd->add_option("--verdicts", filter_verdicts, "Domain verdicts output");
    filter_cmd->add_option("--spam-ratio", spam.ratio_threshold, "Spam ratio threshold");
    filter_cmd->add_option("--spam-min-domain-size", spam.min_domain_size,
                           "Minimum domain size for the spam verdict");
    filter_cmd->add_option("--langmap", filter_langmap, "JSON file with TLD->language overrides");

    // balance
    auto* balance_cmd = app.add_subcommand("balance", "Per-domain and per-language balancing");
    std::string bal_in = "candidates.jsonl", bal_out = "selected.jsonl",
                bal_manifest = "selection_manifest.jsonl";
    uint64_t seed = 42, max_per_language = 200000;
    balance_cmd->add_option("--candidates", bal_in, "Candidates file");
    balance_cmd->add_option("--out", bal_out, "Selected records output");
    balance_cmd->add_option("--manifest", bal_manifest, "Audit manifest output");
    balance_cmd->add_option("--seed", seed, "Sampling seed");
    balance_cmd->add_option("--max-per-language", max_per_language, "Language cap");

    // download
    auto* dl_cmd = app.add_subcommand("download", "Fetch selected documents");
    std::string dl_selected = "selected.jsonl", dl_workdir = "work";
    PipelineConfig dl_cfg;
    dl_cmd->add_option("--selected", dl_selected, "Selection file from balance");
    dl_cmd->add_option("--workdir", dl_workdir, "Output directory");
    dl_cmd->add_option("--source", dl_cfg.source, "origin | warc | origin-then-warc");
    dl_cmd->add_option("--warc-base", dl_cfg.warc_base, "WARC store (directory or URL prefix)");
    dl_cmd->add_option("--concurrency", dl_cfg.concurrency, "Concurrent fetches");
    dl_cmd->add_option("--timeout", dl_cfg.timeout_seconds, "Per-request timeout (s)");
    dl_cmd->add_option("--retries", dl_cfg.retries, "Retries for transient errors");
    dl_cmd->add_option("--per-domain-delay-ms", dl_cfg.per_domain_delay_ms,
                       "Cool-down between requests to one domain");

    // scan
    auto* scan_cmd = app.add_subcommand("scan", "Structural scan of PDFs (no OCR)");
    std::string scan_in, scan_out = "scans.jsonl";
    scan_cmd->add_option("--input", scan_in, "PDF file or directory")->required();
    scan_cmd->add_option("--out", scan_out, "Scan reports output");

    // extract-text
    auto* ext_cmd = app.add_subcommand("extract-text", "Token+bbox extraction for born-digital PDFs");
    std::string ext_in, ext_out = "tokens";
    ext_cmd->add_option("--input", ext_in, "PDF file or directory")->required();
    ext_cmd->add_option("--out-dir", ext_out, "Directory for per-document token files");

    // detect-lang
    auto* lang_cmd = app.add_subcommand("detect-lang", "Content-based language identification");
    std::string lang_dir, lang_profiles = "data/profiles.json", lang_out = "languages.jsonl";
    lang_cmd->add_option("--text-dir", lang_dir, "Directory of token JSON-lines files")->required();
    lang_cmd->add_option("--profiles", lang_profiles, "Trained profile bundle");
    lang_cmd->add_option("--out", lang_out, "Verdicts output");

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "Corpus statistics suite");
    std::string stats_scans, stats_tokens, stats_out = "stats";
    stats_cmd->add_option("--scans,--input", stats_scans, "Scan reports JSON-lines");
    stats_cmd->add_option("--tokens-dir", stats_tokens, "Directory of token files");
    stats_cmd->add_option("--out", stats_out, "Output directory");

    // train-profiles
    auto* train_cmd = app.add_subcommand("train-profiles", "Train language profiles from corpora");
    std::string train_dir = "data/lang", train_out = "data/profiles.json";
    train_cmd->add_option("--corpus-dir", train_dir, "Directory with <lang>.train.txt files");
    train_cmd->add_option("--out", train_out, "Profile bundle output");

    // hocr-import
    auto* hocr_cmd = app.add_subcommand("hocr-import", "Convert hOCR output to token JSON-lines");
    std::string hocr_in, hocr_out = "tokens.jsonl";
    hocr_cmd->add_option("--input", hocr_in, "hOCR file")->required();
    hocr_cmd->add_option("--out", hocr_out, "Token output");

    // run
    auto* run_cmd = app.add_subcommand("run", "Run the full pipeline");
    std::string run_config;
    std::vector<std::string> run_cdx;
    std::string run_workdir, run_source, run_warc_base, run_profiles;
    uint64_t run_seed = 0, run_max_per_lang = 0;
    run_cmd->add_option("--config", run_config, "JSON config file")->required();
    run_cmd->add_option("--cdx", run_cdx, "CDX-J input files")->required();
    run_cmd->add_option("--workdir", run_workdir, "Override workdir");
    run_cmd->add_option("--source", run_source, "Override fetch source");
    run_cmd->add_option("--warc-base", run_warc_base, "Override WARC store");
    run_cmd->add_option("--profiles", run_profiles, "Override profiles bundle");
    auto* seed_opt = run_cmd->add_option("--seed", run_seed, "Override sampling seed");
    run_cmd->add_option("--max-per-language", run_max_per_lang, "Override language cap");

    CLI11_PARSE(app, argc, argv);

    if (links_cmd->parsed()) return cmd_extract_links(cdx_paths, links_out);
    if (filter_cmd->parsed()) {
        return cmd_filter(filter_links, filter_out, filter_verdicts, spam, filter_langmap);
    }
    if (balance_cmd->parsed()) {
        return cmd_balance(bal_in, bal_out, bal_manifest, seed, max_per_language);
    }
    if (dl_cmd->parsed()) return cmd_download(dl_selected, dl_workdir, dl_cfg);
    if (scan_cmd->parsed()) return cmd_scan(scan_in, scan_out);
    if (ext_cmd->parsed()) return cmd_extract_text(ext_in, ext_out);
    if (lang_cmd->parsed()) return cmd_detect_lang(lang_dir, lang_profiles, lang_out);
    if (stats_cmd->parsed()) return cmd_stats(stats_scans, stats_tokens, stats_out);
    if (train_cmd->parsed()) return cmd_train_profiles(train_dir, train_out);
    if (hocr_cmd->parsed()) return cmd_hocr_import(hocr_in, hocr_out);
    if (run_cmd->parsed()) {
        ConfigResult cfg = load_config(run_config);
        if (!cfg.ok()) {
            std::cerr << "config error: " << cfg.error << "\n";
            return 1;
        }
        if (!run_workdir.empty()) cfg.config->workdir = run_workdir;
        if (!run_source.empty()) cfg.config->source = run_source;
        if (!run_warc_base.empty()) cfg.config->warc_base = run_warc_base;
        if (!run_profiles.empty()) cfg.config->profiles_path = run_profiles;
        if (seed_opt->count() > 0) cfg.config->seed = run_seed;
        if (run_max_per_lang > 0) cfg.config->max_per_language = run_max_per_lang;

        PipelineResult result = run_pipeline(*cfg.config, run_cdx);
        if (!result.error.empty()) {
            std::cerr << "error: " << result.error << "\n";
        }
        if (!result.summary.empty()) {
            std::cout << format_summary_table(result.summary);
            std::cout << "index: " << result.index_path << "\n";
        }
        return result.exit_code;
    }
    return 0;
}
