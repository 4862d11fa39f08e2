// Acceptance suite: one criterion per function, one PASS/FAIL line each.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixture_corpus.hpp"
#include "pdf_builder.hpp"
#include "pdfcorpus/cdx.hpp"
#include "pdfcorpus/extract.hpp"
#include "pdfcorpus/fetch.hpp"
#include "pdfcorpus/gzip.hpp"
#include "pdfcorpus/hash.hpp"
#include "pdfcorpus/lang_id.hpp"
#include "pdfcorpus/pdf/document.hpp"
#include "pdfcorpus/pdf/scan.hpp"
#include "pdfcorpus/pipeline.hpp"
#include "pdfcorpus/sampler.hpp"
#include "pdfcorpus/stats.hpp"
#include "pdfcorpus/url_filter.hpp"
#include "pdfcorpus/util.hpp"
#include "pdfcorpus/warc.hpp"

using namespace pdfcorpus;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

std::string tmp_root() {
    std::string dir = std::string(PDFCORPUS_TEST_TMP) + "/acceptance";
    fs::create_directories(dir);
    return dir;
}

// ---------------------------------------------------------------- criterion 1
Outcome born_digital_suite() {
    Outcome out;
    struct Fixture {
        testfx::BuiltPdf built;
        bool expect_born_digital;
    };
    std::vector<Fixture> fixtures;
    std::mt19937_64 rng(1);

    auto lipsum = [&](size_t chars) {
        static const std::string words =
            "lorem ipsum dolor sit amet consectetur adipiscing elit sed do eiusmod tempor";
        std::string text;
        while (text.size() < chars) {
            size_t start = rng() % (words.size() - 10);
            text += words.substr(start, 8) + " ";
        }
        text.resize(chars);
        return text;
    };
    auto text_page = [&](size_t chars, int mode) {
        testfx::PageSpec page;
        std::string text = lipsum(chars);
        size_t per_line = 60;
        int line_no = 0;
        for (size_t at = 0; at < text.size(); at += per_line) {
            page.items.push_back({72, 760 - 16.0 * line_no++, 10,
                                  text.substr(at, per_line), mode, "Helvetica", false});
        }
        return page;
    };

    // 10 pure text documents with more than 100 visible characters.
    for (int i = 0; i < 10; ++i) {
        testfx::PdfSpec spec;
        spec.pages.push_back(text_page(120 + rng() % 2000, 0));
        fixtures.push_back({testfx::build_pdf(spec), true});
    }
    // 5 pure text with at most 100 characters.
    for (int i = 0; i < 5; ++i) {
        testfx::PdfSpec spec;
        spec.pages.push_back(text_page(20 + rng() % 80, 0));
        fixtures.push_back({testfx::build_pdf(spec), false});
    }
    // 5 with images.
    for (int i = 0; i < 5; ++i) {
        testfx::PdfSpec spec;
        auto page = text_page(500, 0);
        page.own_images = 1 + static_cast<int>(rng() % 2);
        spec.pages.push_back(page);
        fixtures.push_back({testfx::build_pdf(spec), false});
    }
    // 5 with hidden-text layers.
    for (int i = 0; i < 5; ++i) {
        testfx::PdfSpec spec;
        auto page = text_page(500, 0);
        auto hidden = text_page(300, 3);
        for (auto& item : hidden.items) page.items.push_back(item);
        spec.pages.push_back(page);
        fixtures.push_back({testfx::build_pdf(spec), false});
    }
    // 5 mixed.
    for (int i = 0; i < 5; ++i) {
        testfx::PdfSpec spec;
        auto page = text_page(50 + rng() % 40, 0);  // short visible text
        if (i % 2 == 0) page.own_images = 1;
        auto hidden = text_page(200, 3);
        for (auto& item : hidden.items) page.items.push_back(item);
        spec.pages.push_back(page);
        fixtures.push_back({testfx::build_pdf(spec), false});
    }

    int correct = 0;
    for (auto& f : fixtures) {
        bool sane = (f.built.visible_chars > 100) == f.expect_born_digital ||
                    f.built.hidden_chars > 0 || f.built.image_count > 0;
        if (!sane) {
            out.detail = "fixture construction does not match its own ground truth";
            return out;
        }
        auto parsed = pdf::Document::parse(f.built.bytes);
        if (!parsed.ok()) {
            out.detail = "fixture failed to parse";
            return out;
        }
        pdf::ScanReport report = pdf::scan(*parsed.doc);
        if (report.visible_text_len != f.built.visible_chars ||
            report.hidden_text_len != f.built.hidden_chars ||
            report.image_count != f.built.image_count) {
            out.detail = "scan counts differ from construction ground truth";
            return out;
        }
        if (pdf::classify_born_digital(report) == f.expect_born_digital) ++correct;
    }
    out.pass = correct == 30;
    out.detail = std::to_string(correct) + "/30 classified correctly";
    return out;
}

// ---------------------------------------------------------------- criterion 2
Outcome balancing_properties() {
    Outcome out;
    std::mt19937_64 rng(2);
    const std::map<LangCode, size_t> caps = {
        {LangCode::en, 1}, {LangCode::de, 2}, {LangCode::pl, 3}, {LangCode::fr, 3}};
    for (int round = 0; round < 1000; ++round) {
        auto lang_it = caps.begin();
        std::advance(lang_it, static_cast<long>(rng() % caps.size()));
        LangCode lang = lang_it->first;
        size_t cap = lang_it->second;

        size_t n = 1 + rng() % 10;
        std::vector<CdxRecord> pool;
        for (size_t i = 0; i < n; ++i) {
            CdxRecord r;
            r.url = "https://host" + std::to_string(round) + ".net/d" + std::to_string(i) +
                    "-" + std::to_string(rng() % 1000) + ".pdf";
            pool.push_back(r);
        }
        uint64_t seed = rng();

        auto picked = select_per_domain(pool, lang, seed);
        if (picked.size() != std::min(cap, n)) {
            out.detail = "cap violated";
            return out;
        }
        auto shuffled = pool;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        auto picked2 = select_per_domain(shuffled, lang, seed);
        for (size_t i = 0; i < picked.size(); ++i) {
            if (picked[i].url != picked2[i].url) {
                out.detail = "not deterministic under permutation";
                return out;
            }
        }
        // Prefix monotonicity across growing caps (1 <= 2 <= 3).
        auto one = select_per_domain(pool, LangCode::en, seed);
        auto two = select_per_domain(pool, LangCode::de, seed);
        auto three = select_per_domain(pool, LangCode::pl, seed);
        for (size_t i = 0; i < one.size(); ++i) {
            if (one[i].url != two[i].url || one[i].url != three[i].url) {
                out.detail = "prefix property violated at cap 1";
                return out;
            }
        }
        for (size_t i = 0; i < two.size(); ++i) {
            if (two[i].url != three[i].url) {
                out.detail = "prefix property violated at cap 2";
                return out;
            }
        }
    }
    out.pass = true;
    out.detail = "1000 random pools: caps, permutation determinism, prefix monotone";
    return out;
}

// ---------------------------------------------------------------- criterion 3
Outcome spam_filtering() {
    Outcome out;
    std::mt19937_64 rng(3);
    std::vector<CdxRecord> records;
    auto slug = [&](int i) {
        std::string tag(1, static_cast<char>('a' + i % 26));
        tag += static_cast<char>('a' + (i / 26) % 26);
        return "cheap-discount-offers-for-everyone-today-" + tag;
    };
    for (int i = 0; i < 100; ++i) {
        CdxRecord r;
        r.url = "https://linkfarm.biz/" + slug(i) + ".pdf";
        records.push_back(r);
    }
    for (int i = 0; i < 100; ++i) {
        CdxRecord r;
        r.url = "https://stadtwerke.de/berichte/jahr" + std::to_string(1920 + i) + ".pdf";
        records.push_back(r);
    }
    // 1k mixed fixture set across many clean domains; a few odd but
    // legitimate names that must NOT be dropped.
    std::vector<std::string> clean_urls;
    for (int i = 0; i < 1000; ++i) {
        std::string host = "firm" + std::to_string(i % 120) + ".org";
        std::string name;
        switch (i % 4) {
            case 0: name = "report-" + std::to_string(2000 + i % 22); break;
            case 1: name = "datasheet_" + std::to_string(i); break;
            case 2: name = "white-paper-series"; break;
            default: name = "Catalog" + std::to_string(i);
        }
        CdxRecord r;
        r.url = "https://" + host + "/" + name + ".pdf";
        clean_urls.push_back(r.url);
        records.push_back(r);
    }

    SpamConfig cfg;  // defaults: ratio 0.5, min size 10
    auto verdicts = judge_domains(records, cfg);
    auto kept = drop_spam_domains(records, verdicts);

    std::set<std::string> kept_urls;
    for (const auto& r : kept) kept_urls.insert(r.url);

    size_t spam_survivors = 0;
    for (const auto& r : records) {
        if (r.url.find("linkfarm.biz") != std::string::npos && kept_urls.count(r.url)) {
            ++spam_survivors;
        }
    }
    size_t normal_kept = 0;
    for (const auto& r : records) {
        if (r.url.find("stadtwerke.de") != std::string::npos && kept_urls.count(r.url)) {
            ++normal_kept;
        }
    }
    size_t false_drops = 0;
    for (const auto& url : clean_urls) {
        if (!kept_urls.count(url)) ++false_drops;
    }
    out.pass = spam_survivors == 0 && normal_kept == 100 && false_drops == 0;
    out.detail = "spam survivors " + std::to_string(spam_survivors) + ", normal kept " +
                 std::to_string(normal_kept) + "/100, false drops " +
                 std::to_string(false_drops) + "/1000";
    return out;
}

// ---------------------------------------------------------------- criterion 4
Outcome cdx_ingest_rate() {
    Outcome out;
    std::string shard = std::string(PDFCORPUS_DATA_DIR) + "/fixtures/cdx_sample.cdxj";
    size_t lines = 0, parsed = 0;
    bool read_ok = for_each_line(shard, [&](std::string_view line) {
        if (trim(line).empty()) return;
        ++lines;
        if (parse_cdx_line(line).ok()) ++parsed;
    });
    if (!read_ok || lines != 1000) {
        out.detail = "bundled shard missing or wrong size";
        return out;
    }
    double rate = static_cast<double>(parsed) / static_cast<double>(lines);

    // Round-trip property over 10k generated records.
    std::mt19937_64 rng(4);
    size_t roundtrip_ok = 0;
    for (int i = 0; i < 10000; ++i) {
        CdxRecord r;
        r.surt_key = "net,host" + std::to_string(i) + ")/f.pdf";
        r.timestamp = "202205" + std::to_string(10 + i % 18) + "1200" +
                      std::to_string(10 + i % 50);
        r.url = "https://host" + std::to_string(i) + ".net/f" + std::to_string(rng() % 97) +
                ".pdf";
        r.mime = i % 2 ? "application/pdf" : "application/pdf; charset=binary";
        r.http_status = (i % 9 == 0) ? 404 : 200;
        r.digest = "D" + std::to_string(rng());
        r.warc_filename = "seg/" + std::to_string(i % 300) + ".warc.gz";
        r.warc_offset = rng() % (1ull << 42);
        r.warc_length = 1 + rng() % (1ull << 21);
        if (i % 11 == 0) r.declared_languages = {"eng"};
        auto back = parse_cdx_line(serialize_cdx_record(r));
        if (back.ok() && *back.record == r) ++roundtrip_ok;
    }

    out.pass = rate >= 0.99 && roundtrip_ok == 10000;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%.1f%% of shard parsed, %zu/10000 round-trips",
                  rate * 100.0, roundtrip_ok);
    out.detail = buf;
    return out;
}

// ---------------------------------------------------------------- criterion 5
Outcome warc_extraction() {
    Outcome out;
    std::string dir = tmp_root() + "/warc";
    fs::create_directories(dir);

    auto pdf = testfx::minimal_pdf("Acceptance WARC payload with enough text to matter");
    std::string record = build_warc_response("https://acc.example/w.pdf",
                                             "Content-Type: application/pdf\r\n", pdf.bytes);
    std::string member = gzip_compress(record);
    std::string blob = std::string(64, '.') + member;
    write_file(dir + "/acc.warc.gz", blob);

    auto got = fetch_from_warc(dir, "acc.warc.gz", 64, member.size(),
                               "https://acc.example/w.pdf");
    bool byte_exact = got.ok() && got.result->bytes == pdf.bytes && !got.result->truncated;

    std::string big(kCrawlTruncationBytes, 'B');
    big.replace(0, 9, "%PDF-1.4\n");
    std::string trunc_record = build_warc_response("https://acc.example/big.pdf",
                                                   "Content-Type: application/pdf\r\n", big);
    std::string trunc_member = gzip_compress(trunc_record);
    write_file(dir + "/big.warc.gz", trunc_member);
    auto trunc = fetch_from_warc(dir, "big.warc.gz", 0, trunc_member.size(),
                                 "https://acc.example/big.pdf");
    bool flagged = trunc.ok() && trunc.result->truncated &&
                   trunc.result->bytes.size() == kCrawlTruncationBytes;

    out.pass = byte_exact && flagged;
    out.detail = std::string(byte_exact ? "byte-exact recovery" : "recovery FAILED") +
                 (flagged ? ", 1 MiB body flagged truncated" : ", truncation flag FAILED");
    return out;
}

// ---------------------------------------------------------------- criterion 6
Outcome text_extraction() {
    Outcome out;
    // Single column, known words per line.
    std::string source =
        "all the leaves settle on the quiet road before winter and the children "
        "count them on the way to school while the baker lights his oven";
    testfx::PdfSpec spec;
    testfx::PageSpec page;
    std::istringstream words(source);
    std::string w, line;
    std::vector<std::string> lines;
    int count = 0;
    while (words >> w) {
        if (!line.empty()) line += " ";
        line += w;
        if (++count % 7 == 0) {
            lines.push_back(line);
            line.clear();
        }
    }
    if (!line.empty()) lines.push_back(line);
    size_t expected_tokens = 0;
    for (const auto& l : lines) {
        expected_tokens += static_cast<size_t>(std::count(l.begin(), l.end(), ' ')) + 1;
        page.items.push_back({72, 740 - 20.0 * (&l - lines.data()), 12, l, 0, "Helvetica",
                              false});
    }
    spec.pages.push_back(page);
    auto built = testfx::build_pdf(spec);
    auto parsed = pdf::Document::parse(built.bytes);
    if (!parsed.ok()) {
        out.detail = "single-column fixture failed to parse";
        return out;
    }
    auto pages = extract_tokens(*parsed.doc);
    bool roundtrip = pages.size() == 1 && page_plain_text(pages[0]) == source;
    bool counts = pages.size() == 1 && pages[0].tokens.size() == expected_tokens &&
                  pages[0].line_count == static_cast<int>(lines.size());
    bool boxes_ok = true;
    for (const Token& t : pages[0].tokens) {
        if (t.bbox.x0 < -1 || t.bbox.y0 < -1 || t.bbox.x1 > 595 + 1 || t.bbox.y1 > 842 + 1) {
            boxes_ok = false;
        }
    }

    // Two columns: all left tokens before all right tokens.
    testfx::PdfSpec two;
    testfx::PageSpec tp;
    for (int i = 0; i < 6; ++i) {
        tp.items.push_back({72, 700 - 24.0 * i, 12, "l" + std::to_string(i), 0, "Helvetica",
                            false});
        tp.items.push_back({360, 700 - 24.0 * i, 12, "r" + std::to_string(i), 0, "Helvetica",
                            false});
    }
    two.pages.push_back(tp);
    auto built2 = testfx::build_pdf(two);
    auto parsed2 = pdf::Document::parse(built2.bytes);
    bool column_major = false;
    if (parsed2.ok()) {
        auto pages2 = extract_tokens(*parsed2.doc);
        if (pages2.size() == 1 && pages2[0].tokens.size() == 12) {
            column_major = true;
            for (int i = 0; i < 6; ++i) {
                if (pages2[0].tokens[static_cast<size_t>(i)].text != "l" + std::to_string(i)) {
                    column_major = false;
                }
                if (pages2[0].tokens[static_cast<size_t>(6 + i)].text !=
                    "r" + std::to_string(i)) {
                    column_major = false;
                }
            }
        }
    }

    out.pass = roundtrip && counts && boxes_ok && column_major;
    out.detail = std::string(roundtrip ? "round-trip exact" : "round-trip FAILED") +
                 (counts ? ", counts match" : ", counts FAILED") +
                 (boxes_ok ? ", boxes in page" : ", boxes FAILED") +
                 (column_major ? ", column-major order" : ", column order FAILED");
    return out;
}

// ---------------------------------------------------------------- criterion 7
Outcome coverage_oracle() {
    Outcome out;
    std::mt19937_64 rng(7);
    Rect pagebox{0, 0, 200, 283};
    double worst = 0;
    for (int round = 0; round < 100; ++round) {
        std::vector<Rect> boxes;
        int n = 1 + static_cast<int>(rng() % 60);
        for (int i = 0; i < n; ++i) {
            double x = static_cast<double>(rng() % 190);
            double y = static_cast<double>(rng() % 270);
            boxes.push_back({x, y, x + 1 + static_cast<double>(rng() % 60),
                             y + 1 + static_cast<double>(rng() % 25)});
        }
        double exact = page_coverage(boxes, pagebox);

        // 1000x1000 rasterization oracle.
        int cells = 1000;
        double dx = pagebox.width() / cells, dy = pagebox.height() / cells;
        uint64_t covered = 0;
        std::vector<Rect> clipped;
        for (const Rect& b : boxes) {
            Rect c = b.intersection(pagebox);
            if (c.valid()) clipped.push_back(c);
        }
        for (int iy = 0; iy < cells; ++iy) {
            double cy = pagebox.y0 + (iy + 0.5) * dy;
            for (int ix = 0; ix < cells; ++ix) {
                double cx = pagebox.x0 + (ix + 0.5) * dx;
                for (const Rect& r : clipped) {
                    if (cx >= r.x0 && cx < r.x1 && cy >= r.y0 && cy < r.y1) {
                        ++covered;
                        break;
                    }
                }
            }
        }
        double raster = static_cast<double>(covered) / (1000.0 * 1000.0);
        worst = std::max(worst, std::abs(exact - raster));
    }
    out.pass = worst < 0.005;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "worst disagreement %.4f pp over 100 sets", worst * 100);
    out.detail = buf;
    return out;
}

// ---------------------------------------------------------------- criterion 8
Outcome page_formats() {
    Outcome out;
    constexpr double kSqrt2 = 1.4142135623730951;
    struct Case {
        double w, h;
        PaperSeries series;
    };
    const Case cases[] = {
        {842, 1191, PaperSeries::abc_series},  // A3
        {595, 842, PaperSeries::abc_series},   // A4
        {420, 595, PaperSeries::abc_series},   // A5
        {612, 792, PaperSeries::letter},
    };
    bool all_ok = true;
    for (const Case& c : cases) {
        auto fc = classify_page_format(c.w, c.h);
        if (fc.series != c.series) all_ok = false;
        if (c.series == PaperSeries::abc_series && std::abs(fc.ratio - kSqrt2) > 0.02) {
            all_ok = false;
        }
        if (fc.orientation != Orientation::vertical) all_ok = false;
    }
    out.pass = all_ok;
    out.detail = all_ok ? "A3/A4/A5 -> ABC within 0.02 of sqrt(2); 612x792 -> LETTER"
                        : "classification mismatch";
    return out;
}

// ---------------------------------------------------------------- criterion 9
Outcome language_id_accuracy() {
    Outcome out;
    std::vector<LanguageProfile> profiles;
    for (LangCode lang : kCorpusLanguages) {
        auto text = testfx::train_text(std::string(lang_name(lang)));
        auto trained = train_profile(text, lang);
        if (!trained.ok()) {
            out.detail = std::string("training failed for ") + std::string(lang_name(lang));
            return out;
        }
        profiles.push_back(std::move(*trained.profile));
    }

    int total = 0, correct = 0;
    std::map<std::string, int> errors;
    for (LangCode lang : kCorpusLanguages) {
        auto snippets = testfx::heldout_lines(std::string(lang_name(lang)));
        if (snippets.size() != 20) {
            out.detail = std::string("expected 20 held-out snippets for ") +
                         std::string(lang_name(lang));
            return out;
        }
        for (const auto& snippet : snippets) {
            ++total;
            auto verdict = detect_language(snippet, profiles);
            if (verdict.lang == lang) {
                ++correct;
            } else {
                errors[std::string(lang_name(lang)) + "->" +
                       std::string(lang_name(verdict.lang))]++;
            }
        }
    }
    double accuracy = static_cast<double>(correct) / total;

    // The documented mismatch case: .ar URL, confidently English content.
    std::string english;
    for (int i = 0; i < 3; ++i) english += testfx::heldout_line("en", i) + " ";
    auto en_verdict = detect_language(english, profiles);
    bool drops = en_verdict.lang == LangCode::en && en_verdict.confidence >= 0.8 &&
                 mismatch_filter(LangCode::ar, en_verdict) == MismatchAction::drop_mismatch;

    out.pass = accuracy >= 0.95 && total == 220 && drops;
    std::ostringstream detail;
    detail << correct << "/" << total << " (" << std::fixed;
    detail.precision(1);
    detail << accuracy * 100 << "%)";
    if (!errors.empty()) {
        detail << " errors:";
        for (auto& [k, v] : errors) detail << " " << k << "x" << v;
    }
    detail << (drops ? "; ar->en mismatch dropped" : "; mismatch NOT dropped");
    out.detail = detail.str();
    return out;
}

// --------------------------------------------------------------- criterion 10
Outcome end_to_end() {
    Outcome out;
    std::string dir = tmp_root() + "/e2e";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto corpus = testfx::build_fixture_corpus(dir + "/input");

    std::vector<LanguageProfile> profiles;
    for (LangCode lang : kCorpusLanguages) {
        auto trained = train_profile(testfx::train_text(std::string(lang_name(lang))), lang);
        if (!trained.ok()) {
            out.detail = "profile training failed";
            return out;
        }
        profiles.push_back(std::move(*trained.profile));
    }
    std::string profiles_path = dir + "/profiles.json";
    write_file(profiles_path, profiles_to_json(profiles));

    PipelineConfig cfg;
    cfg.workdir = dir + "/work";
    cfg.source = "warc";
    cfg.warc_base = dir + "/input";
    cfg.profiles_path = profiles_path;
    cfg.fixed_timestamp = "2022-05-01T12:00:00Z";
    cfg.concurrency = 4;

    auto result = run_pipeline(cfg, {corpus.cdx_path});
    if (!result.error.empty() || result.exit_code != 0) {
        out.detail = "pipeline error: " + result.error;
        return out;
    }

    std::map<std::string, DocumentRecord> index;
    for_each_line(result.index_path, [&](std::string_view line) {
        if (trim(line).empty()) return;
        if (auto rec = document_record_from_json(line)) index[rec->url] = *rec;
    });

    bool conservation = index.size() == corpus.docs.size();
    size_t indexed = 0;
    for (const auto& doc : corpus.docs) {
        auto it = index.find(doc.url);
        if (it == index.end()) {
            conservation = false;
            continue;
        }
        if (it->second.status == DocStatus::indexed) ++indexed;
    }
    bool all_indexed = indexed == corpus.docs.size();

    // Monotone Table-2-shaped summary.
    bool monotone = !result.summary.empty();
    for (const auto& [lang, row] : result.summary) {
        if (row.urls_found < row.after_spam || row.after_spam < row.domain_balanced ||
            row.domain_balanced < row.language_balanced ||
            row.language_balanced < row.downloaded || row.downloaded < row.processed) {
            monotone = false;
        }
    }
    std::string table = format_summary_table(result.summary);
    std::printf("%s", table.c_str());

    // Idempotent resume: byte-identical index.
    auto first_bytes = read_file(result.index_path);
    auto rerun = run_pipeline(cfg, {corpus.cdx_path});
    auto second_bytes = read_file(rerun.index_path);
    bool idempotent = first_bytes && second_bytes && *first_bytes == *second_bytes;

    out.pass = conservation && all_indexed && monotone && idempotent;
    out.detail = std::to_string(indexed) + "/" + std::to_string(corpus.docs.size()) +
                 " indexed" + (conservation ? ", conservation holds" : ", conservation FAILED") +
                 (monotone ? ", summary monotone" : ", summary FAILED") +
                 (idempotent ? ", resume idempotent" : ", resume FAILED");
    return out;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
        double budget_seconds;
    };
    const Criterion criteria[] = {
        {"1 born-digital classifier 30/30", born_digital_suite, 5},
        {"2 balancing properties", balancing_properties, 10},
        {"3 spam filter", spam_filtering, 0},
        {"4 cdx ingest", cdx_ingest_rate, 0},
        {"5 warc extraction", warc_extraction, 0},
        {"6 text extraction", text_extraction, 0},
        {"7 coverage oracle", coverage_oracle, 0},
        {"8 page formats", page_formats, 0},
        {"9 language id", language_id_accuracy, 30},
        {"10 end-to-end run", end_to_end, 60},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                          .count();
        bool in_budget = c.budget_seconds <= 0 || out.seconds < c.budget_seconds;
        bool pass = out.pass && in_budget;
        std::printf("%s criterion %s (%.2fs): %s%s\n", pass ? "PASS" : "FAIL", c.name,
                    out.seconds, out.detail.c_str(),
                    in_budget ? "" : " [over time budget]");
        if (!pass) ++failures;
    }
    if (failures == 0) {
        std::printf("acceptance: all %zu criteria passed\n", std::size(criteria));
        return 0;
    }
    std::printf("acceptance: %d criterion(s) FAILED\n", failures);
    return 1;
}
