#include "pdfcorpus/url_filter.hpp"

#include <cctype>

#include "pdfcorpus/psl.hpp"
#include "pdfcorpus/url.hpp"
#include "pdfcorpus/util.hpp"

namespace pdfcorpus {

namespace {

const std::map<std::string, LangCode>& builtin_tld_map() {
    static const std::map<std::string, LangCode> table = {
        {"pl", LangCode::pl}, {"de", LangCode::de},  {"at", LangCode::de},
        {"fr", LangCode::fr}, {"it", LangCode::it},  {"es", LangCode::es},
        {"nl", LangCode::nl}, {"ru", LangCode::ru},  {"jp", LangCode::ja},
        {"br", LangCode::pt}, {"pt", LangCode::pt},  {"ar", LangCode::ar},
        {"sa", LangCode::ar}, {"eg", LangCode::ar},  {"uk", LangCode::en},
        {"us", LangCode::en}, {"au", LangCode::en},  {"com", LangCode::en},
        {"org", LangCode::en}, {"net", LangCode::en}, {"edu", LangCode::en},
        {"gov", LangCode::en},
    };
    return table;
}

std::optional<LangCode> marker_code(std::string_view value) {
    std::string v = to_lower(trim(value));
    if (v.size() != 2) return std::nullopt;
    if (auto code = lang_from_string(v); code && is_corpus_language(*code)) return code;
    return std::nullopt;
}

}  // namespace

LangCode detect_url_language(std::string_view url, const LangMap& overrides) {
    auto parsed = parse_url(url);
    if (!parsed) return LangCode::unknown;

    // Explicit query marker beats everything: lang=xx / language=xx.
    for (const auto& [key, value] : parsed->query_params()) {
        if (key == "lang" || key == "language") {
            if (auto code = marker_code(value)) return *code;
        }
    }
    // A /xx/ path segment for a known code (last segment is the filename).
    auto segments = parsed->path_segments();
    if (!segments.empty()) segments.pop_back();
    for (const auto& seg : segments) {
        if (auto code = marker_code(seg)) return *code;
    }

    if (parsed->host_is_ip()) return LangCode::unknown;
    auto labels = split(parsed->host, '.');
    if (labels.empty()) return LangCode::unknown;
    std::string tld = labels.back();

    if (auto it = overrides.find(tld); it != overrides.end()) return it->second;
    const auto& table = builtin_tld_map();
    if (auto it = table.find(tld); it != table.end()) return it->second;
    return LangCode::unknown;
}

bool is_suspicious_url(std::string_view url) {
    auto parsed = parse_url(url);
    if (!parsed) return false;
    std::string segment = parsed->last_path_segment();
    size_t dot = segment.find_last_of('.');
    if (dot != std::string::npos) segment.resize(dot);

    if (segment.size() < 30) return false;
    size_t tokens = 1;
    for (char c : segment) {
        if (c == '-') {
            ++tokens;
        } else if (!(c >= 'a' && c <= 'z')) {
            return false;
        }
    }
    if (segment.front() == '-' || segment.back() == '-' ||
        segment.find("--") != std::string::npos) {
        return false;  // empty tokens are not hyphen-separated words
    }
    return tokens >= 4;
}

void DomainJudge::observe(const std::string& url) {
    std::string domain = registrable_domain(url);
    if (domain.empty()) return;
    auto& v = verdicts_[domain];
    v.domain = domain;
    ++v.url_count;
    if (is_suspicious_url(url)) ++v.suspicious_count;
}

std::map<std::string, DomainVerdict> DomainJudge::finish() const {
    auto verdicts = verdicts_;
    for (auto& [domain, v] : verdicts) {
        v.spam_ratio = v.url_count == 0 ? 0.0
                                        : static_cast<double>(v.suspicious_count) /
                                              static_cast<double>(v.url_count);
        v.is_spam =
            v.url_count >= config_.min_domain_size && v.spam_ratio >= config_.ratio_threshold;
    }
    return verdicts;
}

std::map<std::string, DomainVerdict> judge_domains(const std::vector<CdxRecord>& records,
                                                   const SpamConfig& config) {
    DomainJudge judge(config);
    for (const auto& rec : records) judge.observe(rec.url);
    return judge.finish();
}

std::vector<CdxRecord> drop_spam_domains(const std::vector<CdxRecord>& records,
                                         const std::map<std::string, DomainVerdict>& verdicts) {
    std::vector<CdxRecord> out;
    for (const auto& rec : records) {
        std::string domain = registrable_domain(rec.url);
        auto it = verdicts.find(domain);
        if (it != verdicts.end() && it->second.is_spam) continue;
        out.push_back(rec);
    }
    return out;
}

}  // namespace pdfcorpus
