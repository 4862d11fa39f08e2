#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pdfcorpus/cdx.hpp"
#include "pdfcorpus/lang.hpp"

namespace pdfcorpus {

struct SpamConfig {
    double ratio_threshold = 0.5;
    uint64_t min_domain_size = 10;
};

// Aggregate spam judgement for one registrable domain.
struct DomainVerdict {
    std::string domain;
    uint64_t url_count = 0;
    uint64_t suspicious_count = 0;
    double spam_ratio = 0.0;
    bool is_spam = false;
};

// Optional ccTLD-to-language overrides layered on top of the builtin table,
// e.g. {"dev": "en"}. Keys are TLDs without the dot.
using LangMap = std::map<std::string, LangCode>;

// Preliminary language from the URL alone: explicit lang markers in the path
// or query win over the ccTLD mapping.
LangCode detect_url_language(std::string_view url, const LangMap& overrides = {});

// Spam slug heuristic over the final path segment, extension stripped:
// lowercase letters and hyphens only, >= 4 hyphen-separated tokens, >= 30
// characters in total.
bool is_suspicious_url(std::string_view url);

// Streaming aggregation behind judge_domains: observe every record (first
// pass), then read the verdict map and filter (second pass).
class DomainJudge {
  public:
    explicit DomainJudge(const SpamConfig& config) : config_(config) {}
    void observe(const std::string& url);
    std::map<std::string, DomainVerdict> finish() const;

  private:
    SpamConfig config_;
    std::map<std::string, DomainVerdict> verdicts_;
};

std::map<std::string, DomainVerdict> judge_domains(const std::vector<CdxRecord>& records,
                                                   const SpamConfig& config);

// Records whose registrable domain was judged spam are removed.
std::vector<CdxRecord> drop_spam_domains(const std::vector<CdxRecord>& records,
                                         const std::map<std::string, DomainVerdict>& verdicts);

}  // namespace pdfcorpus
