#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdfcorpus/cdx.hpp"
#include "pdfcorpus/lang.hpp"

namespace pdfcorpus {

// Per-domain document cap for one language: en 1, de 2, everything else 3.
// Throws std::invalid_argument for the sentinels.
int domain_cap(LangCode lang);

// Reproducible subset of one (domain, language) group: records ranked by
// keyed_rank(seed, url), smallest ranks kept. Input order does not matter.
std::vector<CdxRecord> select_per_domain(const std::vector<CdxRecord>& records, LangCode lang,
                                         uint64_t seed);

// Same ranked selection applied across a whole language pool with an explicit
// cap. No-op when the pool is already small enough.
std::vector<CdxRecord> cap_language(const std::vector<CdxRecord>& records, LangCode lang,
                                    uint64_t max_docs, uint64_t seed);

struct SelectionEntry {
    std::string url;
    std::string domain;
    LangCode lang = LangCode::unknown;
    bool kept = false;
    std::string reason;  // "kept", "domain_cap", "language_cap"
};

struct BalanceResult {
    std::vector<CdxRecord> selected;
    std::vector<SelectionEntry> manifest;
};

// Full balancing for one language: group by registrable domain, apply the
// per-domain cap, then the language-wide cap.
BalanceResult balance_language(const std::vector<CdxRecord>& records, LangCode lang,
                               uint64_t max_docs, uint64_t seed);

}  // namespace pdfcorpus
