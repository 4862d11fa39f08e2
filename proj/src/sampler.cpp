#include "pdfcorpus/sampler.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_set>

#include "pdfcorpus/hash.hpp"
#include "pdfcorpus/psl.hpp"

namespace pdfcorpus {

int domain_cap(LangCode lang) {
    if (!is_corpus_language(lang)) {
        throw std::invalid_argument("domain_cap: not a corpus language");
    }
    switch (lang) {
        case LangCode::en: return 1;
        case LangCode::de: return 2;
        default: return 3;
    }
}

namespace {

std::vector<CdxRecord> rank_and_take(const std::vector<CdxRecord>& records, uint64_t seed,
                                     uint64_t limit) {
    std::vector<const CdxRecord*> ranked;
    ranked.reserve(records.size());
    for (const auto& r : records) ranked.push_back(&r);
    std::sort(ranked.begin(), ranked.end(), [seed](const CdxRecord* a, const CdxRecord* b) {
        uint64_t ra = keyed_rank(seed, a->url);
        uint64_t rb = keyed_rank(seed, b->url);
        if (ra != rb) return ra < rb;
        return a->url < b->url;
    });
    if (ranked.size() > limit) ranked.resize(limit);
    std::vector<CdxRecord> out;
    out.reserve(ranked.size());
    for (const CdxRecord* r : ranked) out.push_back(*r);
    return out;
}

}  // namespace

std::vector<CdxRecord> select_per_domain(const std::vector<CdxRecord>& records, LangCode lang,
                                         uint64_t seed) {
    return rank_and_take(records, seed, static_cast<uint64_t>(domain_cap(lang)));
}

std::vector<CdxRecord> cap_language(const std::vector<CdxRecord>& records, LangCode lang,
                                    uint64_t max_docs, uint64_t seed) {
    (void)lang;
    if (records.size() <= max_docs) return records;
    return rank_and_take(records, seed, max_docs);
}

BalanceResult balance_language(const std::vector<CdxRecord>& records, LangCode lang,
                               uint64_t max_docs, uint64_t seed) {
    std::map<std::string, std::vector<CdxRecord>> by_domain;
    std::map<std::string, std::string> domain_of;
    for (const auto& rec : records) {
        std::string domain = registrable_domain(rec.url);
        domain_of[rec.url] = domain;
        by_domain[domain].push_back(rec);
    }

    std::vector<CdxRecord> domain_balanced;
    std::unordered_set<std::string> kept_after_domain;
    for (auto& [domain, group] : by_domain) {
        auto survivors = select_per_domain(group, lang, seed);
        for (auto& rec : survivors) {
            kept_after_domain.insert(rec.url);
            domain_balanced.push_back(std::move(rec));
        }
    }

    auto final_selection = cap_language(domain_balanced, lang, max_docs, seed);
    std::unordered_set<std::string> kept_final;
    for (const auto& rec : final_selection) kept_final.insert(rec.url);

    BalanceResult result;
    result.selected = std::move(final_selection);
    result.manifest.reserve(records.size());
    for (const auto& rec : records) {
        SelectionEntry entry;
        entry.url = rec.url;
        entry.domain = domain_of[rec.url];
        entry.lang = lang;
        if (kept_final.count(rec.url) != 0) {
            entry.kept = true;
            entry.reason = "kept";
        } else if (kept_after_domain.count(rec.url) != 0) {
            entry.reason = "language_cap";
        } else {
            entry.reason = "domain_cap";
        }
        result.manifest.push_back(std::move(entry));
    }
    return result;
}

}  // namespace pdfcorpus
