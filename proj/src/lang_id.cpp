#include "pdfcorpus/lang_id.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "pdfcorpus/util.hpp"

namespace pdfcorpus {

using nlohmann::json;

namespace {

std::vector<char32_t> to_codepoints(std::string_view utf8) {
    std::vector<char32_t> cps;
    cps.reserve(utf8.size());
    size_t i = 0;
    while (i < utf8.size()) cps.push_back(utf8_next(utf8, i));
    return cps;
}

std::string gram_key(const std::vector<char32_t>& cps, size_t at, size_t n) {
    std::string key;
    for (size_t k = 0; k < n; ++k) utf8_append(key, cps[at + k]);
    return key;
}

struct Scores {
    std::vector<double> per_profile;  // mean per-gram log likelihood
    int best = -1;
    int second = -1;
};

Scores score_text(const std::vector<char32_t>& cps,
                  const std::vector<LanguageProfile>& profiles) {
    Scores s;
    s.per_profile.assign(profiles.size(), 0.0);
    for (size_t p = 0; p < profiles.size(); ++p) {
        const LanguageProfile& prof = profiles[p];
        double total = 0;
        for (size_t n = 1; n <= 3; ++n) {
            if (cps.size() < n) continue;
            double sum = 0;
            size_t count = cps.size() - n + 1;
            const auto& lp = prof.log_probs[n - 1];
            for (size_t i = 0; i < count; ++i) {
                auto it = lp.find(gram_key(cps, i, n));
                sum += it != lp.end() ? it->second : prof.unseen_log_prob[n - 1];
            }
            total += sum / static_cast<double>(count);
        }
        s.per_profile[p] = total / 3.0;
    }
    for (size_t p = 0; p < profiles.size(); ++p) {
        if (s.best < 0 || s.per_profile[p] > s.per_profile[static_cast<size_t>(s.best)]) {
            s.second = s.best;
            s.best = static_cast<int>(p);
        } else if (s.second < 0 ||
                   s.per_profile[p] > s.per_profile[static_cast<size_t>(s.second)]) {
            s.second = static_cast<int>(p);
        }
    }
    return s;
}

}  // namespace

std::string normalize_for_lang_id(std::string_view text) {
    std::string folded = fold_case_utf8(text);
    std::string out;
    out.reserve(folded.size());
    size_t i = 0;
    bool in_space = true;  // also trims leading whitespace
    while (i < folded.size()) {
        char32_t cp = utf8_next(folded, i);
        if (is_space_cp(cp)) {
            if (!in_space) out.push_back(' ');
            in_space = true;
        } else {
            utf8_append(out, cp);
            in_space = false;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

size_t count_alpha_codepoints(std::string_view text) {
    size_t i = 0, n = 0;
    while (i < text.size()) {
        if (is_letter_cp(utf8_next(text, i))) ++n;
    }
    return n;
}

void LanguageProfile::finalize(double smoothing) {
    for (size_t n = 0; n < 3; ++n) {
        log_probs[n].clear();
        double total = static_cast<double>(totals[n]);
        double vocab = static_cast<double>(gram_counts[n].size());
        double denom = total + smoothing * vocab;
        if (denom <= 0) {
            unseen_log_prob[n] = -20.0;
            continue;
        }
        log_probs[n].reserve(gram_counts[n].size());
        for (const auto& [gram, count] : gram_counts[n]) {
            log_probs[n][gram] = std::log((static_cast<double>(count) + smoothing) / denom);
        }
        unseen_log_prob[n] = std::log(smoothing / denom);
    }
}

TrainResult train_profile(std::string_view text, LangCode lang, std::string trained_on,
                          const LangIdOptions& options) {
    std::string norm = normalize_for_lang_id(text);
    std::vector<char32_t> cps = to_codepoints(norm);
    if (cps.size() < 10000) {
        return {std::nullopt, "training corpus too small: " + std::to_string(cps.size()) +
                                  " characters (need 10000)"};
    }
    LanguageProfile prof;
    prof.lang = lang;
    prof.trained_on = std::move(trained_on);
    for (size_t n = 1; n <= 3; ++n) {
        auto& counts = prof.gram_counts[n - 1];
        for (size_t i = 0; i + n <= cps.size(); ++i) {
            ++counts[gram_key(cps, i, n)];
        }
        prof.totals[n - 1] = cps.size() - n + 1;
    }
    prof.finalize(options.smoothing);
    return {std::move(prof), ""};
}

LangVerdict detect_language(std::string_view text, const std::vector<LanguageProfile>& profiles,
                            const LangIdOptions& options) {
    LangVerdict verdict;
    if (profiles.empty()) return verdict;

    std::string norm = normalize_for_lang_id(text);
    if (count_alpha_codepoints(norm) < options.min_alpha_chars) {
        return verdict;  // unknown
    }
    std::vector<char32_t> cps = to_codepoints(norm);

    Scores full = score_text(cps, profiles);
    int full_best = full.best;

    // Chunked pass: disagreement between chunks marks mixed documents.
    std::map<int, size_t> chunk_votes;
    if (cps.size() > 0) {
        size_t chunk_cps = std::max<size_t>(options.chunk_bytes, 64);
        size_t n_chunks = (cps.size() + chunk_cps - 1) / chunk_cps;
        if (n_chunks > 1) {
            for (size_t c = 0; c < n_chunks; ++c) {
                size_t begin = c * chunk_cps;
                size_t len = std::min(chunk_cps, cps.size() - begin);
                std::vector<char32_t> chunk(cps.begin() + static_cast<ptrdiff_t>(begin),
                                            cps.begin() + static_cast<ptrdiff_t>(begin + len));
                std::string chunk_utf8;
                for (char32_t cp : chunk) utf8_append(chunk_utf8, cp);
                if (count_alpha_codepoints(chunk_utf8) < options.min_alpha_chars) continue;
                Scores cs = score_text(chunk, profiles);
                if (cs.best >= 0) ++chunk_votes[cs.best];
            }
        }
    }

    int chosen = full_best;
    if (chunk_votes.size() > 1) {
        verdict.multi_language_suspected = true;
        size_t best_votes = 0;
        int majority = -1;
        for (const auto& [idx, votes] : chunk_votes) {
            if (votes > best_votes) {
                best_votes = votes;
                majority = idx;
            } else if (votes == best_votes) {
                majority = -1;  // tie: fall back to the full-text argmax
            }
        }
        if (majority >= 0) chosen = majority;
    }

    verdict.lang = profiles[static_cast<size_t>(chosen)].lang;

    // Posterior over profiles, with a length cap so the margin stays visible.
    double n_eff = static_cast<double>(std::min(cps.size(), options.confidence_char_cap));
    double best_score = full.per_profile[static_cast<size_t>(chosen)];
    double denom = 0;
    for (double s : full.per_profile) {
        denom += std::exp((s - best_score) * n_eff);
    }
    verdict.confidence = denom > 0 ? 1.0 / denom : 0.0;
    return verdict;
}

MismatchAction mismatch_filter(LangCode url_lang, const LangVerdict& verdict,
                               double confidence_threshold) {
    if (verdict.lang == LangCode::unknown) return MismatchAction::keep;
    if (url_lang == verdict.lang) return MismatchAction::keep;
    if (verdict.confidence < confidence_threshold) return MismatchAction::keep;
    return MismatchAction::drop_mismatch;
}

std::string profiles_to_json(const std::vector<LanguageProfile>& profiles) {
    json root;
    root["format"] = "pdfcorpus-lang-profiles";
    root["version"] = 1;
    json arr = json::array();
    for (const auto& prof : profiles) {
        json p;
        p["lang"] = std::string(lang_name(prof.lang));
        p["trained_on"] = prof.trained_on;
        json orders = json::array();
        for (size_t n = 0; n < 3; ++n) {
            json o;
            o["n"] = n + 1;
            o["total"] = prof.totals[n];
            json grams = json::object();
            for (const auto& [gram, count] : prof.gram_counts[n]) {
                grams[gram] = count;
            }
            o["grams"] = std::move(grams);
            orders.push_back(std::move(o));
        }
        p["orders"] = std::move(orders);
        arr.push_back(std::move(p));
    }
    root["profiles"] = std::move(arr);
    return root.dump();
}

std::optional<std::vector<LanguageProfile>> profiles_from_json(std::string_view json_text,
                                                               const LangIdOptions& options) {
    json root = json::parse(json_text, nullptr, false);
    if (root.is_discarded() || !root.is_object()) return std::nullopt;
    try {
    if (root.value("version", 0) != 1) return std::nullopt;
    if (!root.contains("profiles") || !root["profiles"].is_array()) return std::nullopt;

    std::vector<LanguageProfile> out;
    for (const auto& p : root["profiles"]) {
        LanguageProfile prof;
        auto lang = lang_from_string(p.value("lang", ""));
        if (!lang) return std::nullopt;
        prof.lang = *lang;
        prof.trained_on = p.value("trained_on", "");
        if (!p.contains("orders") || !p["orders"].is_array()) return std::nullopt;
        for (const auto& o : p["orders"]) {
            size_t n = o.value("n", 0);
            if (n < 1 || n > 3) return std::nullopt;
            prof.totals[n - 1] = o.value("total", 0ull);
            if (!o.contains("grams") || !o["grams"].is_object()) return std::nullopt;
            for (auto it = o["grams"].begin(); it != o["grams"].end(); ++it) {
                prof.gram_counts[n - 1][it.key()] = it.value().get<uint64_t>();
            }
        }
        prof.finalize(options.smoothing);
        out.push_back(std::move(prof));
    }
    return out;
    } catch (const json::exception&) {
        return std::nullopt;
    }
}

}  // namespace pdfcorpus
