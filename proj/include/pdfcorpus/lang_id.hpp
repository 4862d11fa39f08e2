#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pdfcorpus/lang.hpp"

namespace pdfcorpus {

// Character n-gram statistics (n = 1..3) over lowercased, whitespace-collapsed
// text. Log probabilities are additively smoothed and normalized over the
// grams observed in training, so each order sums to one.
struct LanguageProfile {
    LangCode lang = LangCode::unknown;
    std::string trained_on;
    std::array<std::map<std::string, uint64_t>, 3> gram_counts;
    std::array<uint64_t, 3> totals{};

    // Derived at load/train time.
    std::array<std::unordered_map<std::string, double>, 3> log_probs;
    std::array<double, 3> unseen_log_prob{};

    void finalize(double smoothing);
};

struct LangIdOptions {
    double smoothing = 0.5;
    size_t chunk_bytes = 1024;
    size_t min_alpha_chars = 20;
    size_t confidence_char_cap = 200;  // posterior length saturation
};

struct LangVerdict {
    LangCode lang = LangCode::unknown;
    double confidence = 0.0;
    bool multi_language_suspected = false;
};

// Trains a profile; the corpus must have at least 10,000 characters after
// normalization.
struct TrainResult {
    std::optional<LanguageProfile> profile;
    std::string error;
    bool ok() const { return profile.has_value(); }
};
TrainResult train_profile(std::string_view text, LangCode lang, std::string trained_on = "",
                          const LangIdOptions& options = {});

LangVerdict detect_language(std::string_view text, const std::vector<LanguageProfile>& profiles,
                            const LangIdOptions& options = {});

enum class MismatchAction { keep, drop_mismatch };

// Drops a document whose URL language disagrees with a confident content
// verdict; unknown verdicts never drop.
MismatchAction mismatch_filter(LangCode url_lang, const LangVerdict& verdict,
                               double confidence_threshold = 0.8);

// Versioned JSON bundle for shipping trained profiles.
std::string profiles_to_json(const std::vector<LanguageProfile>& profiles);
std::optional<std::vector<LanguageProfile>> profiles_from_json(std::string_view json_text,
                                                               const LangIdOptions& options = {});

// Lowercase/fold and collapse whitespace runs to single spaces.
std::string normalize_for_lang_id(std::string_view text);
size_t count_alpha_codepoints(std::string_view text);

}  // namespace pdfcorpus
