#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace pdfcorpus {

// The 11 corpus languages plus two sentinels.
enum class LangCode {
    ar,
    de,
    en,
    es,
    fr,
    it,
    ja,
    nl,
    pl,
    pt,
    ru,
    other,
    unknown,
};

constexpr std::array<LangCode, 11> kCorpusLanguages = {
    LangCode::ar, LangCode::de, LangCode::en, LangCode::es, LangCode::fr, LangCode::it,
    LangCode::ja, LangCode::nl, LangCode::pl, LangCode::pt, LangCode::ru};

inline std::string_view lang_name(LangCode code) {
    switch (code) {
        case LangCode::ar: return "ar";
        case LangCode::de: return "de";
        case LangCode::en: return "en";
        case LangCode::es: return "es";
        case LangCode::fr: return "fr";
        case LangCode::it: return "it";
        case LangCode::ja: return "ja";
        case LangCode::nl: return "nl";
        case LangCode::pl: return "pl";
        case LangCode::pt: return "pt";
        case LangCode::ru: return "ru";
        case LangCode::other: return "other";
        case LangCode::unknown: return "unknown";
    }
    return "unknown";
}

inline std::optional<LangCode> lang_from_string(std::string_view s) {
    for (LangCode code : kCorpusLanguages) {
        if (lang_name(code) == s) return code;
    }
    if (s == "other") return LangCode::other;
    if (s == "unknown") return LangCode::unknown;
    return std::nullopt;
}

inline bool is_corpus_language(LangCode code) {
    return code != LangCode::other && code != LangCode::unknown;
}

}  // namespace pdfcorpus
