#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pdfcorpus {

// Minimal absolute http/https URL decomposition. Host is lowercased; path
// keeps its original bytes (percent escapes untouched).
struct ParsedUrl {
    std::string scheme;
    std::string host;
    int port = 0;  // 0 = scheme default
    std::string path;     // always starts with '/'
    std::string query;    // without '?', may be empty
    std::string fragment; // without '#', may be empty

    int effective_port() const { return port != 0 ? port : (scheme == "https" ? 443 : 80); }

    // Final path segment, or empty for directory-like paths.
    std::string last_path_segment() const;
    std::vector<std::string> path_segments() const;
    // Query decomposed into key=value pairs; keys lowercased.
    std::vector<std::pair<std::string, std::string>> query_params() const;

    bool host_is_ip() const;
};

std::optional<ParsedUrl> parse_url(std::string_view url);

// Resolves a possibly-relative redirect target against a base URL.
std::optional<ParsedUrl> resolve_redirect(const ParsedUrl& base, std::string_view location);

std::string url_to_string(const ParsedUrl& u);

}  // namespace pdfcorpus
