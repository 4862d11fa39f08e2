#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace pdfcorpus {

// One decompressed WARC record: WARC headers, then (for response records) the
// embedded HTTP response split into status/headers/body.
struct WarcRecord {
    std::string warc_type;
    std::map<std::string, std::string> warc_headers;  // keys lowercased
    bool warc_truncated = false;

    int http_status = 0;
    std::map<std::string, std::string> http_headers;  // keys lowercased
    std::string http_body;
};

// Parses the decompressed bytes of one WARC record. For WARC-Type: response
// the content block must be an HTTP response message; resource records carry
// the payload directly in http_body with http_status = 200.
std::optional<WarcRecord> parse_warc_record(std::string_view bytes);

// Builds a serialized WARC response record (uncompressed). Used by fixtures
// and the warc-export tooling.
std::string build_warc_response(std::string_view target_uri, std::string_view http_headers,
                                std::string_view body, std::string_view truncated_reason = "");

}  // namespace pdfcorpus
