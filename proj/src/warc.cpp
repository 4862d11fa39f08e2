#include "pdfcorpus/warc.hpp"

#include <cstdio>

#include "pdfcorpus/util.hpp"

namespace pdfcorpus {

namespace {

// Header block terminated by an empty line. Returns offset just past it, or
// npos when malformed.
size_t parse_header_block(std::string_view bytes, size_t start,
                          std::map<std::string, std::string>* headers,
                          std::string* first_line) {
    size_t pos = start;
    bool first = true;
    while (pos < bytes.size()) {
        size_t eol = bytes.find('\n', pos);
        if (eol == std::string_view::npos) return std::string_view::npos;
        std::string_view line = bytes.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = eol + 1;
        if (line.empty()) return pos;
        if (first) {
            *first_line = std::string(line);
            first = false;
            continue;
        }
        size_t colon = line.find(':');
        if (colon == std::string_view::npos) continue;
        std::string key = to_lower(trim(line.substr(0, colon)));
        (*headers)[key] = trim(line.substr(colon + 1));
    }
    return std::string_view::npos;
}

}  // namespace

std::optional<WarcRecord> parse_warc_record(std::string_view bytes) {
    WarcRecord rec;
    std::string version_line;
    size_t content_start = parse_header_block(bytes, 0, &rec.warc_headers, &version_line);
    if (content_start == std::string_view::npos) return std::nullopt;
    if (!starts_with(version_line, "WARC/")) return std::nullopt;

    auto type_it = rec.warc_headers.find("warc-type");
    if (type_it == rec.warc_headers.end()) return std::nullopt;
    rec.warc_type = to_lower(type_it->second);
    rec.warc_truncated = rec.warc_headers.count("warc-truncated") != 0;

    // Content block length comes from the WARC Content-Length header; fall
    // back to everything up to the record's trailing CRLFs.
    size_t content_len = bytes.size() - content_start;
    if (auto it = rec.warc_headers.find("content-length"); it != rec.warc_headers.end()) {
        size_t declared = 0;
        if (std::sscanf(it->second.c_str(), "%zu", &declared) == 1 &&
            content_start + declared <= bytes.size()) {
            content_len = declared;
        }
    } else {
        while (content_len >= 2 && bytes[content_start + content_len - 1] == '\n' &&
               bytes[content_start + content_len - 2] == '\r') {
            content_len -= 2;
        }
    }
    std::string_view content = bytes.substr(content_start, content_len);

    if (rec.warc_type == "response") {
        std::string status_line;
        size_t body_start = parse_header_block(content, 0, &rec.http_headers, &status_line);
        if (body_start == std::string_view::npos) return std::nullopt;
        if (!starts_with(status_line, "HTTP/")) return std::nullopt;
        int status = 0;
        size_t sp = status_line.find(' ');
        if (sp != std::string::npos) {
            status = std::atoi(status_line.c_str() + sp + 1);
        }
        if (status == 0) return std::nullopt;
        rec.http_status = status;
        rec.http_body = std::string(content.substr(body_start));
    } else if (rec.warc_type == "resource") {
        rec.http_status = 200;
        rec.http_body = std::string(content);
    } else {
        // revisit/request/metadata records carry no usable payload
        return rec;
    }
    return rec;
}

std::string build_warc_response(std::string_view target_uri, std::string_view http_headers,
                                std::string_view body, std::string_view truncated_reason) {
    std::string http_block;
    http_block += "HTTP/1.1 200 OK\r\n";
    http_block += std::string(http_headers);
    http_block += "Content-Length: " + std::to_string(body.size()) + "\r\n\r\n";
    http_block += std::string(body);

    std::string rec;
    rec += "WARC/1.0\r\n";
    rec += "WARC-Type: response\r\n";
    rec += "WARC-Record-ID: <urn:uuid:00000000-0000-0000-0000-000000000000>\r\n";
    rec += "WARC-Date: 2022-05-01T12:00:00Z\r\n";
    rec += "WARC-Target-URI: " + std::string(target_uri) + "\r\n";
    if (!truncated_reason.empty()) {
        rec += "WARC-Truncated: " + std::string(truncated_reason) + "\r\n";
    }
    rec += "Content-Type: application/http; msgtype=response\r\n";
    rec += "Content-Length: " + std::to_string(http_block.size()) + "\r\n";
    rec += "\r\n";
    rec += http_block;
    rec += "\r\n\r\n";
    return rec;
}

}  // namespace pdfcorpus
