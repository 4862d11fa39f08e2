#include "pdfcorpus/url.hpp"

#include <cctype>

#include "pdfcorpus/util.hpp"

namespace pdfcorpus {

std::string ParsedUrl::last_path_segment() const {
    size_t slash = path.find_last_of('/');
    if (slash == std::string::npos) return path;
    return path.substr(slash + 1);
}

std::vector<std::string> ParsedUrl::path_segments() const {
    std::vector<std::string> out;
    for (auto& seg : split(path, '/')) {
        if (!seg.empty()) out.push_back(seg);
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> ParsedUrl::query_params() const {
    std::vector<std::pair<std::string, std::string>> out;
    if (query.empty()) return out;
    for (auto& kv : split(query, '&')) {
        size_t eq = kv.find('=');
        if (eq == std::string::npos) {
            out.emplace_back(to_lower(kv), "");
        } else {
            out.emplace_back(to_lower(kv.substr(0, eq)), kv.substr(eq + 1));
        }
    }
    return out;
}

bool ParsedUrl::host_is_ip() const {
    if (host.empty()) return false;
    // IPv6 literal.
    if (host.front() == '[' || host.find(':') != std::string::npos) return true;
    // IPv4: four dot-separated numeric labels.
    auto labels = split(host, '.');
    if (labels.size() != 4) return false;
    for (auto& l : labels) {
        if (l.empty() || l.size() > 3) return false;
        for (char c : l) {
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        }
        if (std::stoi(l) > 255) return false;
    }
    return true;
}

std::optional<ParsedUrl> parse_url(std::string_view url) {
    ParsedUrl u;
    size_t scheme_end = url.find("://");
    if (scheme_end == std::string_view::npos) return std::nullopt;
    u.scheme = to_lower(url.substr(0, scheme_end));
    if (u.scheme != "http" && u.scheme != "https") return std::nullopt;

    size_t rest = scheme_end + 3;
    size_t authority_end = url.find_first_of("/?#", rest);
    std::string_view authority =
        url.substr(rest, (authority_end == std::string_view::npos ? url.size() : authority_end) - rest);
    if (authority.empty()) return std::nullopt;

    // Strip userinfo if present.
    size_t at = authority.rfind('@');
    if (at != std::string_view::npos) authority = authority.substr(at + 1);

    if (!authority.empty() && authority.front() == '[') {
        size_t close = authority.find(']');
        if (close == std::string_view::npos) return std::nullopt;
        u.host = to_lower(authority.substr(0, close + 1));
        authority = authority.substr(close + 1);
        if (!authority.empty() && authority.front() == ':') {
            for (char c : authority.substr(1)) {
                if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
            }
            if (authority.size() > 1) u.port = std::stoi(std::string(authority.substr(1)));
        }
    } else {
        size_t colon = authority.rfind(':');
        if (colon != std::string_view::npos) {
            std::string_view port_sv = authority.substr(colon + 1);
            bool numeric = !port_sv.empty();
            for (char c : port_sv) {
                if (!std::isdigit(static_cast<unsigned char>(c))) numeric = false;
            }
            if (!numeric) return std::nullopt;
            if (port_sv.size() > 5) return std::nullopt;
            u.port = std::stoi(std::string(port_sv));
            u.host = to_lower(authority.substr(0, colon));
        } else {
            u.host = to_lower(authority);
        }
    }
    if (u.host.empty()) return std::nullopt;

    if (authority_end == std::string_view::npos) {
        u.path = "/";
        return u;
    }

    std::string_view tail = url.substr(authority_end);
    size_t hash = tail.find('#');
    if (hash != std::string_view::npos) {
        u.fragment = std::string(tail.substr(hash + 1));
        tail = tail.substr(0, hash);
    }
    size_t qmark = tail.find('?');
    if (qmark != std::string_view::npos) {
        u.query = std::string(tail.substr(qmark + 1));
        tail = tail.substr(0, qmark);
    }
    u.path = tail.empty() ? "/" : std::string(tail);
    if (u.path.front() != '/') u.path.insert(u.path.begin(), '/');
    return u;
}

std::optional<ParsedUrl> resolve_redirect(const ParsedUrl& base, std::string_view location) {
    if (location.find("://") != std::string_view::npos) {
        return parse_url(location);
    }
    if (starts_with(location, "//")) {
        return parse_url(base.scheme + ":" + std::string(location));
    }
    ParsedUrl u = base;
    u.query.clear();
    u.fragment.clear();
    if (!location.empty() && location.front() == '/') {
        std::string loc(location);
        size_t q = loc.find('?');
        if (q != std::string::npos) {
            u.query = loc.substr(q + 1);
            loc = loc.substr(0, q);
        }
        u.path = loc;
    } else {
        size_t slash = base.path.find_last_of('/');
        std::string dir = slash == std::string::npos ? "/" : base.path.substr(0, slash + 1);
        std::string loc(location);
        size_t q = loc.find('?');
        if (q != std::string::npos) {
            u.query = loc.substr(q + 1);
            loc = loc.substr(0, q);
        }
        u.path = dir + loc;
    }
    return u;
}

std::string url_to_string(const ParsedUrl& u) {
    std::string out = u.scheme + "://" + u.host;
    if (u.port != 0) out += ":" + std::to_string(u.port);
    out += u.path;
    if (!u.query.empty()) out += "?" + u.query;
    if (!u.fragment.empty()) out += "#" + u.fragment;
    return out;
}

}  // namespace pdfcorpus
