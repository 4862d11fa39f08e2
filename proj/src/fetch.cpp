#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "pdfcorpus/fetch.hpp"

#include <netdb.h>

#include <chrono>
#include <condition_variable>
#include <ctime>
#include <fstream>
#include <mutex>
#include <thread>

#include <httplib.h>

#include "pdfcorpus/gzip.hpp"
#include "pdfcorpus/url.hpp"
#include "pdfcorpus/util.hpp"
#include "pdfcorpus/warc.hpp"

namespace pdfcorpus {

std::string_view fetch_error_name(FetchErrorKind kind) {
    switch (kind) {
        case FetchErrorKind::dns: return "dns";
        case FetchErrorKind::connect: return "connect";
        case FetchErrorKind::timeout: return "timeout";
        case FetchErrorKind::http_4xx: return "http_4xx";
        case FetchErrorKind::http_5xx: return "http_5xx";
        case FetchErrorKind::too_many_redirects: return "too_many_redirects";
        case FetchErrorKind::oversize: return "oversize";
        case FetchErrorKind::range_unsupported: return "range_unsupported";
        case FetchErrorKind::bad_gzip: return "bad_gzip";
        case FetchErrorKind::bad_warc_record: return "bad_warc_record";
        case FetchErrorKind::invalid_url: return "invalid_url";
    }
    return "connect";
}

std::string utc_timestamp_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

namespace {

FetchOutcome fail(FetchErrorKind kind, std::string detail, int status = 0) {
    FetchOutcome out;
    out.error = {kind, status, std::move(detail)};
    return out;
}

bool host_resolves(const std::string& host) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    int rc = getaddrinfo(host.c_str(), nullptr, &hints, &res);
    if (res != nullptr) freeaddrinfo(res);
    return rc == 0;
}

struct HttpResponse {
    int status = 0;
    std::string body;
    std::map<std::string, std::string> headers;  // lowercased keys
};

// One HTTP exchange without redirect following. Body size is capped.
FetchOutcome http_get_once(const ParsedUrl& u, const FetchOptions& opt, const char* range_header,
                           HttpResponse* resp) {
    std::string origin = u.scheme + "://" + u.host;
    if (u.port != 0) origin += ":" + std::to_string(u.port);

    httplib::Client cli(origin);
    cli.set_follow_location(false);
    auto timeout_s = static_cast<time_t>(opt.timeout_seconds);
    auto timeout_us = static_cast<time_t>((opt.timeout_seconds - double(timeout_s)) * 1e6);
    cli.set_connection_timeout(timeout_s, timeout_us);
    cli.set_read_timeout(timeout_s, timeout_us);
    cli.set_write_timeout(timeout_s, timeout_us);
#ifdef CPPHTTPLIB_OPENSSL_SUPPORT
    cli.enable_server_certificate_verification(false);
#endif

    httplib::Headers headers = {{"User-Agent", opt.user_agent}, {"Accept", "*/*"}};
    if (range_header != nullptr) headers.emplace("Range", range_header);

    std::string body;
    bool oversized = false;
    std::string target = u.path;
    if (!u.query.empty()) target += "?" + u.query;

    auto res = cli.Get(target, headers, [&](const char* data, size_t len) {
        if (body.size() + len > opt.max_payload_bytes) {
            oversized = true;
            return false;
        }
        body.append(data, len);
        return true;
    });

    if (oversized) {
        return fail(FetchErrorKind::oversize,
                    "payload exceeds " + std::to_string(opt.max_payload_bytes) + " bytes");
    }
    if (!res) {
        switch (res.error()) {
            case httplib::Error::ConnectionTimeout:
            case httplib::Error::Read:
            case httplib::Error::Write:
                return fail(FetchErrorKind::timeout, httplib::to_string(res.error()));
            case httplib::Error::Connection:
            case httplib::Error::SSLConnection:
            case httplib::Error::SSLServerVerification:
            default:
                if (!host_resolves(u.host)) {
                    return fail(FetchErrorKind::dns, "cannot resolve " + u.host);
                }
                return fail(FetchErrorKind::connect, httplib::to_string(res.error()));
        }
    }

    resp->status = res->status;
    resp->body = std::move(body);
    for (const auto& [k, v] : res->headers) {
        resp->headers[to_lower(k)] = v;
    }
    FetchOutcome ok_marker;
    ok_marker.result.emplace();  // presence only; caller fills in fields
    return ok_marker;
}

bool is_redirect(int status) {
    return status == 301 || status == 302 || status == 303 || status == 307 || status == 308;
}

}  // namespace

FetchOutcome fetch_original(const std::string& url, const FetchOptions& options) {
    auto parsed = parse_url(url);
    if (!parsed) return fail(FetchErrorKind::invalid_url, "not an absolute http(s) URL");

    ParsedUrl current = *parsed;
    for (int hop = 0; hop <= options.max_redirects; ++hop) {
        HttpResponse resp;
        FetchOutcome attempt;
        int delay_ms = options.retry_base_delay_ms;
        for (int retry = 0; ; ++retry) {
            attempt = http_get_once(current, options, nullptr, &resp);
            bool transient = false;
            if (!attempt.ok()) {
                transient = attempt.error.kind == FetchErrorKind::connect ||
                            attempt.error.kind == FetchErrorKind::timeout;
            } else if (resp.status >= 500) {
                transient = true;
            }
            if (!transient || retry >= options.max_retries) break;
            std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
            delay_ms *= 2;
        }
        if (!attempt.ok()) return attempt;

        if (is_redirect(resp.status)) {
            auto loc = resp.headers.find("location");
            if (loc == resp.headers.end()) {
                return fail(FetchErrorKind::http_4xx, "redirect without Location", resp.status);
            }
            auto next = resolve_redirect(current, loc->second);
            if (!next) return fail(FetchErrorKind::invalid_url, "bad redirect target");
            current = *next;
            continue;
        }
        if (resp.status >= 500) {
            return fail(FetchErrorKind::http_5xx, "server error", resp.status);
        }
        if (resp.status >= 400 || resp.status < 200 || resp.status >= 300) {
            return fail(FetchErrorKind::http_4xx, "unexpected status", resp.status);
        }

        FetchResult result;
        result.url = url;
        result.source = FetchSource::origin;
        result.bytes = std::move(resp.body);
        result.truncated = false;
        result.http_status = resp.status;
        result.fetched_at = utc_timestamp_now();
        return FetchOutcome{std::move(result), {}};
    }
    return fail(FetchErrorKind::too_many_redirects,
                "more than " + std::to_string(options.max_redirects) + " redirects");
}

FetchOutcome fetch_from_warc(const std::string& warc_base, const std::string& warc_filename,
                             uint64_t warc_offset, uint64_t warc_length, const std::string& url,
                             const FetchOptions& options) {
    if (warc_length == 0) return fail(FetchErrorKind::bad_warc_record, "zero-length record");

    std::string raw;
    bool remote = warc_base.find("://") != std::string::npos;
    if (remote) {
        std::string full = warc_base;
        if (!full.empty() && full.back() != '/') full += '/';
        full += warc_filename;
        auto parsed = parse_url(full);
        if (!parsed) return fail(FetchErrorKind::invalid_url, "bad warc url");
        char range[96];
        std::snprintf(range, sizeof(range), "bytes=%llu-%llu",
                      static_cast<unsigned long long>(warc_offset),
                      static_cast<unsigned long long>(warc_offset + warc_length - 1));
        HttpResponse resp;
        auto attempt = http_get_once(*parsed, options, range, &resp);
        if (!attempt.ok()) return attempt;
        if (resp.status == 200) {
            return fail(FetchErrorKind::range_unsupported, "server ignored Range header");
        }
        if (resp.status != 206) {
            return fail(FetchErrorKind::range_unsupported, "unexpected status", resp.status);
        }
        raw = std::move(resp.body);
    } else {
        std::string path = warc_base;
        if (!path.empty() && path.back() != '/') path += '/';
        path += warc_filename;
        std::ifstream in(path, std::ios::binary);
        if (!in) return fail(FetchErrorKind::connect, "cannot open " + path);
        in.seekg(static_cast<std::streamoff>(warc_offset));
        raw.resize(warc_length);
        in.read(raw.data(), static_cast<std::streamsize>(warc_length));
        if (static_cast<uint64_t>(in.gcount()) != warc_length) {
            return fail(FetchErrorKind::bad_warc_record, "record extends past end of file");
        }
    }

    auto inflated = gunzip_member(raw);
    if (!inflated) return fail(FetchErrorKind::bad_gzip, "corrupt gzip member");

    auto record = parse_warc_record(*inflated);
    if (!record) return fail(FetchErrorKind::bad_warc_record, "unparseable WARC record");
    if (record->warc_type != "response" && record->warc_type != "resource") {
        return fail(FetchErrorKind::bad_warc_record, "record type " + record->warc_type);
    }

    FetchResult result;
    result.url = url;
    result.source = FetchSource::warc;
    result.bytes = std::move(record->http_body);
    result.truncated =
        record->warc_truncated || result.bytes.size() == kCrawlTruncationBytes;
    result.http_status = record->http_status;
    result.fetched_at = utc_timestamp_now();
    return FetchOutcome{std::move(result), {}};
}

PayloadStatus validate_pdf_payload(std::string_view bytes, bool truncated) {
    std::string_view head = bytes.substr(0, std::min<size_t>(bytes.size(), 1024));
    if (head.find("%PDF-") == std::string_view::npos) return PayloadStatus::no_magic;
    size_t tail_len = std::min<size_t>(bytes.size(), 2048);
    std::string_view tail = bytes.substr(bytes.size() - tail_len);
    if (tail.find("%%EOF") == std::string_view::npos) {
        return truncated ? PayloadStatus::ok_truncated_no_eof : PayloadStatus::no_eof;
    }
    return PayloadStatus::ok;
}

void FetchScheduler::enqueue(uint64_t id, const std::string& domain) {
    fifo_.push_back(id);
    domain_of_[id] = domain;
}

std::optional<uint64_t> FetchScheduler::next_ready(int64_t now_ms) {
    if (inflight_ids_.size() >= static_cast<size_t>(limits_.max_global_inflight)) {
        return std::nullopt;
    }
    for (auto it = fifo_.begin(); it != fifo_.end(); ++it) {
        const std::string& domain = domain_of_[*it];
        if (busy_domains_.count(domain) != 0) continue;
        auto ready_it = domain_ready_at_.find(domain);
        if (ready_it != domain_ready_at_.end() && now_ms < ready_it->second) continue;
        uint64_t id = *it;
        fifo_.erase(it);
        busy_domains_.insert(domain);
        inflight_ids_.insert(id);
        return id;
    }
    return std::nullopt;
}

int64_t FetchScheduler::next_wakeup_ms(int64_t now_ms) const {
    if (fifo_.empty()) return -1;
    if (inflight_ids_.size() >= static_cast<size_t>(limits_.max_global_inflight)) return -1;
    int64_t best = -1;
    for (uint64_t id : fifo_) {
        const std::string& domain = domain_of_.at(id);
        if (busy_domains_.count(domain) != 0) continue;  // unblocked by a completion
        int64_t at = now_ms;
        if (auto it = domain_ready_at_.find(domain); it != domain_ready_at_.end()) {
            at = std::max(at, it->second);
        }
        if (best < 0 || at < best) best = at;
    }
    return best;
}

void FetchScheduler::on_complete(uint64_t id, int64_t now_ms) {
    auto it = domain_of_.find(id);
    if (it == domain_of_.end()) return;
    busy_domains_.erase(it->second);
    if (limits_.per_domain_delay_ms > 0) {
        domain_ready_at_[it->second] = now_ms + limits_.per_domain_delay_ms;
    }
    inflight_ids_.erase(id);
    domain_of_.erase(it);
}

std::vector<FetchOutcome> run_fetch_pool(
    const std::vector<FetchTask>& tasks, int concurrency, int64_t per_domain_delay_ms,
    const std::function<FetchOutcome(const std::string& url)>& do_fetch) {
    std::vector<FetchOutcome> outcomes(tasks.size());
    if (tasks.empty()) return outcomes;
    concurrency = std::max(1, concurrency);

    FetchScheduler scheduler({concurrency, per_domain_delay_ms});
    for (size_t i = 0; i < tasks.size(); ++i) {
        scheduler.enqueue(i, tasks[i].domain);
    }

    std::mutex mu;
    std::condition_variable cv;
    auto now_ms = [] {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now().time_since_epoch())
            .count();
    };

    auto worker = [&] {
        std::unique_lock<std::mutex> lock(mu);
        while (true) {
            if (scheduler.idle()) {
                cv.notify_all();
                return;
            }
            auto id = scheduler.next_ready(now_ms());
            if (!id) {
                int64_t wake = scheduler.next_wakeup_ms(now_ms());
                if (scheduler.pending() == 0 && scheduler.inflight() == 0) continue;
                if (wake < 0) {
                    cv.wait(lock);
                } else {
                    cv.wait_for(lock, std::chrono::milliseconds(std::max<int64_t>(1, wake - now_ms())));
                }
                continue;
            }
            lock.unlock();
            FetchOutcome outcome = do_fetch(tasks[*id].url);
            lock.lock();
            outcomes[*id] = std::move(outcome);
            scheduler.on_complete(*id, now_ms());
            cv.notify_all();
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(static_cast<size_t>(concurrency));
    for (int i = 0; i < concurrency; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    return outcomes;
}

}  // namespace pdfcorpus
