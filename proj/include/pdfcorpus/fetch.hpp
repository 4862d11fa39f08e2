#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace pdfcorpus {

enum class FetchSource { origin, warc };

struct FetchResult {
    std::string url;
    FetchSource source = FetchSource::origin;
    std::string bytes;
    bool truncated = false;
    int http_status = 0;
    std::string fetched_at;  // UTC, ISO 8601
};

enum class FetchErrorKind {
    dns,
    connect,
    timeout,
    http_4xx,
    http_5xx,
    too_many_redirects,
    oversize,
    range_unsupported,
    bad_gzip,
    bad_warc_record,
    invalid_url,
};

std::string_view fetch_error_name(FetchErrorKind kind);

struct FetchError {
    FetchErrorKind kind = FetchErrorKind::connect;
    int http_status = 0;
    std::string detail;
};

struct FetchOutcome {
    std::optional<FetchResult> result;
    FetchError error;
    bool ok() const { return result.has_value(); }
};

struct FetchOptions {
    double timeout_seconds = 30.0;
    int max_retries = 3;
    int max_redirects = 5;
    uint64_t max_payload_bytes = 512ull << 20;
    int retry_base_delay_ms = 500;
    std::string user_agent = "pdfcorpus-fetch/1.0";
};

// Downloads from the original URL, following up to max_redirects redirects
// and retrying transient failures (connect/timeout/5xx) with exponential
// backoff.
FetchOutcome fetch_original(const std::string& url, const FetchOptions& options = {});

// Extracts one capture from a WARC store. warc_base is either a directory
// holding the WARC files or an http(s) prefix, in which case an HTTP range
// request for exactly [offset, offset+length) is issued. The gzip member is
// inflated, WARC and HTTP headers stripped, and the HTTP body returned.
// truncated is set when the record declares truncation or the body is exactly
// 1 MiB (the crawler's cutoff).
FetchOutcome fetch_from_warc(const std::string& warc_base, const std::string& warc_filename,
                             uint64_t warc_offset, uint64_t warc_length, const std::string& url,
                             const FetchOptions& options = {});

constexpr uint64_t kCrawlTruncationBytes = 1048576;

enum class PayloadStatus {
    ok,
    ok_truncated_no_eof,  // %%EOF missing but the payload is a known truncation
    no_magic,
    no_eof,
};

// %PDF- must appear in the first 1024 bytes and %%EOF within the last 2048.
PayloadStatus validate_pdf_payload(std::string_view bytes, bool truncated = false);

// Politeness state machine: at most one in-flight request per registrable
// domain, a configurable cool-down between requests to the same domain, and a
// global in-flight bound. Pure bookkeeping over caller-supplied clocks so it
// can be driven by a fake clock in tests; FetchPool drives it with real time.
class FetchScheduler {
  public:
    struct Limits {
        int max_global_inflight = 8;
        int64_t per_domain_delay_ms = 0;
    };

    explicit FetchScheduler(Limits limits) : limits_(limits) {}

    void enqueue(uint64_t id, const std::string& domain);

    // Picks the next task allowed to start at now_ms and marks it in flight.
    std::optional<uint64_t> next_ready(int64_t now_ms);

    // Earliest time a queued task could become startable, or -1 when nothing
    // is queued (or a completion must happen first).
    int64_t next_wakeup_ms(int64_t now_ms) const;

    void on_complete(uint64_t id, int64_t now_ms);

    size_t pending() const { return fifo_.size(); }
    size_t inflight() const { return inflight_ids_.size(); }
    bool idle() const { return fifo_.empty() && inflight_ids_.empty(); }

  private:
    Limits limits_;
    std::deque<uint64_t> fifo_;
    std::unordered_map<uint64_t, std::string> domain_of_;
    std::unordered_set<std::string> busy_domains_;
    std::unordered_map<std::string, int64_t> domain_ready_at_;
    std::unordered_set<uint64_t> inflight_ids_;
};

struct FetchTask {
    std::string url;
    std::string domain;
};

// Runs tasks through worker threads under FetchScheduler constraints and
// returns outcomes in task order.
std::vector<FetchOutcome> run_fetch_pool(
    const std::vector<FetchTask>& tasks, int concurrency, int64_t per_domain_delay_ms,
    const std::function<FetchOutcome(const std::string& url)>& do_fetch);

std::string utc_timestamp_now();

}  // namespace pdfcorpus
