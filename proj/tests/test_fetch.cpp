#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <doctest.h>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <map>
#include <mutex>
#include <random>
#include <thread>

#include <httplib.h>

#include "fixture_corpus.hpp"
#include "pdf_builder.hpp"
#include "pdfcorpus/fetch.hpp"
#include "pdfcorpus/gzip.hpp"
#include "pdfcorpus/util.hpp"
#include "pdfcorpus/warc.hpp"

using namespace pdfcorpus;
namespace fs = std::filesystem;

namespace {

std::string tmp_dir() {
    std::string dir = std::string(PDFCORPUS_TEST_TMP) + "/fetch";
    fs::create_directories(dir);
    return dir;
}

struct TestServer {
    httplib::Server server;
    std::thread thread;
    int port = 0;

    explicit TestServer(const std::function<void(httplib::Server&)>& setup) {
        setup(server);
        port = server.bind_to_any_port("127.0.0.1");
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }
    ~TestServer() {
        server.stop();
        thread.join();
    }
    std::string url(const std::string& path) const {
        return "http://127.0.0.1:" + std::to_string(port) + path;
    }
};

}  // namespace

TEST_CASE("payload validation") {
    auto pdf = testfx::minimal_pdf();
    CHECK(validate_pdf_payload(pdf.bytes) == PayloadStatus::ok);
    CHECK(validate_pdf_payload("<html>error page</html>") == PayloadStatus::no_magic);

    std::string no_eof = pdf.bytes.substr(0, pdf.bytes.rfind("%%EOF"));
    CHECK(validate_pdf_payload(no_eof, false) == PayloadStatus::no_eof);
    CHECK(validate_pdf_payload(no_eof, true) == PayloadStatus::ok_truncated_no_eof);
}

TEST_CASE("scheduler: one in-flight per domain, global bound, cool-down") {
    FetchScheduler sched({2, 100});
    sched.enqueue(1, "a.com");
    sched.enqueue(2, "a.com");
    sched.enqueue(3, "b.com");
    sched.enqueue(4, "c.com");

    auto first = sched.next_ready(0);
    REQUIRE(first.has_value());
    CHECK(*first == 1);
    // Same domain blocked; next is b.com.
    auto second = sched.next_ready(0);
    REQUIRE(second.has_value());
    CHECK(*second == 3);
    // Global limit of 2 reached.
    CHECK_FALSE(sched.next_ready(0).has_value());

    sched.on_complete(1, 10);
    // a.com cools down until 110; c.com is free.
    auto third = sched.next_ready(11);
    REQUIRE(third.has_value());
    CHECK(*third == 4);
    sched.on_complete(3, 20);
    CHECK_FALSE(sched.next_ready(50).has_value());  // only task 2 left, domain cooling
    CHECK(sched.next_wakeup_ms(50) == 110);
    auto last = sched.next_ready(110);
    REQUIRE(last.has_value());
    CHECK(*last == 2);
    sched.on_complete(4, 111);
    sched.on_complete(2, 112);
    CHECK(sched.idle());
}

TEST_CASE("scheduler property: domain intervals never overlap") {
    std::mt19937_64 rng(23);
    for (int round = 0; round < 30; ++round) {
        int n = 2 + static_cast<int>(rng() % 20);
        FetchScheduler sched({1 + static_cast<int>(rng() % 4),
                              static_cast<int64_t>(rng() % 3) * 10});
        std::vector<std::string> domain_of(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            domain_of[static_cast<size_t>(i)] = "d" + std::to_string(rng() % 4) + ".com";
            sched.enqueue(static_cast<uint64_t>(i), domain_of[static_cast<size_t>(i)]);
        }
        int64_t now = 0;
        std::map<std::string, int64_t> domain_busy_until;
        std::map<uint64_t, std::string> running;  // id -> domain
        size_t done = 0;
        while (done < static_cast<size_t>(n)) {
            while (auto id = sched.next_ready(now)) {
                const std::string& d = domain_of[static_cast<size_t>(*id)];
                // Politeness: the domain must not be busy at start time.
                CHECK(domain_busy_until[d] <= now);
                running[*id] = d;
            }
            // Finish one random running task after a random duration.
            if (!running.empty()) {
                auto it = running.begin();
                std::advance(it, static_cast<long>(rng() % running.size()));
                int64_t finish = now + 1 + static_cast<int64_t>(rng() % 10);
                domain_busy_until[it->second] = finish;
                sched.on_complete(it->first, finish);
                running.erase(it);
                now = finish;
                ++done;
            } else {
                int64_t wake = sched.next_wakeup_ms(now);
                REQUIRE(wake >= 0);  // otherwise the scheduler starved
                now = wake;
            }
        }
        CHECK(sched.idle());
    }
}

TEST_CASE("fetch pool runs everything exactly once, serialized per domain") {
    std::vector<FetchTask> tasks;
    for (int i = 0; i < 24; ++i) {
        tasks.push_back({"https://d" + std::to_string(i % 3) + ".com/f" + std::to_string(i),
                         "d" + std::to_string(i % 3) + ".com"});
    }
    std::mutex mu;
    std::map<std::string, int> inflight_per_domain;
    std::atomic<int> max_global{0};
    std::atomic<int> global{0};
    auto outcomes = run_fetch_pool(tasks, 4, 0, [&](const std::string& url) {
        std::string domain = url.substr(8, 6);
        {
            std::lock_guard<std::mutex> lock(mu);
            ++inflight_per_domain[domain];
            CHECK(inflight_per_domain[domain] == 1);
        }
        int g = ++global;
        int prev = max_global.load();
        while (g > prev && !max_global.compare_exchange_weak(prev, g)) {
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
        --global;
        {
            std::lock_guard<std::mutex> lock(mu);
            --inflight_per_domain[domain];
        }
        FetchOutcome out;
        out.result.emplace();
        out.result->url = url;
        return out;
    });
    REQUIRE(outcomes.size() == tasks.size());
    for (size_t i = 0; i < outcomes.size(); ++i) {
        REQUIRE(outcomes[i].ok());
        CHECK(outcomes[i].result->url == tasks[i].url);
    }
    CHECK(max_global.load() <= 4);
}

TEST_CASE("origin fetch against a local server") {
    auto pdf = testfx::minimal_pdf();
    std::atomic<int> flaky_hits{0};
    TestServer server([&](httplib::Server& s) {
        s.Get("/ok.pdf", [&](const httplib::Request&, httplib::Response& res) {
            res.set_content(pdf.bytes, "application/pdf");
        });
        s.Get("/redirect", [&](const httplib::Request&, httplib::Response& res) {
            res.set_redirect("/ok.pdf", 302);
        });
        s.Get("/loop", [&](const httplib::Request&, httplib::Response& res) {
            res.set_redirect("/loop", 302);
        });
        s.Get("/flaky", [&](const httplib::Request&, httplib::Response& res) {
            if (flaky_hits.fetch_add(1) < 2) {
                res.status = 503;
            } else {
                res.set_content(pdf.bytes, "application/pdf");
            }
        });
        s.Get("/gone", [&](const httplib::Request&, httplib::Response& res) {
            res.status = 404;
        });
    });

    FetchOptions opt;
    opt.timeout_seconds = 5;
    opt.max_retries = 3;
    opt.retry_base_delay_ms = 1;

    SUBCASE("successful download") {
        auto out = fetch_original(server.url("/ok.pdf"), opt);
        REQUIRE(out.ok());
        CHECK(out.result->bytes == pdf.bytes);
        CHECK(out.result->http_status == 200);
        CHECK(out.result->source == FetchSource::origin);
        CHECK_FALSE(out.result->truncated);
        CHECK(validate_pdf_payload(out.result->bytes) == PayloadStatus::ok);
    }
    SUBCASE("redirect followed") {
        auto out = fetch_original(server.url("/redirect"), opt);
        REQUIRE(out.ok());
        CHECK(out.result->bytes == pdf.bytes);
    }
    SUBCASE("redirect loop stops") {
        auto out = fetch_original(server.url("/loop"), opt);
        REQUIRE_FALSE(out.ok());
        CHECK(out.error.kind == FetchErrorKind::too_many_redirects);
    }
    SUBCASE("404 maps to http_4xx") {
        auto out = fetch_original(server.url("/gone"), opt);
        REQUIRE_FALSE(out.ok());
        CHECK(out.error.kind == FetchErrorKind::http_4xx);
        CHECK(out.error.http_status == 404);
    }
    SUBCASE("5xx retried until success") {
        auto out = fetch_original(server.url("/flaky"), opt);
        REQUIRE(out.ok());
        CHECK(flaky_hits.load() == 3);
    }
    SUBCASE("oversize guard") {
        FetchOptions small = opt;
        small.max_payload_bytes = 64;
        auto out = fetch_original(server.url("/ok.pdf"), small);
        REQUIRE_FALSE(out.ok());
        CHECK(out.error.kind == FetchErrorKind::oversize);
    }
    SUBCASE("unresolvable host is a dns error") {
        auto out = fetch_original("http://no-such-host-pdfcorpus.invalid/x.pdf", opt);
        REQUIRE_FALSE(out.ok());
        CHECK(out.error.kind == FetchErrorKind::dns);
    }
}

TEST_CASE("warc extraction from a local store") {
    std::string dir = tmp_dir();
    auto pdf = testfx::minimal_pdf("WARC roundtrip payload");

    std::string record = build_warc_response("https://w.example/x.pdf",
                                             "Content-Type: application/pdf\r\n", pdf.bytes);
    std::string member = gzip_compress(record);
    // Surround the member with junk so offsets matter.
    std::string blob = std::string(100, 'J') + member + std::string(50, 'K');
    REQUIRE(write_file(dir + "/store.warc.gz", blob));

    SUBCASE("byte-exact body") {
        auto out = fetch_from_warc(dir, "store.warc.gz", 100, member.size(),
                                   "https://w.example/x.pdf");
        REQUIRE(out.ok());
        CHECK(out.result->bytes == pdf.bytes);
        CHECK(out.result->source == FetchSource::warc);
        CHECK_FALSE(out.result->truncated);
        CHECK(out.result->http_status == 200);
    }
    SUBCASE("corrupt gzip") {
        auto out = fetch_from_warc(dir, "store.warc.gz", 90, member.size(),
                                   "https://w.example/x.pdf");
        REQUIRE_FALSE(out.ok());
        CHECK(out.error.kind == FetchErrorKind::bad_gzip);
    }
    SUBCASE("record past end of file") {
        auto out = fetch_from_warc(dir, "store.warc.gz", 100, blob.size(),
                                   "https://w.example/x.pdf");
        REQUIRE_FALSE(out.ok());
        CHECK(out.error.kind == FetchErrorKind::bad_warc_record);
    }
}

TEST_CASE("one-mebibyte body is flagged truncated") {
    std::string dir = tmp_dir();
    std::string body(kCrawlTruncationBytes, 'A');
    std::string head = "%PDF-1.4\n";
    body.replace(0, head.size(), head);
    std::string record =
        build_warc_response("https://t.example/big.pdf", "Content-Type: application/pdf\r\n", body);
    std::string member = gzip_compress(record);
    REQUIRE(write_file(dir + "/trunc.warc.gz", member));
    auto out = fetch_from_warc(dir, "trunc.warc.gz", 0, member.size(),
                               "https://t.example/big.pdf");
    REQUIRE(out.ok());
    CHECK(out.result->bytes.size() == kCrawlTruncationBytes);
    CHECK(out.result->truncated);

    // WARC-Truncated header alone also flags it.
    std::string short_rec = build_warc_response("https://t.example/cut.pdf",
                                                "Content-Type: application/pdf\r\n",
                                                "%PDF-1.4 tiny", "length");
    std::string short_member = gzip_compress(short_rec);
    REQUIRE(write_file(dir + "/cut.warc.gz", short_member));
    auto cut = fetch_from_warc(dir, "cut.warc.gz", 0, short_member.size(),
                               "https://t.example/cut.pdf");
    REQUIRE(cut.ok());
    CHECK(cut.result->truncated);
}

TEST_CASE("warc extraction over http range requests") {
    std::string dir = tmp_dir();
    auto pdf = testfx::minimal_pdf("Range fetched");
    std::string record = build_warc_response("https://r.example/x.pdf",
                                             "Content-Type: application/pdf\r\n", pdf.bytes);
    std::string member = gzip_compress(record);
    std::string blob = std::string(37, 'z') + member;
    REQUIRE(write_file(dir + "/ranged.warc.gz", blob));

    TestServer server([&](httplib::Server& s) {
        REQUIRE(s.set_mount_point("/", dir));
    });
    auto out = fetch_from_warc(server.url(""), "ranged.warc.gz", 37, member.size(),
                               "https://r.example/x.pdf");
    REQUIRE(out.ok());
    CHECK(out.result->bytes == pdf.bytes);
}

TEST_CASE("read timeout maps to a timeout error") {
    TestServer server([&](httplib::Server& s) {
        s.Get("/slow", [&](const httplib::Request&, httplib::Response& res) {
            std::this_thread::sleep_for(std::chrono::milliseconds(2500));
            res.set_content("late", "text/plain");
        });
    });
    FetchOptions opt;
    opt.timeout_seconds = 0.5;
    opt.max_retries = 0;
    auto out = fetch_original(server.url("/slow"), opt);
    REQUIRE_FALSE(out.ok());
    CHECK(out.error.kind == FetchErrorKind::timeout);
}
