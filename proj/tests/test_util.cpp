#include <doctest.h>

#include "pdfcorpus/hash.hpp"
#include "pdfcorpus/url.hpp"
#include "pdfcorpus/util.hpp"

using namespace pdfcorpus;

TEST_CASE("sha256 known vectors") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    // Two-block message.
    CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("keyed rank is stable across calls and sensitive to seed") {
    uint64_t a = keyed_rank(42, "https://example.org/a.pdf");
    CHECK(a == keyed_rank(42, "https://example.org/a.pdf"));
    CHECK(a != keyed_rank(43, "https://example.org/a.pdf"));
}

TEST_CASE("url parsing") {
    auto u = parse_url("https://Sub.Example.ORG:8443/a/b.pdf?x=1&Lang=EN#frag");
    REQUIRE(u.has_value());
    CHECK(u->scheme == "https");
    CHECK(u->host == "sub.example.org");
    CHECK(u->port == 8443);
    CHECK(u->path == "/a/b.pdf");
    CHECK(u->query == "x=1&Lang=EN");
    CHECK(u->last_path_segment() == "b.pdf");
    auto params = u->query_params();
    REQUIRE(params.size() == 2);
    CHECK(params[1].first == "lang");
    CHECK(params[1].second == "EN");

    CHECK_FALSE(parse_url("ftp://example.org/x"));
    CHECK_FALSE(parse_url("not a url"));
    CHECK(parse_url("http://192.0.2.7/x.pdf")->host_is_ip());
    CHECK_FALSE(parse_url("http://example.org/x.pdf")->host_is_ip());
}

TEST_CASE("redirect resolution") {
    auto base = parse_url("http://a.example/dir/page.pdf");
    REQUIRE(base);
    CHECK(url_to_string(*resolve_redirect(*base, "http://b.example/x")) == "http://b.example/x");
    CHECK(url_to_string(*resolve_redirect(*base, "/root.pdf")) == "http://a.example/root.pdf");
    CHECK(url_to_string(*resolve_redirect(*base, "other.pdf")) ==
          "http://a.example/dir/other.pdf");
}

TEST_CASE("utf8 roundtrip and case folding") {
    std::string s = "Grüße ЖУРНАЛ Ωμέγα";
    std::string folded = fold_case_utf8(s);
    CHECK(folded == "grüße журнал ωμέγα");
    CHECK(utf8_length("abc") == 3);
    CHECK(utf8_length("ü") == 1);
}

TEST_CASE("format_count groups digits") {
    CHECK(format_count(0) == "0");
    CHECK(format_count(999) == "999");
    CHECK(format_count(1000) == "1 000");
    CHECK(format_count(1180148) == "1 180 148");
}
