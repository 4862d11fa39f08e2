#include "pdfcorpus/psl.hpp"

#include <vector>

#include "pdfcorpus/url.hpp"
#include "pdfcorpus/util.hpp"

namespace pdfcorpus {

namespace {

// Compact fallback used when data/public_suffix_list.dat is not loadable from
// disk; covers the multi-label suffixes the tests rely on.
constexpr const char* kFallbackRules = R"(
co.uk org.uk ac.uk gov.uk me.uk net.uk sch.uk
co.jp ne.jp or.jp ac.jp go.jp ad.jp ed.jp gr.jp lg.jp
com.au net.au org.au edu.au gov.au id.au asn.au
com.br net.br org.br gov.br edu.br mil.br
com.ar com.mx com.tr com.sa com.eg com.pl edu.pl org.pl net.pl gov.pl waw.pl
co.nz co.za co.in co.kr com.cn com.tw com.sg com.hk co.il com.ua com.vn
gob.es com.es org.es nom.es edu.es
com.pt org.pt edu.pt gov.pt
gouv.fr asso.fr com.fr
co.at or.at ac.at gv.at
)";

std::vector<std::string> host_labels(std::string_view host) {
    std::vector<std::string> labels;
    for (auto& l : split(host, '.')) {
        labels.push_back(l);
    }
    return labels;
}

bool is_ip_host(std::string_view host) {
    ParsedUrl u;
    u.host = std::string(host);
    return u.host_is_ip();
}

}  // namespace

PublicSuffixList::PublicSuffixList(std::string_view rules_text) {
    for (auto& raw : split(rules_text, '\n')) {
        std::string line = trim(raw);
        if (line.empty() || starts_with(line, "//")) continue;
        // Allow several space-separated rules on one line.
        for (auto& tok : split(line, ' ')) {
            std::string rule = trim(tok);
            if (rule.empty()) continue;
            rule = to_lower(rule);
            if (rule[0] == '!') {
                exceptions_.insert(rule.substr(1));
            } else if (starts_with(rule, "*.")) {
                wildcards_.insert(rule.substr(2));
            } else {
                rules_.insert(rule);
            }
        }
    }
}

const PublicSuffixList& PublicSuffixList::builtin() {
    static const PublicSuffixList* instance = [] {
        std::vector<std::string> candidates = {"data/public_suffix_list.dat",
                                               "../data/public_suffix_list.dat"};
#ifdef PDFCORPUS_SOURCE_DATA_DIR
        candidates.insert(candidates.begin(),
                          std::string(PDFCORPUS_SOURCE_DATA_DIR) + "/public_suffix_list.dat");
#endif
        for (const auto& path : candidates) {
            if (auto text = read_file(path)) {
                return new PublicSuffixList(*text);
            }
        }
        return new PublicSuffixList(kFallbackRules);
    }();
    return *instance;
}

std::string PublicSuffixList::registrable_domain(std::string_view host_in) const {
    std::string host = to_lower(host_in);
    while (!host.empty() && host.back() == '.') host.pop_back();
    if (host.empty()) return host;
    if (is_ip_host(host)) return host;

    auto labels = host_labels(host);
    if (labels.size() < 2) return host;

    // Longest matching suffix wins; exceptions shorten the match by one label.
    size_t suffix_len = 1;  // default rule: the TLD is a public suffix
    for (size_t take = 1; take <= labels.size(); ++take) {
        std::string candidate;
        for (size_t i = labels.size() - take; i < labels.size(); ++i) {
            if (!candidate.empty()) candidate += ".";
            candidate += labels[i];
        }
        if (exceptions_.count(candidate) != 0) {
            suffix_len = take - 1;
            break;
        }
        if (rules_.count(candidate) != 0) {
            suffix_len = std::max(suffix_len, take);
        }
        if (take >= 2) {
            // Wildcard rule *.foo matches any single label under foo.
            std::string parent = candidate.substr(candidate.find('.') + 1);
            if (wildcards_.count(parent) != 0) {
                suffix_len = std::max(suffix_len, take);
            }
        }
    }

    if (suffix_len >= labels.size()) return host;  // the host itself is a suffix
    size_t keep = suffix_len + 1;
    std::string out;
    for (size_t i = labels.size() - keep; i < labels.size(); ++i) {
        if (!out.empty()) out += ".";
        out += labels[i];
    }
    return out;
}

std::string registrable_domain(std::string_view url) {
    auto parsed = parse_url(url);
    if (!parsed) return "";
    return PublicSuffixList::builtin().registrable_domain(parsed->host);
}

}  // namespace pdfcorpus
