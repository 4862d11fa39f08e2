#pragma once

#include <string>
#include <string_view>
#include <unordered_set>

namespace pdfcorpus {

// Public-suffix matcher over a bundled snapshot of the suffix list. Hosts
// under an unknown TLD fall back to the default rule (the TLD itself is the
// suffix). IP hosts and single-label hosts are returned verbatim.
class PublicSuffixList {
  public:
    // Built-in snapshot; see data/public_suffix_list.dat for the same rules.
    static const PublicSuffixList& builtin();

    explicit PublicSuffixList(std::string_view rules_text);

    std::string registrable_domain(std::string_view host) const;

  private:
    std::unordered_set<std::string> rules_;       // exact suffix rules
    std::unordered_set<std::string> wildcards_;   // "*.foo" stored as "foo"
    std::unordered_set<std::string> exceptions_;  // "!bar.foo" stored as "bar.foo"
};

// Registrable domain of a URL's host using the builtin snapshot; empty string
// when the URL does not parse.
std::string registrable_domain(std::string_view url);

}  // namespace pdfcorpus
