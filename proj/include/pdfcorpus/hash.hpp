#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace pdfcorpus {

// 64-bit FNV-1a with an overridable basis.
uint64_t fnv1a64(std::string_view data, uint64_t basis = 0xcbf29ce484222325ull);

// SplitMix64 finalizer; used to derive a hash basis from a seed.
uint64_t splitmix64(uint64_t x);

// Sampling rank used for reproducible selection: FNV-1a over the key bytes
// with basis splitmix64(seed). Stable across platforms and input order.
uint64_t keyed_rank(uint64_t seed, std::string_view key);

// SHA-256 of arbitrary bytes, lowercase hex digest.
std::string sha256_hex(std::string_view data);

}  // namespace pdfcorpus
