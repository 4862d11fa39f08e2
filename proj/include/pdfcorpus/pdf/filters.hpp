#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "pdfcorpus/pdf/object.hpp"

namespace pdfcorpus::pdf {

struct DecodeResult {
    std::string data;
    bool ok = false;
    bool unsupported_filter = false;  // image codecs we count but never decode
    std::string error;
};

// Applies the stream's /Filter chain (FlateDecode with PNG/TIFF predictors,
// LZWDecode, ASCIIHexDecode, ASCII85Decode, RunLengthDecode) to raw bytes.
// Filter and DecodeParms entries must already be resolved (no indirect refs).
DecodeResult decode_stream(const Dict& stream_dict, std::string_view raw);

// Individual codecs, exposed for tests.
std::optional<std::string> flate_decode(std::string_view data);
std::optional<std::string> lzw_decode(std::string_view data, int early_change);
std::optional<std::string> ascii_hex_decode(std::string_view data);
std::optional<std::string> ascii85_decode(std::string_view data);
std::optional<std::string> run_length_decode(std::string_view data);
std::optional<std::string> apply_predictor(std::string_view data, int predictor, int colors,
                                           int bits_per_component, int columns);

}  // namespace pdfcorpus::pdf
