#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace pdfcorpus {

bool looks_gzip(std::string_view data);

// Inflates one gzip member starting at the beginning of `data`. Returns the
// decompressed bytes and, via consumed, how many input bytes the member used.
// Returns nullopt on corrupt input.
std::optional<std::string> gunzip_member(std::string_view data, size_t* consumed = nullptr);

// Inflates a whole buffer that may hold several concatenated gzip members.
std::optional<std::string> gunzip_all(std::string_view data);

// Compresses bytes into a single gzip member.
std::string gzip_compress(std::string_view data);

// Raw zlib/deflate streams (PDF FlateDecode). Tries a zlib header first and
// falls back to a headerless deflate stream, which broken PDFs sometimes use.
std::optional<std::string> zlib_inflate(std::string_view data);
std::string zlib_deflate(std::string_view data);

// Streams lines out of a plain or gzip-compressed file without loading it
// whole. Line terminators are stripped. Returns false if the file cannot be
// read or the compressed stream is corrupt.
bool for_each_line(const std::string& path, const std::function<void(std::string_view)>& fn);

}  // namespace pdfcorpus
