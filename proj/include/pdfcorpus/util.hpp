#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pdfcorpus {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

bool starts_with(std::string_view s, std::string_view prefix);
bool ends_with(std::string_view s, std::string_view suffix);

// Whole-file helpers. read_file returns nullopt when the file cannot be opened.
std::optional<std::string> read_file(const std::string& path);
bool write_file(const std::string& path, std::string_view data);
// Write to path.tmp then rename, so readers never see a partial file.
bool write_file_atomic(const std::string& path, std::string_view data);

// UTF-8 iteration. Decodes one code point starting at byte offset i and
// advances i past it. Invalid sequences decode to U+FFFD one byte at a time.
char32_t utf8_next(std::string_view s, size_t& i);
void utf8_append(std::string& out, char32_t cp);
size_t utf8_length(std::string_view s);

// Case folding for the scripts the toolkit handles (ASCII, Latin-1,
// Latin Extended-A, Greek, Cyrillic). Other code points pass through.
char32_t fold_case(char32_t cp);
std::string fold_case_utf8(std::string_view s);

bool is_letter_cp(char32_t cp);
bool is_space_cp(char32_t cp);

std::string format_count(uint64_t n);  // 1234567 -> "1 234 567"

}  // namespace pdfcorpus
