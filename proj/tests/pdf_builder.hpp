#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace testfx {

// One text run placed at an absolute position. Text is UTF-8 and gets
// converted to WinAnsi bytes; code points outside WinAnsi become '?'.
struct TextItem {
    double x = 72;
    double y = 700;
    double size = 12;
    std::string text;
    int render_mode = 0;  // 3 = invisible
    std::string font = "Helvetica";
    bool zero_alpha = false;  // draw under an ExtGState with ca 0
};

struct PageSpec {
    double width = 595;
    double height = 842;
    int rotate = 0;
    std::vector<TextItem> items;
    int own_images = 0;                  // image XObjects private to this page
    std::vector<int> shared_image_refs;  // indexes into PdfSpec::shared_images
    std::string raw_content;             // extra raw content-stream ops
};

struct PdfSpec {
    std::string version = "1.4";
    std::vector<PageSpec> pages;
    std::string creator;
    std::string producer;
    std::string creation_date;
    int shared_images = 0;       // image objects usable from several pages
    bool use_xref_stream = false;  // modern layout: xref stream
    bool use_object_streams = false;  // pack dict objects into an ObjStm (implies xref stream)
    bool compress_content = false;
    bool encrypted_marker = false;  // trailer carries /Encrypt
    bool ascii_hex_content = false; // content streams via ASCIIHexDecode
};

struct BuiltPdf {
    std::string bytes;
    uint64_t visible_chars = 0;  // ground truth from construction
    uint64_t hidden_chars = 0;
    uint64_t image_count = 0;    // distinct objects + inline occurrences
    size_t xref_offset = 0;      // offset of the xref table/stream start
};

BuiltPdf build_pdf(const PdfSpec& spec);

// UTF-8 to WinAnsi (CP1252) bytes; unmappable code points become '?'.
std::string utf8_to_winansi(const std::string& text);

// Minimal single-page document with one visible line of text.
BuiltPdf minimal_pdf(const std::string& text = "Hello World");

}  // namespace testfx
