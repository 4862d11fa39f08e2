#include "pdfcorpus/pdf/filters.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

#include "pdfcorpus/gzip.hpp"

namespace pdfcorpus::pdf {

std::optional<std::string> flate_decode(std::string_view data) {
    return pdfcorpus::zlib_inflate(data);
}

std::optional<std::string> ascii_hex_decode(std::string_view data) {
    std::string out;
    int hi = -1;
    for (char c : data) {
        if (c == '>') break;
        int v;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
        else if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\0') continue;
        else return std::nullopt;
        if (hi < 0) {
            hi = v;
        } else {
            out.push_back(static_cast<char>((hi << 4) | v));
            hi = -1;
        }
    }
    if (hi >= 0) out.push_back(static_cast<char>(hi << 4));
    return out;
}

std::optional<std::string> ascii85_decode(std::string_view data) {
    std::string out;
    uint32_t group = 0;
    int count = 0;
    size_t i = 0;
    // Optional <~ prefix.
    if (data.size() >= 2 && data[0] == '<' && data[1] == '~') i = 2;
    for (; i < data.size(); ++i) {
        char c = data[i];
        if (c == '~') break;
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\0') continue;
        if (c == 'z' && count == 0) {
            out.append(4, '\0');
            continue;
        }
        if (c < '!' || c > 'u') return std::nullopt;
        group = group * 85 + static_cast<uint32_t>(c - '!');
        if (++count == 5) {
            for (int k = 3; k >= 0; --k) out.push_back(static_cast<char>((group >> (8 * k)) & 0xFF));
            group = 0;
            count = 0;
        }
    }
    if (count > 0) {
        if (count == 1) return std::nullopt;
        for (int k = count; k < 5; ++k) group = group * 85 + 84;
        for (int k = 3; k >= 5 - count; --k) {
            out.push_back(static_cast<char>((group >> (8 * k)) & 0xFF));
        }
    }
    return out;
}

std::optional<std::string> run_length_decode(std::string_view data) {
    std::string out;
    size_t i = 0;
    while (i < data.size()) {
        unsigned char len = static_cast<unsigned char>(data[i++]);
        if (len == 128) break;  // EOD
        if (len < 128) {
            size_t n = static_cast<size_t>(len) + 1;
            if (i + n > data.size()) return std::nullopt;
            out.append(data.substr(i, n));
            i += n;
        } else {
            if (i >= data.size()) return std::nullopt;
            out.append(static_cast<size_t>(257 - len), data[i]);
            ++i;
        }
    }
    return out;
}

std::optional<std::string> lzw_decode(std::string_view data, int early_change) {
    constexpr int kClear = 256;
    constexpr int kEod = 257;
    std::vector<std::string> table;
    auto reset_table = [&] {
        table.clear();
        table.reserve(4096);
        for (int i = 0; i < 256; ++i) table.push_back(std::string(1, static_cast<char>(i)));
        table.emplace_back();  // clear
        table.emplace_back();  // eod
    };
    reset_table();

    std::string out;
    int bits = 9;
    uint32_t buffer = 0;
    int buffered = 0;
    std::string prev;
    for (size_t i = 0; i <= data.size(); ++i) {
        if (i < data.size()) {
            buffer = (buffer << 8) | static_cast<unsigned char>(data[i]);
            buffered += 8;
        } else if (buffered < bits) {
            break;
        }
        while (buffered >= bits) {
            int code = static_cast<int>((buffer >> (buffered - bits)) & ((1u << bits) - 1));
            buffered -= bits;
            if (code == kEod) return out;
            if (code == kClear) {
                reset_table();
                bits = 9;
                prev.clear();
                continue;
            }
            std::string entry;
            if (code < static_cast<int>(table.size()) && code != kClear && code != kEod) {
                entry = table[static_cast<size_t>(code)];
                if (entry.empty() && code > kEod) return std::nullopt;
            } else if (code == static_cast<int>(table.size()) && !prev.empty()) {
                entry = prev + prev[0];
            } else {
                return std::nullopt;
            }
            out += entry;
            if (!prev.empty() && table.size() < 4096) {
                table.push_back(prev + entry[0]);
            }
            prev = entry;
            int limit = static_cast<int>(table.size()) + (early_change ? 1 : 0);
            if (limit >= (1 << bits) && bits < 12) ++bits;
        }
    }
    return out;
}

std::optional<std::string> apply_predictor(std::string_view data, int predictor, int colors,
                                           int bits_per_component, int columns) {
    if (predictor <= 1) return std::string(data);
    int bpp = std::max(1, (colors * bits_per_component + 7) / 8);
    size_t row_len = static_cast<size_t>((columns * colors * bits_per_component + 7) / 8);

    if (predictor == 2) {
        // TIFF predictor, 8-bit components only.
        if (bits_per_component != 8) return std::string(data);
        std::string out(data);
        for (size_t r = 0; r + row_len <= out.size(); r += row_len) {
            for (size_t i = static_cast<size_t>(bpp); i < row_len; ++i) {
                out[r + i] = static_cast<char>(static_cast<unsigned char>(out[r + i]) +
                                               static_cast<unsigned char>(out[r + i - bpp]));
            }
        }
        return out;
    }

    // PNG predictors: each row starts with a filter-type byte.
    size_t stride = row_len + 1;
    if (stride == 1) return std::nullopt;
    std::string out;
    std::vector<unsigned char> prev_row(row_len, 0);
    std::vector<unsigned char> row(row_len, 0);
    for (size_t r = 0; r < data.size(); r += stride) {
        unsigned char ft = static_cast<unsigned char>(data[r]);
        size_t avail = std::min(row_len, data.size() - r - 1);
        for (size_t i = 0; i < avail; ++i) row[i] = static_cast<unsigned char>(data[r + 1 + i]);
        for (size_t i = avail; i < row_len; ++i) row[i] = 0;
        for (size_t i = 0; i < row_len; ++i) {
            unsigned char left = i >= static_cast<size_t>(bpp) ? row[i - static_cast<size_t>(bpp)] : 0;
            unsigned char up = prev_row[i];
            unsigned char up_left =
                i >= static_cast<size_t>(bpp) ? prev_row[i - static_cast<size_t>(bpp)] : 0;
            switch (ft) {
                case 0: break;
                case 1: row[i] = static_cast<unsigned char>(row[i] + left); break;
                case 2: row[i] = static_cast<unsigned char>(row[i] + up); break;
                case 3: row[i] = static_cast<unsigned char>(row[i] + ((left + up) >> 1)); break;
                case 4: {
                    int p = left + up - up_left;
                    int pa = std::abs(p - left), pb = std::abs(p - up), pc = std::abs(p - up_left);
                    unsigned char pred = (pa <= pb && pa <= pc) ? left : (pb <= pc ? up : up_left);
                    row[i] = static_cast<unsigned char>(row[i] + pred);
                    break;
                }
                default: return std::nullopt;
            }
        }
        out.append(reinterpret_cast<char*>(row.data()), row_len);
        prev_row = row;
        if (avail < row_len) break;
    }
    return out;
}

namespace {

struct ParmValues {
    int predictor = 1;
    int colors = 1;
    int bpc = 8;
    int columns = 1;
    int early_change = 1;
};

ParmValues read_parms(const Object& parms) {
    ParmValues v;
    if (!parms.is_dict()) return v;
    v.predictor = static_cast<int>(parms.get("Predictor").as_int(1));
    v.colors = static_cast<int>(parms.get("Colors").as_int(1));
    v.bpc = static_cast<int>(parms.get("BitsPerComponent").as_int(8));
    v.columns = static_cast<int>(parms.get("Columns").as_int(1));
    v.early_change = static_cast<int>(parms.get("EarlyChange").as_int(1));
    return v;
}

}  // namespace

DecodeResult decode_stream(const Dict& stream_dict, std::string_view raw) {
    DecodeResult result;

    std::vector<std::string> filters;
    std::vector<Object> parms;
    auto filter_it = stream_dict.find("Filter");
    Object filter_obj = filter_it == stream_dict.end() ? Object() : filter_it->second;
    auto parms_it = stream_dict.find("DecodeParms");
    if (parms_it == stream_dict.end()) parms_it = stream_dict.find("DP");
    Object parms_obj = parms_it == stream_dict.end() ? Object() : parms_it->second;

    if (filter_obj.is_name()) {
        filters.push_back(filter_obj.name());
        parms.push_back(parms_obj);
    } else if (filter_obj.is_array()) {
        for (size_t i = 0; i < filter_obj.array().size(); ++i) {
            filters.push_back(filter_obj.array()[i].name());
            if (parms_obj.is_array() && i < parms_obj.array().size()) {
                parms.push_back(parms_obj.array()[i]);
            } else {
                parms.push_back(Object());
            }
        }
    }

    std::string data(raw);
    for (size_t i = 0; i < filters.size(); ++i) {
        const std::string& f = filters[i];
        ParmValues pv = read_parms(parms[i]);
        std::optional<std::string> decoded;
        if (f == "FlateDecode" || f == "Fl") {
            decoded = flate_decode(data);
        } else if (f == "LZWDecode" || f == "LZW") {
            decoded = lzw_decode(data, pv.early_change);
        } else if (f == "ASCIIHexDecode" || f == "AHx") {
            decoded = ascii_hex_decode(data);
        } else if (f == "ASCII85Decode" || f == "A85") {
            decoded = ascii85_decode(data);
        } else if (f == "RunLengthDecode" || f == "RL") {
            decoded = run_length_decode(data);
        } else if (f == "Crypt") {
            result.error = "encrypted stream";
            return result;
        } else {
            // DCTDecode / JPXDecode / JBIG2Decode / CCITTFaxDecode: image
            // codecs we deliberately never decode.
            result.unsupported_filter = true;
            result.data = std::move(data);
            result.ok = true;
            return result;
        }
        if (!decoded) {
            result.error = "filter " + f + " failed";
            return result;
        }
        data = std::move(*decoded);
        if ((f == "FlateDecode" || f == "Fl" || f == "LZWDecode" || f == "LZW") &&
            pv.predictor > 1) {
            auto predicted = apply_predictor(data, pv.predictor, pv.colors, pv.bpc, pv.columns);
            if (!predicted) {
                result.error = "predictor failed";
                return result;
            }
            data = std::move(*predicted);
        }
    }
    result.data = std::move(data);
    result.ok = true;
    return result;
}

}  // namespace pdfcorpus::pdf
