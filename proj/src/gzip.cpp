#include "pdfcorpus/gzip.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <vector>

namespace pdfcorpus {

bool looks_gzip(std::string_view data) {
    return data.size() >= 2 && static_cast<unsigned char>(data[0]) == 0x1f &&
           static_cast<unsigned char>(data[1]) == 0x8b;
}

namespace {

std::optional<std::string> inflate_with_bits(std::string_view data, int window_bits,
                                             size_t* consumed, bool concat_members) {
    z_stream strm{};
    if (inflateInit2(&strm, window_bits) != Z_OK) return std::nullopt;

    std::string out;
    std::vector<unsigned char> buf(1 << 16);
    strm.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    strm.avail_in = static_cast<uInt>(data.size());

    int ret = Z_OK;
    while (true) {
        strm.next_out = buf.data();
        strm.avail_out = static_cast<uInt>(buf.size());
        ret = inflate(&strm, Z_NO_FLUSH);
        if (ret != Z_OK && ret != Z_STREAM_END && ret != Z_BUF_ERROR) {
            inflateEnd(&strm);
            return std::nullopt;
        }
        out.append(reinterpret_cast<char*>(buf.data()), buf.size() - strm.avail_out);
        if (ret == Z_STREAM_END) {
            if (concat_members && strm.avail_in > 0) {
                if (inflateReset2(&strm, window_bits) != Z_OK) break;
                continue;
            }
            break;
        }
        if (strm.avail_in == 0 && strm.avail_out != 0) {
            // Truncated stream: surface what decompressed so far only when the
            // caller asked for multi-member tolerance; otherwise fail.
            inflateEnd(&strm);
            return concat_members ? std::optional<std::string>(std::move(out)) : std::nullopt;
        }
        if (ret == Z_BUF_ERROR && strm.avail_out != 0) {
            inflateEnd(&strm);
            return std::nullopt;
        }
    }
    if (consumed != nullptr) *consumed = data.size() - strm.avail_in;
    inflateEnd(&strm);
    return out;
}

}  // namespace

std::optional<std::string> gunzip_member(std::string_view data, size_t* consumed) {
    if (!looks_gzip(data)) return std::nullopt;
    return inflate_with_bits(data, 15 + 16, consumed, false);
}

std::optional<std::string> gunzip_all(std::string_view data) {
    if (!looks_gzip(data)) return std::nullopt;
    return inflate_with_bits(data, 15 + 16, nullptr, true);
}

std::string gzip_compress(std::string_view data) {
    z_stream strm{};
    deflateInit2(&strm, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY);
    std::string out;
    std::vector<unsigned char> buf(1 << 16);
    strm.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    strm.avail_in = static_cast<uInt>(data.size());
    int ret;
    do {
        strm.next_out = buf.data();
        strm.avail_out = static_cast<uInt>(buf.size());
        ret = deflate(&strm, Z_FINISH);
        out.append(reinterpret_cast<char*>(buf.data()), buf.size() - strm.avail_out);
    } while (ret != Z_STREAM_END);
    deflateEnd(&strm);
    return out;
}

std::optional<std::string> zlib_inflate(std::string_view data) {
    auto r = inflate_with_bits(data, 15, nullptr, false);
    if (r) return r;
    return inflate_with_bits(data, -15, nullptr, false);
}

std::string zlib_deflate(std::string_view data) {
    uLongf bound = compressBound(static_cast<uLong>(data.size()));
    std::string out(bound, '\0');
    compress(reinterpret_cast<Bytef*>(out.data()), &bound,
             reinterpret_cast<const Bytef*>(data.data()), static_cast<uLong>(data.size()));
    out.resize(bound);
    return out;
}

bool for_each_line(const std::string& path, const std::function<void(std::string_view)>& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;

    char head[2] = {0, 0};
    in.read(head, 2);
    size_t got = static_cast<size_t>(in.gcount());
    bool gz = got == 2 && looks_gzip(std::string_view(head, 2));
    in.clear();
    in.seekg(0);

    std::string pending;
    auto emit_chunk = [&](std::string_view chunk) {
        size_t start = 0;
        for (size_t i = 0; i < chunk.size(); ++i) {
            if (chunk[i] == '\n') {
                pending.append(chunk.data() + start, i - start);
                if (!pending.empty() && pending.back() == '\r') pending.pop_back();
                fn(pending);
                pending.clear();
                start = i + 1;
            }
        }
        pending.append(chunk.data() + start, chunk.size() - start);
    };

    std::vector<char> inbuf(1 << 16);
    if (!gz) {
        while (in) {
            in.read(inbuf.data(), static_cast<std::streamsize>(inbuf.size()));
            std::streamsize n = in.gcount();
            if (n <= 0) break;
            emit_chunk(std::string_view(inbuf.data(), static_cast<size_t>(n)));
        }
    } else {
        z_stream strm{};
        if (inflateInit2(&strm, 15 + 16) != Z_OK) return false;
        std::vector<unsigned char> outbuf(1 << 16);
        bool ok = true;
        while (in && ok) {
            in.read(inbuf.data(), static_cast<std::streamsize>(inbuf.size()));
            std::streamsize n = in.gcount();
            if (n <= 0) break;
            strm.next_in = reinterpret_cast<Bytef*>(inbuf.data());
            strm.avail_in = static_cast<uInt>(n);
            while (strm.avail_in > 0) {
                strm.next_out = outbuf.data();
                strm.avail_out = static_cast<uInt>(outbuf.size());
                int ret = inflate(&strm, Z_NO_FLUSH);
                if (ret != Z_OK && ret != Z_STREAM_END && ret != Z_BUF_ERROR) {
                    ok = false;
                    break;
                }
                emit_chunk(std::string_view(reinterpret_cast<char*>(outbuf.data()),
                                            outbuf.size() - strm.avail_out));
                if (ret == Z_STREAM_END) {
                    // Shards are often a series of gzip members.
                    if (inflateReset2(&strm, 15 + 16) != Z_OK) {
                        ok = strm.avail_in == 0;
                        break;
                    }
                    if (strm.avail_in == 0) break;
                }
            }
        }
        inflateEnd(&strm);
        if (!ok) return false;
    }
    if (!pending.empty()) {
        if (pending.back() == '\r') pending.pop_back();
        fn(pending);
    }
    return true;
}

}  // namespace pdfcorpus
