#include "dom2/jsonl.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <sstream>

#include "dom2/errors.hpp"

namespace dom2 {

namespace {

bool has_gz_suffix(const std::string& path) {
    return path.size() >= 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
}

std::string gzip_compress(const std::string& data) {
    z_stream zs{};
    if (deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 15 + 16, 8,
                     Z_DEFAULT_STRATEGY) != Z_OK)
        throw IoError("gzip: deflateInit2 failed");
    gz_header hdr{};
    hdr.time = 0;
    hdr.os = 3; // fixed so regeneration is byte-identical
    deflateSetHeader(&zs, &hdr);
    std::string out;
    out.resize(deflateBound(&zs, data.size()));
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    zs.avail_in = static_cast<uInt>(data.size());
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = deflate(&zs, Z_FINISH);
    deflateEnd(&zs);
    if (rc != Z_STREAM_END) throw IoError("gzip: compression failed");
    out.resize(out.size() - zs.avail_out);
    return out;
}

std::string gzip_decompress(const std::string& data) {
    z_stream zs{};
    if (inflateInit2(&zs, 15 + 32) != Z_OK) throw IoError("gzip: inflateInit2 failed");
    std::string out;
    out.resize(std::max<size_t>(data.size() * 4, 1 << 16));
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    zs.avail_in = static_cast<uInt>(data.size());
    size_t written = 0;
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        if (written == out.size()) out.resize(out.size() * 2);
        zs.next_out = reinterpret_cast<Bytef*>(out.data() + written);
        zs.avail_out = static_cast<uInt>(out.size() - written);
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw IoError("gzip: decompression failed");
        }
        written = out.size() - zs.avail_out;
    }
    inflateEnd(&zs);
    out.resize(written);
    return out;
}

bool looks_gzip(const std::string& data) {
    return data.size() >= 2 && static_cast<uint8_t>(data[0]) == 0x1f &&
           static_cast<uint8_t>(data[1]) == 0x8b;
}

} // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string data = ss.str();
    if (looks_gzip(data)) data = gzip_decompress(data);
    return data;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open file for writing: " + path);
    if (has_gz_suffix(path)) {
        const std::string gz = gzip_compress(content);
        out.write(gz.data(), static_cast<std::streamsize>(gz.size()));
    } else {
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
    }
    if (!out) throw IoError("write failed: " + path);
}

std::vector<std::string> read_lines(const std::string& path) {
    const std::string data = read_file(path);
    std::vector<std::string> lines;
    size_t start = 0;
    while (start < data.size()) {
        size_t end = data.find('\n', start);
        if (end == std::string::npos) end = data.size();
        if (end > start) lines.push_back(data.substr(start, end - start));
        start = end + 1;
    }
    return lines;
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
    std::string data;
    size_t total = 0;
    for (const auto& l : lines) total += l.size() + 1;
    data.reserve(total);
    for (const auto& l : lines) {
        data += l;
        data += '\n';
    }
    write_file(path, data);
}

} // namespace dom2
