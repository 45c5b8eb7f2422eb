#pragma once

#include <string>
#include <vector>

namespace dom2 {

// Line-oriented text IO with transparent gzip: paths ending in .gz (or files
// starting with the gzip magic) are compressed/decompressed via zlib. The
// gzip header is written with zeroed mtime and a fixed OS byte so identical
// content always produces identical bytes.
std::vector<std::string> read_lines(const std::string& path);
void write_lines(const std::string& path, const std::vector<std::string>& lines);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace dom2
