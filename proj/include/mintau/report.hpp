#pragma once

#include <cstdint>
#include <string>

namespace mintau {

// All numeric output goes through this: 12 significant digits, locale-free.
std::string fmt12(double v);

// FNV-1a 64-bit over a canonical string; used as the "inputs hash" column of
// certification CSVs.
std::uint64_t fnv1a64(const std::string& s);
std::string hash_hex(std::uint64_t h);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace mintau
