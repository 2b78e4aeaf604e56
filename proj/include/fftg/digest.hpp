#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace fftg {

// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view data);

std::string base64_encode(std::span<const std::uint8_t> bytes);

}  // namespace fftg
