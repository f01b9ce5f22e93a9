#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrp/environment.hpp"

namespace lrp {

inline constexpr std::uint16_t kFormatVersion = 1;

// CRC-64/XZ of a byte range.
std::uint64_t crc64(std::span<const std::uint8_t> bytes);
std::string crc64_hex(std::span<const std::uint8_t> bytes);
std::string file_digest(const std::string& path);

std::vector<std::uint8_t> encode_environment(const Environment& env);
Environment decode_environment(std::span<const std::uint8_t> bytes, std::optional<int> expected_d = {});

void save_environment(const Environment& env, const std::string& path);
Environment load_environment(const std::string& path, std::optional<int> expected_d = {});

}  // namespace lrp
