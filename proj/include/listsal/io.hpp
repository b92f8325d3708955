#pragma once

// PNG codecs, saliency-map export formats, and small file helpers.

#include "listsal/image.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace listsal::io {

using Bytes = std::vector<std::uint8_t>;

/// Decodes 8/16-bit gray, gray+alpha, RGB or RGBA PNG; alpha is composited
/// over white and 16-bit samples are reduced to 8 bits.
Rgb8Image decode_png(const Bytes& data);
Rgb8Image read_png(const std::filesystem::path& path);

/// Deterministic encodings (fixed compression settings, no timestamps).
Bytes encode_png_rgb(const Rgb8Image& image);
Bytes encode_png_gray16(int width, int height, const std::vector<std::uint16_t>& samples);

/// 16-bit grayscale PNG with value*65535 rounded.
Bytes encode_map_png(const SaliencyMap& map);

/// 8-byte header (width, height as little-endian u32) then little-endian
/// float32 samples, row-major.
Bytes encode_map_binary(const SaliencyMap& map);
SaliencyMap decode_map_binary(const Bytes& data);

/// 256-entry colour table running dark purple -> teal -> yellow.
const std::vector<Rgb8>& viridis();

/// 0.4 * input + 0.6 * colour(map), rounded per channel.
Rgb8Image overlay(const Rgb8Image& input, const SaliencyMap& map, double opacity = 0.6);

Bytes read_file(const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);
/// Writes to a sibling temporary file then renames it into place.
void write_file_atomic(const std::filesystem::path& path, const Bytes& data);
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

/// Lower-case hex SHA-256.
std::string sha256_hex(const Bytes& data);
std::string sha256_hex(const std::string& data);

} // namespace listsal::io
