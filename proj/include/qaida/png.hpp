#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "qaida/raster.hpp"

namespace qaida {

/// 8-bit single-channel PNG, no interlacing and no ancillary chunks, so
/// identical pixels always give identical bytes.
std::vector<std::uint8_t> encode_png(const RasterImage& img);

/// Throws Error{IoFailure}.
void write_png(const std::filesystem::path& path, const RasterImage& img);

/// Decodes an 8-bit grayscale PNG; any other color type or bit depth, or a
/// corrupt stream, throws Error{IoFailure}.
RasterImage decode_png(std::span<const std::uint8_t> bytes);
RasterImage read_png(const std::filesystem::path& path);

}  // namespace qaida
