#pragma once

#include <filesystem>

#include "sgmsup/raster.hpp"

namespace sgmsup {

/// Reads a grayscale PFM ("Pf"). Byte order comes from the sign of the scale
/// line (negative = little-endian); scanlines are stored bottom-to-top and
/// returned top-down. NaN samples become invalid pixels.
FloatRaster read_pfm(const std::filesystem::path& path);

/// Writes a grayscale little-endian PFM (scale -1.0, bottom-to-top rows).
/// Invalid pixels are written as a canonical quiet NaN.
void write_pfm(const FloatRaster& raster, const std::filesystem::path& path);

/// Reads an 8- or 16-bit single-band PNG or binary PGM (P5), chosen by the
/// file magic. Intensities are kept at their raw integral values.
GrayImage read_gray(const std::filesystem::path& path);

/// Writes integral intensities as PNG (".png" extension) or PGM otherwise.
/// Uses 8-bit samples when every value fits, 16-bit up to 65535.
void write_gray(const GrayImage& image, const std::filesystem::path& path);

/// 8-bit PNG with 0 = excluded, 255 = included.
void write_mask(const ConfidenceMask& mask, const std::filesystem::path& path);

/// Reads a mask PNG/PGM; any non-zero sample counts as included.
ConfidenceMask read_mask(const std::filesystem::path& path,
                         MaskKind kind = MaskKind::kValidity);

}  // namespace sgmsup
