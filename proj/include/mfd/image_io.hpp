#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace mfd {

// 8-bit grayscale raster, row-major.
struct GrayImage {
    uint32_t width = 0;
    uint32_t height = 0;
    std::vector<uint8_t> pixels;

    uint8_t at(uint32_t x, uint32_t y) const {
        return pixels[static_cast<size_t>(y) * width + x];
    }
};

// Decodes a binary PGM (P5) or grayscale PNG frame. The format is sniffed
// from the file's magic bytes, not its extension. PNG palette/RGB inputs
// are converted to 8-bit gray; 16-bit channels are reduced to 8.
// Throws Error("IoError") if the file cannot be opened and
// Error("DecodeError") on malformed or unsupported content.
GrayImage decode_gray_image(const std::filesystem::path& path);

// Fixture writers (tests and synthetic data only).
void write_pgm(const GrayImage& img, const std::filesystem::path& path);
void write_gray_png(const GrayImage& img, const std::filesystem::path& path);

} // namespace mfd
