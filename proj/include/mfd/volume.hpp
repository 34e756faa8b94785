#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace mfd {

// Packed space-time occupancy grid. Axes are image x, image y and frame
// index z, so a moving silhouette traces a 3D shape. Bit index is
// x + width*(y + height*z); bits are stored LSB-first within each byte,
// which is also the on-disk layout of the MFV1 format.
struct VideoVolume {
    uint32_t width = 0;   // n_x, voxels
    uint32_t height = 0;  // n_y, voxels
    uint32_t depth = 0;   // t, frames
    std::vector<uint8_t> occupancy;  // ceil(width*height*depth / 8) bytes
    uint64_t foreground_count = 0;

    static VideoVolume zeros(uint32_t width, uint32_t height, uint32_t depth);

    uint64_t num_voxels() const {
        return static_cast<uint64_t>(width) * height * depth;
    }

    uint64_t index(uint32_t x, uint32_t y, uint32_t z) const {
        return x + static_cast<uint64_t>(width) * (y + static_cast<uint64_t>(height) * z);
    }

    bool test(uint64_t idx) const {
        return (occupancy[idx >> 3] >> (idx & 7)) & 1u;
    }

    bool test(uint32_t x, uint32_t y, uint32_t z) const { return test(index(x, y, z)); }

    // Keeps foreground_count in sync with the stored bits.
    void set(uint64_t idx, bool on);
    void set(uint32_t x, uint32_t y, uint32_t z, bool on) { set(index(x, y, z), on); }

    // Recount of set bits; equals foreground_count by construction.
    uint64_t recount() const;
};

// Ordered frame sources plus the binarization rule. Frames that are
// already binary masks pass through the threshold unchanged.
struct FrameSpec {
    std::vector<std::filesystem::path> frames;
    int binarize_threshold = 128;  // gray level in [0, 255]
};

// Builds the space-time volume: voxel (x, y, z) is foreground iff frame z
// pixel (x, y) has gray value >= binarize_threshold.
// Errors: EmptySequence, DimensionMismatch, EmptyVolume, DecodeError, IoError.
// Frame decoding runs in parallel (threads <= 0 selects hardware
// concurrency); bitset assembly is the single serialization point.
VideoVolume load_frame_sequence(const FrameSpec& spec, int threads = 1);

// MFV1 container: bytes 0-3 "MFV1"; bytes 4-15 width, height, depth as
// unsigned 32-bit little-endian; then ceil(w*h*d/8) occupancy bytes,
// LSB-first, voxel order as above. load(save(v)) is bit-exact.
void save_volume(const VideoVolume& vol, const std::filesystem::path& path);
VideoVolume load_volume(const std::filesystem::path& path);

} // namespace mfd
