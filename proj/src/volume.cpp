#include "mfd/volume.hpp"

#include "mfd/error.hpp"
#include "mfd/image_io.hpp"
#include "mfd/parallel.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace mfd {

VideoVolume VideoVolume::zeros(uint32_t width, uint32_t height, uint32_t depth) {
    if (width == 0 || height == 0 || depth == 0)
        fail("BadDimensions", "volume dimensions must be >= 1");
    VideoVolume v;
    v.width = width;
    v.height = height;
    v.depth = depth;
    v.occupancy.assign((v.num_voxels() + 7) / 8, 0);
    return v;
}

void VideoVolume::set(uint64_t idx, bool on) {
    uint8_t& byte = occupancy[idx >> 3];
    const uint8_t mask = static_cast<uint8_t>(1u << (idx & 7));
    const bool was = byte & mask;
    if (on && !was) {
        byte |= mask;
        ++foreground_count;
    } else if (!on && was) {
        byte &= static_cast<uint8_t>(~mask);
        --foreground_count;
    }
}

uint64_t VideoVolume::recount() const {
    uint64_t n = 0;
    for (uint8_t b : occupancy) n += static_cast<unsigned>(std::popcount(b));
    return n;
}

VideoVolume load_frame_sequence(const FrameSpec& spec, int threads) {
    if (spec.frames.empty()) fail("EmptySequence", "no frames given");
    if (spec.binarize_threshold < 0 || spec.binarize_threshold > 255)
        fail("BadThreshold", "binarize_threshold must lie in [0, 255]");

    std::vector<GrayImage> frames(spec.frames.size());
    parallel_for(spec.frames.size(), threads,
                 [&](size_t i) { frames[i] = decode_gray_image(spec.frames[i]); });

    const uint32_t w = frames[0].width;
    const uint32_t h = frames[0].height;
    for (size_t i = 1; i < frames.size(); ++i) {
        if (frames[i].width != w || frames[i].height != h)
            fail("DimensionMismatch",
                 "frame " + spec.frames[i].string() + " is " + std::to_string(frames[i].width) +
                     "x" + std::to_string(frames[i].height) + ", expected " + std::to_string(w) +
                     "x" + std::to_string(h));
    }

    VideoVolume vol = VideoVolume::zeros(w, h, static_cast<uint32_t>(frames.size()));
    const auto threshold = static_cast<uint8_t>(spec.binarize_threshold);
    uint64_t idx = 0;
    for (const GrayImage& frame : frames) {
        for (uint8_t px : frame.pixels) {
            if (px >= threshold) {
                vol.occupancy[idx >> 3] |= static_cast<uint8_t>(1u << (idx & 7));
                ++vol.foreground_count;
            }
            ++idx;
        }
    }

    if (vol.foreground_count == 0)
        fail("EmptyVolume", "no voxel reached the binarization threshold");
    return vol;
}

namespace {
constexpr char kVolumeMagic[4] = {'M', 'F', 'V', '1'};

void put_u32le(std::ostream& out, uint32_t v) {
    const uint8_t b[4] = {static_cast<uint8_t>(v), static_cast<uint8_t>(v >> 8),
                          static_cast<uint8_t>(v >> 16), static_cast<uint8_t>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t get_u32le(std::istream& in, const std::filesystem::path& path) {
    uint8_t b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (in.gcount() != 4) fail("TruncatedFile", "short header in " + path.string());
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}
} // namespace

void save_volume(const VideoVolume& vol, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("IoError", "cannot open " + path.string() + " for writing");
    out.write(kVolumeMagic, 4);
    put_u32le(out, vol.width);
    put_u32le(out, vol.height);
    put_u32le(out, vol.depth);
    out.write(reinterpret_cast<const char*>(vol.occupancy.data()),
              static_cast<std::streamsize>(vol.occupancy.size()));
    if (!out) fail("IoError", "short write to " + path.string());
}

VideoVolume load_volume(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("IoError", "cannot open " + path.string());

    char magic[4] = {0};
    in.read(magic, 4);
    if (in.gcount() != 4 || std::memcmp(magic, kVolumeMagic, 4) != 0)
        fail("BadMagic", "not an MFV1 volume: " + path.string());

    const uint32_t w = get_u32le(in, path);
    const uint32_t h = get_u32le(in, path);
    const uint32_t d = get_u32le(in, path);
    if (w == 0 || h == 0 || d == 0)
        fail("BadDimensions", "zero dimension in " + path.string());

    VideoVolume vol = VideoVolume::zeros(w, h, d);
    in.read(reinterpret_cast<char*>(vol.occupancy.data()),
            static_cast<std::streamsize>(vol.occupancy.size()));
    if (static_cast<size_t>(in.gcount()) != vol.occupancy.size())
        fail("TruncatedFile", "occupancy data ends early in " + path.string());
    if (in.peek() != EOF)
        fail("TrailingBytes", "data past end of volume in " + path.string());

    // mask padding bits in the final byte so recounts are exact
    const uint64_t n = vol.num_voxels();
    if (n % 8 != 0) vol.occupancy.back() &= static_cast<uint8_t>((1u << (n % 8)) - 1);
    vol.foreground_count = vol.recount();
    return vol;
}

} // namespace mfd
