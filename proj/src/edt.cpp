#include "mfd/edt.hpp"

#include "mfd/error.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

namespace mfd {

namespace {

// Sentinel for "no site on this scanline yet". Finite distances are
// bounded by the volume diagonal, which the entry guard keeps well below
// this value, so sentinel and real distances can never collide.
constexpr int64_t kInf = int64_t{1} << 60;

// 1D lower envelope of parabolas: out[i] = min_j (f[j] + (i - j)^2).
// Heights equal to kInf mark absent sites and are skipped. With integer
// heights below ~2^31 the double-precision intersection abscissae are
// exact to ~1e-13 while distinct rational boundaries are separated by at
// least 1/(2n), so the envelope is combinatorially exact.
void lower_envelope(const int64_t* f, int n, int64_t* out, int* hull, double* boundary) {
    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (f[q] >= kInf) continue;
        if (k < 0) {
            k = 0;
            hull[0] = q;
            boundary[0] = -std::numeric_limits<double>::infinity();
            boundary[1] = std::numeric_limits<double>::infinity();
            continue;
        }
        double s;
        for (;;) {
            const int p = hull[k];
            s = static_cast<double>((f[q] + int64_t{q} * q) - (f[p] + int64_t{p} * p)) /
                static_cast<double>(2 * (q - p));
            if (s <= boundary[k]) {
                --k;  // parabola p never wins; boundary[0] is -inf so k stays >= 0
            } else {
                break;
            }
        }
        ++k;
        hull[k] = q;
        boundary[k] = s;
        boundary[k + 1] = std::numeric_limits<double>::infinity();
    }

    if (k < 0) {
        for (int i = 0; i < n; ++i) out[i] = kInf;
        return;
    }
    int j = 0;
    for (int i = 0; i < n; ++i) {
        while (boundary[j + 1] < i) ++j;
        const int p = hull[j];
        out[i] = f[p] + int64_t{i - p} * (i - p);
    }
}

struct PassBuffers {
    std::vector<int64_t> line, out;
    std::vector<int> hull;
    std::vector<double> boundary;
    void resize(size_t n) {
        line.resize(n);
        out.resize(n);
        hull.resize(n);
        boundary.resize(n + 1);
    }
};

// Applies the envelope pass along one axis of the working field.
void envelope_pass(std::vector<int64_t>& a, uint32_t w, uint32_t h, uint32_t d, int axis) {
    const uint64_t strides[3] = {1, w, static_cast<uint64_t>(w) * h};
    const uint32_t extents[3] = {w, h, d};
    const int u = (axis + 1) % 3;
    const int v = (axis + 2) % 3;
    const uint64_t stride = strides[axis];
    const uint32_t n = extents[axis];

    PassBuffers buf;
    buf.resize(n);
    for (uint32_t cv = 0; cv < extents[v]; ++cv) {
        for (uint32_t cu = 0; cu < extents[u]; ++cu) {
            const uint64_t base = cu * strides[u] + cv * strides[v];
            for (uint32_t i = 0; i < n; ++i) buf.line[i] = a[base + i * stride];
            lower_envelope(buf.line.data(), static_cast<int>(n), buf.out.data(),
                           buf.hull.data(), buf.boundary.data());
            for (uint32_t i = 0; i < n; ++i) a[base + i * stride] = buf.out[i];
        }
    }
}

void check_extent(const VideoVolume& vol) {
    const auto sq = [](uint64_t v) { return v * v; };
    const uint64_t diag =
        sq(vol.width - 1) + sq(vol.height - 1) + sq(vol.depth - 1);
    if (diag > static_cast<uint64_t>(std::numeric_limits<int32_t>::max()))
        fail("BadDimensions", "volume diagonal exceeds the 32-bit squared-distance range");
}

} // namespace

DistanceField squared_edt_with_order(const VideoVolume& vol, const std::array<int, 3>& order) {
    if (vol.foreground_count == 0)
        fail("EmptyVolume", "distance to nearest foreground is undefined for an empty volume");
    check_extent(vol);

    const uint64_t n = vol.num_voxels();
    std::vector<int64_t> work(n);
    for (uint64_t i = 0; i < n; ++i) work[i] = vol.test(i) ? 0 : kInf;

    for (int axis : order) envelope_pass(work, vol.width, vol.height, vol.depth, axis);

    DistanceField field;
    field.width = vol.width;
    field.height = vol.height;
    field.depth = vol.depth;
    field.sqdist.resize(n);
    for (uint64_t i = 0; i < n; ++i) field.sqdist[i] = static_cast<int32_t>(work[i]);
    return field;
}

DistanceField squared_edt(const VideoVolume& vol) {
    return squared_edt_with_order(vol, {0, 1, 2});
}

DistanceField brute_force_edt(const VideoVolume& vol) {
    if (vol.foreground_count == 0)
        fail("EmptyVolume", "distance to nearest foreground is undefined for an empty volume");
    check_extent(vol);

    struct Site {
        int32_t x, y, z;
    };
    std::vector<Site> sites;
    sites.reserve(vol.foreground_count);
    for (uint32_t z = 0; z < vol.depth; ++z)
        for (uint32_t y = 0; y < vol.height; ++y)
            for (uint32_t x = 0; x < vol.width; ++x)
                if (vol.test(x, y, z))
                    sites.push_back({static_cast<int32_t>(x), static_cast<int32_t>(y),
                                     static_cast<int32_t>(z)});

    DistanceField field;
    field.width = vol.width;
    field.height = vol.height;
    field.depth = vol.depth;
    field.sqdist.resize(vol.num_voxels());

    uint64_t idx = 0;
    for (uint32_t z = 0; z < vol.depth; ++z) {
        for (uint32_t y = 0; y < vol.height; ++y) {
            for (uint32_t x = 0; x < vol.width; ++x, ++idx) {
                int64_t best = std::numeric_limits<int64_t>::max();
                for (const Site& s : sites) {
                    const int64_t dx = static_cast<int64_t>(x) - s.x;
                    const int64_t dy = static_cast<int64_t>(y) - s.y;
                    const int64_t dz = static_cast<int64_t>(z) - s.z;
                    const int64_t d = dx * dx + dy * dy + dz * dz;
                    if (d < best) best = d;
                }
                field.sqdist[idx] = static_cast<int32_t>(best);
            }
        }
    }
    return field;
}

namespace {
constexpr char kFieldMagic[4] = {'M', 'F', 'D', '1'};

void put_u32le(std::ostream& out, uint32_t v) {
    const uint8_t b[4] = {static_cast<uint8_t>(v), static_cast<uint8_t>(v >> 8),
                          static_cast<uint8_t>(v >> 16), static_cast<uint8_t>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t get_u32le(std::istream& in, const std::filesystem::path& path) {
    uint8_t b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (in.gcount() != 4) fail("TruncatedFile", "short read in " + path.string());
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}
} // namespace

void save_distance_field(const DistanceField& field, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("IoError", "cannot open " + path.string() + " for writing");
    out.write(kFieldMagic, 4);
    put_u32le(out, field.width);
    put_u32le(out, field.height);
    put_u32le(out, field.depth);
    for (int32_t v : field.sqdist) put_u32le(out, static_cast<uint32_t>(v));
    if (!out) fail("IoError", "short write to " + path.string());
}

DistanceField load_distance_field(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("IoError", "cannot open " + path.string());
    char magic[4] = {0};
    in.read(magic, 4);
    if (in.gcount() != 4 || std::memcmp(magic, kFieldMagic, 4) != 0)
        fail("BadMagic", "not an MFD1 distance field: " + path.string());
    DistanceField field;
    field.width = get_u32le(in, path);
    field.height = get_u32le(in, path);
    field.depth = get_u32le(in, path);
    field.sqdist.resize(field.num_voxels());
    for (auto& v : field.sqdist) v = static_cast<int32_t>(get_u32le(in, path));
    return field;
}

} // namespace mfd
