#pragma once

#include "mfd/volume.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace mfd {

// Per-voxel exact squared Euclidean distance to the nearest foreground
// voxel. Integer-valued throughout: square roots are taken only at
// presentation/log time, so the field is bit-reproducible.
struct DistanceField {
    uint32_t width = 0;
    uint32_t height = 0;
    uint32_t depth = 0;
    std::vector<int32_t> sqdist;  // same indexing as VideoVolume

    uint64_t num_voxels() const {
        return static_cast<uint64_t>(width) * height * depth;
    }
};

// Exact 3D squared EDT via three separable per-scanline lower-envelope
// passes (one per axis). O(N) per pass. The result is invariant under
// permutation of the axis order; squared_edt uses x, then y, then z.
// Errors: EmptyVolume when the volume has no foreground voxel.
DistanceField squared_edt(const VideoVolume& vol);

// Same transform with an explicit axis order (a permutation of {0,1,2});
// exists so the separable-consistency property is directly testable.
DistanceField squared_edt_with_order(const VideoVolume& vol, const std::array<int, 3>& order);

// Exhaustive O(N * |foreground|) oracle. Same contract as squared_edt;
// used in tests and by the edt-verify CLI mode.
DistanceField brute_force_edt(const VideoVolume& vol);

// Debug dump: "MFD1" magic, then width/height/depth and the squared
// distances, all unsigned 32-bit little-endian.
void save_distance_field(const DistanceField& field, const std::filesystem::path& path);
DistanceField load_distance_field(const std::filesystem::path& path);

} // namespace mfd
