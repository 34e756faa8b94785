#pragma once

#include "mfd/volume.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mfd {

enum class SynthKind {
    Point,
    Line,
    Plane,
    SolidBlock,
    MovingSphere,
    OscillatingBar,
    ExpandingBlob,
    ZigzagWalker,
};

SynthKind parse_kind(const std::string& name);  // Error("UnknownKind") on no match
std::string kind_name(SynthKind kind);

// Deterministic synthetic volume description. The seed drives jitter
// only; trajectories are fixed by params (phase, speed, amplitude, ...),
// so two seeds give identical volumes at jitter 0.
struct SynthSpec {
    SynthKind kind = SynthKind::Point;
    uint32_t width = 32, height = 32, depth = 32;
    std::map<std::string, double> params;
    uint64_t seed = 0;
    double jitter = 0.0;  // per-voxel flip probability, [0, 0.05]

    double param(const std::string& key, double fallback) const;
};

// Canonical kinds: point = one voxel at the center; line = full
// axis-aligned line (params: axis, default 2 = time); plane = full
// coordinate plane (params: axis = its normal, default 2); solid_block =
// filled cuboid inset by params: margin (default 4) on every side.
// Motion kinds render a 2D silhouette per frame:
//   moving_sphere   — disk of params: radius bouncing diagonally
//                     (speed, speed_y, phase)
//   oscillating_bar — full-height bar, width bar_width, x center swinging
//                     sinusoidally (amplitude, period, phase)
//   expanding_blob  — centered disk pulsing between radius and
//                     radius + amplitude (period, phase)
//   zigzag_walker   — square of side `side` advancing in x while y
//                     follows a triangle wave (speed, amplitude, period,
//                     phase)
// Errors: BadExtent, UnknownKind.
VideoVolume generate(const SynthSpec& spec);

// Desk-scale benchmark: per_class instances of each of the four motion
// kinds with per-instance phase/size variation and jittered voxels.
struct BenchmarkSpec {
    uint32_t width = 48, height = 48, depth = 32;
    int per_class = 16;
    double jitter = 0.01;
    uint64_t seed = 0;
};

struct BenchmarkInstance {
    SynthSpec spec;
    std::string class_name;
    std::string instance_id;
};

std::vector<BenchmarkInstance> benchmark_instances(const BenchmarkSpec& bench);

} // namespace mfd
