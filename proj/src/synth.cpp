#include "mfd/synth.hpp"

#include "mfd/error.hpp"
#include "mfd/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mfd {

SynthKind parse_kind(const std::string& name) {
    if (name == "point") return SynthKind::Point;
    if (name == "line") return SynthKind::Line;
    if (name == "plane") return SynthKind::Plane;
    if (name == "solid_block") return SynthKind::SolidBlock;
    if (name == "moving_sphere") return SynthKind::MovingSphere;
    if (name == "oscillating_bar") return SynthKind::OscillatingBar;
    if (name == "expanding_blob") return SynthKind::ExpandingBlob;
    if (name == "zigzag_walker") return SynthKind::ZigzagWalker;
    fail("UnknownKind", "no synthetic kind named '" + name + "'");
}

std::string kind_name(SynthKind kind) {
    switch (kind) {
        case SynthKind::Point: return "point";
        case SynthKind::Line: return "line";
        case SynthKind::Plane: return "plane";
        case SynthKind::SolidBlock: return "solid_block";
        case SynthKind::MovingSphere: return "moving_sphere";
        case SynthKind::OscillatingBar: return "oscillating_bar";
        case SynthKind::ExpandingBlob: return "expanding_blob";
        case SynthKind::ZigzagWalker: return "zigzag_walker";
    }
    fail("UnknownKind", "invalid kind enumerator");
}

double SynthSpec::param(const std::string& key, double fallback) const {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

namespace {

// Triangle wave bouncing between lo and hi, unit slope in t.
double bounce(double t, double lo, double hi) {
    const double span = hi - lo;
    if (span <= 0.0) return lo;
    const double period = 2.0 * span;
    double u = std::fmod(t, period);
    if (u < 0.0) u += period;
    return lo + (u <= span ? u : period - u);
}

void fill_disk(VideoVolume& vol, uint32_t frame, double cx, double cy, double radius) {
    const double r2 = radius * radius;
    const int x_lo = std::max(0, static_cast<int>(std::floor(cx - radius)));
    const int x_hi = std::min(static_cast<int>(vol.width) - 1,
                              static_cast<int>(std::ceil(cx + radius)));
    const int y_lo = std::max(0, static_cast<int>(std::floor(cy - radius)));
    const int y_hi = std::min(static_cast<int>(vol.height) - 1,
                              static_cast<int>(std::ceil(cy + radius)));
    for (int y = y_lo; y <= y_hi; ++y)
        for (int x = x_lo; x <= x_hi; ++x) {
            const double dx = x - cx;
            const double dy = y - cy;
            if (dx * dx + dy * dy <= r2)
                vol.set(static_cast<uint32_t>(x), static_cast<uint32_t>(y), frame, true);
        }
}

void fill_rect(VideoVolume& vol, uint32_t frame, double cx, double cy, double half_w,
               double half_h) {
    const int x_lo = std::max(0, static_cast<int>(std::ceil(cx - half_w)));
    const int x_hi = std::min(static_cast<int>(vol.width) - 1,
                              static_cast<int>(std::floor(cx + half_w)));
    const int y_lo = std::max(0, static_cast<int>(std::ceil(cy - half_h)));
    const int y_hi = std::min(static_cast<int>(vol.height) - 1,
                              static_cast<int>(std::floor(cy + half_h)));
    for (int y = y_lo; y <= y_hi; ++y)
        for (int x = x_lo; x <= x_hi; ++x)
            vol.set(static_cast<uint32_t>(x), static_cast<uint32_t>(y), frame, true);
}

} // namespace

VideoVolume generate(const SynthSpec& spec) {
    if (spec.width < 8 || spec.height < 8 || spec.depth < 8)
        fail("BadExtent", "extent components must be >= 8");
    if (spec.jitter < 0.0 || spec.jitter > 0.05)
        fail("BadParams", "jitter must lie in [0, 0.05]");

    VideoVolume vol = VideoVolume::zeros(spec.width, spec.height, spec.depth);
    const uint32_t w = spec.width, h = spec.height, d = spec.depth;
    const double two_pi = 2.0 * std::numbers::pi;

    switch (spec.kind) {
        case SynthKind::Point:
            vol.set(w / 2, h / 2, d / 2, true);
            break;

        case SynthKind::Line: {
            const int axis = static_cast<int>(spec.param("axis", 2));
            if (axis == 0)
                for (uint32_t x = 0; x < w; ++x) vol.set(x, h / 2, d / 2, true);
            else if (axis == 1)
                for (uint32_t y = 0; y < h; ++y) vol.set(w / 2, y, d / 2, true);
            else
                for (uint32_t z = 0; z < d; ++z) vol.set(w / 2, h / 2, z, true);
            break;
        }

        case SynthKind::Plane: {
            const int axis = static_cast<int>(spec.param("axis", 2));  // plane normal
            if (axis == 0)
                for (uint32_t z = 0; z < d; ++z)
                    for (uint32_t y = 0; y < h; ++y) vol.set(w / 2, y, z, true);
            else if (axis == 1)
                for (uint32_t z = 0; z < d; ++z)
                    for (uint32_t x = 0; x < w; ++x) vol.set(x, h / 2, z, true);
            else
                for (uint32_t y = 0; y < h; ++y)
                    for (uint32_t x = 0; x < w; ++x) vol.set(x, y, d / 2, true);
            break;
        }

        case SynthKind::SolidBlock: {
            const auto margin = static_cast<uint32_t>(std::max(0.0, spec.param("margin", 4)));
            if (2 * margin >= w || 2 * margin >= h || 2 * margin >= d)
                fail("BadExtent", "solid_block margin leaves no interior");
            for (uint32_t z = margin; z < d - margin; ++z)
                for (uint32_t y = margin; y < h - margin; ++y)
                    for (uint32_t x = margin; x < w - margin; ++x) vol.set(x, y, z, true);
            break;
        }

        case SynthKind::MovingSphere: {
            const double radius = spec.param("radius", 5.0);
            const double speed = spec.param("speed", 1.0);
            const double speed_y = spec.param("speed_y", 0.7 * speed);
            const double phase = spec.param("phase", 0.0);
            for (uint32_t t = 0; t < d; ++t) {
                const double cx = bounce(phase + speed * t, radius + 1.0, w - radius - 2.0);
                const double cy =
                    bounce(0.37 * (w + h) + phase + speed_y * t, radius + 1.0, h - radius - 2.0);
                fill_disk(vol, t, cx, cy, radius);
            }
            break;
        }

        case SynthKind::OscillatingBar: {
            const double half_w = 0.5 * spec.param("bar_width", 4.0);
            const double amplitude = spec.param("amplitude", w / 4.0);
            const double period = spec.param("period", 16.0);
            const double phase = spec.param("phase", 0.0);
            for (uint32_t t = 0; t < d; ++t) {
                const double cx =
                    w / 2.0 + amplitude * std::sin(two_pi * t / period + phase);
                fill_rect(vol, t, cx, (h - 1) / 2.0, half_w, h / 2.0);
            }
            break;
        }

        case SynthKind::ExpandingBlob: {
            const double r0 = spec.param("radius", 3.0);
            const double amplitude = spec.param("amplitude", 9.0);
            const double period = spec.param("period", 32.0);
            const double phase = spec.param("phase", 0.0);
            for (uint32_t t = 0; t < d; ++t) {
                const double r =
                    r0 + amplitude * 0.5 * (1.0 - std::cos(two_pi * t / period + phase));
                fill_disk(vol, t, w / 2.0, h / 2.0, r);
            }
            break;
        }

        case SynthKind::ZigzagWalker: {
            const double half = 0.5 * spec.param("side", 5.0);
            const double speed = spec.param("speed", 1.5);
            const double amplitude = spec.param("amplitude", h / 3.0);
            const double period = spec.param("period", 8.0);
            const double phase = spec.param("phase", 0.0);
            for (uint32_t t = 0; t < d; ++t) {
                const double cx = bounce(phase + speed * t, half + 1.0, w - half - 2.0);
                const double zig = bounce(phase + 2.0 * amplitude * t / period, 0.0, amplitude);
                const double cy = (h - amplitude) / 2.0 + zig;
                fill_rect(vol, t, cx, cy, half, half);
            }
            break;
        }
    }

    if (spec.jitter > 0.0) {
        const uint64_t n = vol.num_voxels();
        for (uint64_t i = 0; i < n; ++i)
            if (hash_unit(spec.seed, i) < spec.jitter) vol.set(i, !vol.test(i));
    }
    return vol;
}

std::vector<BenchmarkInstance> benchmark_instances(const BenchmarkSpec& bench) {
    const SynthKind kinds[4] = {SynthKind::MovingSphere, SynthKind::OscillatingBar,
                                SynthKind::ExpandingBlob, SynthKind::ZigzagWalker};
    std::vector<BenchmarkInstance> out;
    out.reserve(4u * static_cast<size_t>(bench.per_class));

    for (int k = 0; k < 4; ++k) {
        for (int i = 0; i < bench.per_class; ++i) {
            BenchmarkInstance inst;
            inst.class_name = kind_name(kinds[k]);
            inst.instance_id = inst.class_name + "_" + std::to_string(i);
            SynthSpec& spec = inst.spec;
            spec.kind = kinds[k];
            spec.width = bench.width;
            spec.height = bench.height;
            spec.depth = bench.depth;
            spec.jitter = bench.jitter;
            spec.seed = mix64(bench.seed, static_cast<uint64_t>(k) * 997u +
                                              static_cast<uint64_t>(i));
            // The four classes trace space-time shapes of distinct
            // effective dimension: a thin fast tube (sphere), a sweeping
            // sheet (bar), a compact pulsing solid (blob), and a wiggly
            // ribbon (walker). Phase walks the trajectory per instance;
            // sizes wobble a few percent.
            const double u = static_cast<double>(i) / std::max(1, bench.per_class);
            const double wobble = 1.0 + 0.02 * std::sin(2.0 * std::numbers::pi * u);
            spec.params["phase"] = 11.0 * u;
            switch (kinds[k]) {
                case SynthKind::MovingSphere:
                    spec.params["radius"] = 1.5 * wobble;
                    spec.params["speed"] = 0.5 + 0.05 * u;
                    break;
                case SynthKind::OscillatingBar:
                    spec.params["bar_width"] = 3.0 * wobble;
                    spec.params["amplitude"] = 10.0 * wobble;
                    spec.params["period"] = 6.0 + 1.0 * u;
                    break;
                case SynthKind::ExpandingBlob:
                    spec.params["radius"] = 12.0 * wobble;
                    spec.params["amplitude"] = 11.0 * wobble;
                    spec.params["period"] = 8.0;
                    break;
                case SynthKind::ZigzagWalker:
                    spec.params["side"] = 8.0 * wobble;
                    spec.params["speed"] = 1.2;
                    spec.params["amplitude"] = 22.0 * wobble;
                    spec.params["period"] = 3.0 + 0.5 * u;
                    break;
                default: break;
            }
            out.push_back(std::move(inst));
        }
    }
    return out;
}

} // namespace mfd
