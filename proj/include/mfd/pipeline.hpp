#pragma once

#include "mfd/classifier.hpp"
#include "mfd/config.hpp"
#include "mfd/signature.hpp"
#include "mfd/volume.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

namespace mfd {

// Log-log curve of one volume plus whether the dilation saturated before
// reaching r_max (the grid filled up; the curve was truncated there).
struct VolumeCurve {
    LogLogCurve curve;
    bool saturated = false;
};

VolumeCurve loglog_of_volume(const VideoVolume& vol, double r_max);
Signature signature_of_volume(const VideoVolume& vol, const SignatureParams& params,
                              std::string source_id = "");

// FNV-1a over dimensions and occupancy bytes; cache key for curves.
uint64_t volume_hash(const VideoVolume& vol);

// Concurrent-lookup cache of log-log curves keyed by (volume hash,
// r_max). Sigma sweeps reuse the cached curve; only the derivative stage
// depends on sigma.
class CurveCache {
public:
    VolumeCurve get_or_compute(const VideoVolume& vol, double r_max);

private:
    std::map<std::pair<uint64_t, int64_t>, VolumeCurve> entries_;
    std::mutex mutex_;
};

// Dataset manifest: `path,label` rows under a `path,label` header.
struct Manifest {
    struct Row {
        std::string path;
        std::string label;
    };
    std::vector<Row> rows;
};

Manifest read_manifest(const std::filesystem::path& path);
void write_manifest(const Manifest& manifest, const std::filesystem::path& path);

// Loads every manifest volume (relative paths resolve against the
// manifest's directory), computes signatures in parallel, and assembles
// the labeled dataset. Class names appear in first-appearance order.
struct DatasetBundle {
    LabeledDataset dataset;
    std::vector<std::string> source_ids;
    size_t saturated_curves = 0;
};

DatasetBundle dataset_from_manifest(const Manifest& manifest,
                                    const std::filesystem::path& manifest_dir,
                                    const RunConfig& cfg, CurveCache* cache = nullptr);

// Loads all manifest volumes into memory (sweep keeps them across cells).
std::vector<VideoVolume> load_manifest_volumes(const Manifest& manifest,
                                               const std::filesystem::path& manifest_dir,
                                               int threads);

} // namespace mfd
