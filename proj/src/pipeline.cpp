#include "mfd/pipeline.hpp"

#include "mfd/edt.hpp"
#include "mfd/error.hpp"
#include "mfd/parallel.hpp"

#include <bit>
#include <fstream>

namespace mfd {

VolumeCurve loglog_of_volume(const VideoVolume& vol, double r_max) {
    const DistanceField field = squared_edt(vol);
    const DilationCurve curve = dilation_curve(field, r_max);
    VolumeCurve out;
    out.saturated =
        curve.saturated() &&
        curve.sq_radii.back() < static_cast<int64_t>(r_max * r_max + 1e-9);
    out.curve = loglog(curve);
    return out;
}

Signature signature_of_volume(const VideoVolume& vol, const SignatureParams& params,
                              std::string source_id) {
    const VolumeCurve vc = loglog_of_volume(vol, params.r_max);
    return mfd_signature(vc.curve, params, std::move(source_id));
}

uint64_t volume_hash(const VideoVolume& vol) {
    uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    feed(vol.width);
    feed(vol.height);
    feed(vol.depth);
    for (uint8_t b : vol.occupancy) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

VolumeCurve CurveCache::get_or_compute(const VideoVolume& vol, double r_max) {
    const std::pair<uint64_t, int64_t> key{volume_hash(vol),
                                           static_cast<int64_t>(std::bit_cast<uint64_t>(r_max))};
    {
        std::lock_guard<std::mutex> lock(mutex_);
        const auto it = entries_.find(key);
        if (it != entries_.end()) return it->second;
    }
    VolumeCurve vc = loglog_of_volume(vol, r_max);
    std::lock_guard<std::mutex> lock(mutex_);
    return entries_.emplace(key, std::move(vc)).first->second;
}

Manifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("IoError", "cannot open manifest " + path.string());

    std::string line;
    if (!std::getline(in, line) || line != "path,label")
        fail("ParseError", "manifest must start with a 'path,label' header: " + path.string());

    Manifest manifest;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const size_t comma = line.rfind(',');
        if (comma == std::string::npos || comma == 0 || comma + 1 == line.size())
            fail("ParseError",
                 path.string() + ":" + std::to_string(line_no) + ": expected path,label");
        manifest.rows.push_back({line.substr(0, comma), line.substr(comma + 1)});
    }
    if (manifest.rows.empty()) fail("ParseError", "manifest has no rows: " + path.string());
    return manifest;
}

void write_manifest(const Manifest& manifest, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) fail("IoError", "cannot open " + path.string() + " for writing");
    out << "path,label\n";
    for (const auto& row : manifest.rows) out << row.path << "," << row.label << "\n";
    if (!out) fail("IoError", "short write to " + path.string());
}

std::vector<VideoVolume> load_manifest_volumes(const Manifest& manifest,
                                               const std::filesystem::path& manifest_dir,
                                               int threads) {
    std::vector<VideoVolume> volumes(manifest.rows.size());
    parallel_for(manifest.rows.size(), threads, [&](size_t i) {
        std::filesystem::path p(manifest.rows[i].path);
        if (p.is_relative()) p = manifest_dir / p;
        volumes[i] = load_volume(p);
    });
    return volumes;
}

DatasetBundle dataset_from_manifest(const Manifest& manifest,
                                    const std::filesystem::path& manifest_dir,
                                    const RunConfig& cfg, CurveCache* cache) {
    const std::vector<VideoVolume> volumes =
        load_manifest_volumes(manifest, manifest_dir, cfg.threads);

    const SignatureParams params = cfg.signature_params();
    params.validate();

    DatasetBundle bundle;
    bundle.dataset.features.resize(volumes.size());
    bundle.dataset.labels.resize(volumes.size());
    bundle.source_ids.resize(volumes.size());

    std::vector<uint8_t> saturated(volumes.size(), 0);
    parallel_for(volumes.size(), cfg.threads, [&](size_t i) {
        const VolumeCurve vc = cache ? cache->get_or_compute(volumes[i], params.r_max)
                                     : loglog_of_volume(volumes[i], params.r_max);
        saturated[i] = vc.saturated ? 1 : 0;
        Signature sig = mfd_signature(vc.curve, params, manifest.rows[i].path);
        bundle.dataset.features[i] = std::move(sig.mfd);
        bundle.source_ids[i] = manifest.rows[i].path;
    });
    for (uint8_t s : saturated) bundle.saturated_curves += s;

    // class vocabulary in first-appearance order
    for (size_t i = 0; i < manifest.rows.size(); ++i) {
        const std::string& label = manifest.rows[i].label;
        int id = -1;
        for (size_t c = 0; c < bundle.dataset.class_names.size(); ++c)
            if (bundle.dataset.class_names[c] == label) {
                id = static_cast<int>(c);
                break;
            }
        if (id < 0) {
            id = static_cast<int>(bundle.dataset.class_names.size());
            bundle.dataset.class_names.push_back(label);
        }
        bundle.dataset.labels[i] = id;
    }
    return bundle;
}

} // namespace mfd
