#pragma once

#include "mfd/signature.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace mfd {

// Pipeline-wide configuration. Precedence at the CLI is
// command-line flag > config file > default; the file format is flat
// key=value text with keys exactly matching these field names, and
// save/load round-trips every field bit-exactly.
struct RunConfig {
    double sigma = 1.0;
    double r_max = 10.0;
    uint32_t grid_len = 512;
    uint32_t feature_len = 128;
    int binarize_threshold = 128;
    double svm_c = 1.0;
    int folds = 10;
    int runs = 10;
    uint64_t seed = 0;
    int threads = 0;  // 0 = auto

    SignatureParams signature_params() const {
        return {sigma, r_max, grid_len, feature_len};
    }

    bool operator==(const RunConfig&) const = default;

    static RunConfig load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    // Applies the file's assignments on top of the current values
    // (load() is apply_file onto a default-constructed config).
    void apply_file(const std::filesystem::path& path);

    // Applies one key=value assignment; Error("BadConfigKey") for
    // unknown keys, Error("ParseError") for malformed values.
    void apply(const std::string& key, const std::string& value);
};

} // namespace mfd
