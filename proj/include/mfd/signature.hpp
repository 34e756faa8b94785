#pragma once

#include "mfd/minkowski.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace mfd {

struct SignatureParams {
    double sigma = 1.0;        // Gaussian std-dev, in resampled-sample units
    double r_max = 10.0;       // voxel units
    uint32_t grid_len = 512;   // resampled curve length, power of two >= 64
    uint32_t feature_len = 128;  // output attribute count, <= grid_len

    void validate() const;
    bool operator==(const SignatureParams&) const = default;
};

// Uniformly sampled curve: x_i = x0 + i*dx. Replicated curves keep the
// index range of the original copy in [core_begin, core_begin + core_len).
struct UniformCurve {
    double x0 = 0.0;
    double dx = 0.0;
    std::vector<double> values;
    size_t core_begin = 0;
    size_t core_len = 0;
};

// Conditions a log-log curve for spectral differentiation:
//   1. sparse-head removal — leading points are dropped while the leading
//      log_r gap exceeds 2x the median gap of the full curve;
//   2. densification — midpoints (mean of neighbors) are inserted until
//      no gap exceeds the target spacing;
//   3. linear resampling onto grid_len uniform points over the retained
//      [log_r_first, log_r_last].
// Errors: CurveTooShort (< 8 points), DegenerateRange (retained range of
// zero width).
UniformCurve prepare_curve(const LogLogCurve& curve, uint32_t grid_len);

// Periodic extension: three verbatim copies of the value sequence, grid
// extended accordingly, middle third recorded for later extraction.
UniformCurve replicate(const UniformCurve& curve);

// d/dx of the Gaussian-smoothed signal, computed in the frequency domain:
// bin k is multiplied by (i*2*pi*f_k) * exp(-2*pi^2*sigma_x^2*f_k^2) with
// f_k in cycles per unit x and sigma_x = sigma*spacing; the Nyquist bin is
// zeroed (odd multiplier convention). Thread-safe; plans are cached.
// Errors: OddLength, NonPositiveSigma, NonPositiveSpacing.
std::vector<double> spectral_derivative(std::span<const double> values, double spacing,
                                        double sigma);

// The motion signature: per-scale fractal dimension on a uniform log r grid.
struct Signature {
    std::string source_id;
    SignatureParams params;
    std::vector<double> log_r_grid;
    std::vector<double> mfd;
};

// Full pipeline: prepare_curve -> replicate -> spectral_derivative over
// x = log r -> extract middle third -> MFD = 3 - derivative -> linear
// resample to feature_len points. Values are reported unclamped.
Signature mfd_signature(const LogLogCurve& curve, const SignatureParams& params,
                        std::string source_id = "");

// CSV: a header/value row pair for the metadata + log r grid, then a
// header/value row pair for the MFD samples.
void write_signature_csv(const Signature& sig, std::ostream& out);
Signature read_signature_csv(std::istream& in);

// JSON round-trips bit-exactly (shortest round-trip double formatting).
nlohmann::json signature_to_json(const Signature& sig);
Signature signature_from_json(const nlohmann::json& j);

} // namespace mfd
