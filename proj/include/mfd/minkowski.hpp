#pragma once

#include "mfd/edt.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace mfd {

// Influence volumes of the dilated shape. sq_radii holds the squared
// radii realized in the distance field (the jump points of the cumulative
// histogram), in increasing order starting at 0; volumes holds the count
// of voxels within each radius. The curve stops at r_max or at the first
// radius where it saturates (volume == total_voxels), whichever is first.
struct DilationCurve {
    std::vector<int64_t> sq_radii;
    std::vector<int64_t> volumes;
    int64_t total_voxels = 0;

    bool saturated() const {
        return !volumes.empty() && volumes.back() == total_voxels;
    }
};

struct LogLogPoint {
    double log_r = 0.0;
    double log_v = 0.0;
};

// Natural-log form of the dilation curve; the r = 0 sample is dropped.
struct LogLogCurve {
    std::vector<LogLogPoint> points;
    double r_max = 0.0;
};

// Counts voxels within each realized radius <= r_max as the cumulative
// histogram of squared distances. The tie convention is r >= r_i: a voxel
// exactly at distance r belongs to the dilation of radius r.
// Errors: RadiusTooSmall when r_max < 1.
DilationCurve dilation_curve(const DistanceField& field, double r_max);

// (log r, log V) pairs for r >= 1; log_r = ln(q)/2 on squared radius q.
// Errors: CurveTooShort when fewer than 2 samples have r >= 1.
LogLogCurve loglog(const DilationCurve& curve);

// Pointwise dimension FD(r) = dims - log V(r)/log r. Points with
// log r = 0 (r = 1) are excluded and counted; diagnostic use only.
struct FdPointwise {
    std::vector<LogLogPoint> points;  // (log_r, FD)
    size_t excluded_count = 0;
};
FdPointwise fd_pointwise(const LogLogCurve& curve, int dims = 3);

// Scalar Bouligand-Minkowski estimate: OLS slope of log V against log r
// over r in [fit_lo, fit_hi]; dimension = 3 - slope, reported unclamped.
// Errors: InsufficientPoints when fewer than 3 points fall in the window.
struct FdEstimate {
    double dimension = 0.0;
    double slope = 0.0;
    double r2 = 0.0;
    size_t points_used = 0;
};
FdEstimate estimate_fd(const LogLogCurve& curve, double fit_lo, double fit_hi);

// Default regression window [2, r_max] with any saturated tail (volume
// within 1% of total) dropped; returns {lo, hi} in voxel units.
std::pair<double, double> default_fit_window(const DilationCurve& curve, double r_max);

// Plot-data emission: header line, one row per sample.
void write_dilation_csv(const DilationCurve& curve, std::ostream& out);    // sq_radius,volume
void write_loglog_csv(const LogLogCurve& curve, std::ostream& out);        // log_r,log_v
DilationCurve read_dilation_csv(std::istream& in);
LogLogCurve read_loglog_csv(std::istream& in, double r_max);

} // namespace mfd
