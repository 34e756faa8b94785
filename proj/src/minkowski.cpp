#include "mfd/minkowski.hpp"

#include "mfd/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

namespace mfd {

DilationCurve dilation_curve(const DistanceField& field, double r_max) {
    if (r_max < 1.0) fail("RadiusTooSmall", "r_max must be >= 1");

    const auto q_max = static_cast<int64_t>(std::floor(r_max * r_max + 1e-9));
    std::vector<int64_t> hist(static_cast<size_t>(q_max) + 1, 0);
    for (int32_t q : field.sqdist)
        if (q <= q_max) ++hist[static_cast<size_t>(q)];

    DilationCurve curve;
    curve.total_voxels = static_cast<int64_t>(field.num_voxels());

    int64_t cumulative = 0;
    for (int64_t q = 0; q <= q_max; ++q) {
        const int64_t count = hist[static_cast<size_t>(q)];
        if (count == 0) continue;  // cumulative histogram only jumps at realized radii
        cumulative += count;
        curve.sq_radii.push_back(q);
        curve.volumes.push_back(cumulative);
        if (cumulative == curve.total_voxels) break;  // saturated: dilation fills the grid
    }
    return curve;
}

LogLogCurve loglog(const DilationCurve& curve) {
    LogLogCurve out;
    for (size_t i = 0; i < curve.sq_radii.size(); ++i) {
        const int64_t q = curve.sq_radii[i];
        if (q < 1) continue;  // log r undefined at r = 0
        out.points.push_back({0.5 * std::log(static_cast<double>(q)),
                              std::log(static_cast<double>(curve.volumes[i]))});
    }
    if (out.points.size() < 2)
        fail("CurveTooShort", "need at least 2 samples with r >= 1, have " +
                                  std::to_string(out.points.size()));
    return out;
}

FdPointwise fd_pointwise(const LogLogCurve& curve, int dims) {
    FdPointwise result;
    for (const auto& p : curve.points) {
        if (p.log_r == 0.0) {
            ++result.excluded_count;  // r = 1 divides by log r = 0
            continue;
        }
        result.points.push_back({p.log_r, dims - p.log_v / p.log_r});
    }
    return result;
}

FdEstimate estimate_fd(const LogLogCurve& curve, double fit_lo, double fit_hi) {
    if (!(fit_lo > 0.0) || !(fit_hi > fit_lo))
        fail("InsufficientPoints", "fit window must satisfy 0 < fit_lo < fit_hi");
    const double lo = std::log(fit_lo) - 1e-12;
    const double hi = std::log(fit_hi) + 1e-12;

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    size_t n = 0;
    for (const auto& p : curve.points) {
        if (p.log_r < lo || p.log_r > hi) continue;
        sx += p.log_r;
        sy += p.log_v;
        sxx += p.log_r * p.log_r;
        sxy += p.log_r * p.log_v;
        ++n;
    }
    if (n < 3)
        fail("InsufficientPoints", "only " + std::to_string(n) +
                                       " curve points fall in the fit window (need 3)");

    const double denom = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;

    double ss_res = 0, ss_tot = 0;
    const double mean_y = sy / n;
    for (const auto& p : curve.points) {
        if (p.log_r < lo || p.log_r > hi) continue;
        const double e = p.log_v - (slope * p.log_r + intercept);
        ss_res += e * e;
        const double t = p.log_v - mean_y;
        ss_tot += t * t;
    }

    FdEstimate est;
    est.slope = slope;
    est.dimension = 3.0 - slope;
    est.r2 = ss_tot > 1e-300 ? 1.0 - ss_res / ss_tot : 1.0;
    est.points_used = n;
    return est;
}

std::pair<double, double> default_fit_window(const DilationCurve& curve, double r_max) {
    double hi = r_max;
    // drop the saturated tail: volumes within 1% of the grid size
    const double cap = 0.99 * static_cast<double>(curve.total_voxels);
    for (size_t i = 0; i < curve.volumes.size(); ++i) {
        if (static_cast<double>(curve.volumes[i]) >= cap) {
            hi = std::sqrt(static_cast<double>(curve.sq_radii[i]));
            break;
        }
    }
    return {2.0, hi};
}

namespace {
std::string fmt_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, end);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    size_t start = 0;
    for (;;) {
        const size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

double parse_double(const std::string& s, const char* what) {
    double v = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || p != last)
        fail("ParseError", std::string("bad ") + what + " value '" + s + "'");
    return v;
}

int64_t parse_i64(const std::string& s, const char* what) {
    int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        fail("ParseError", std::string("bad ") + what + " value '" + s + "'");
    return v;
}
} // namespace

void write_dilation_csv(const DilationCurve& curve, std::ostream& out) {
    out << "sq_radius,volume\n";
    for (size_t i = 0; i < curve.sq_radii.size(); ++i)
        out << curve.sq_radii[i] << "," << curve.volumes[i] << "\n";
}

void write_loglog_csv(const LogLogCurve& curve, std::ostream& out) {
    out << "log_r,log_v\n";
    for (const auto& p : curve.points)
        out << fmt_double(p.log_r) << "," << fmt_double(p.log_v) << "\n";
}

DilationCurve read_dilation_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "sq_radius,volume")
        fail("ParseError", "missing dilation curve header");
    DilationCurve curve;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 2) fail("ParseError", "expected 2 fields: " + line);
        curve.sq_radii.push_back(parse_i64(fields[0], "sq_radius"));
        curve.volumes.push_back(parse_i64(fields[1], "volume"));
    }
    if (!curve.volumes.empty()) curve.total_voxels = curve.volumes.back();
    return curve;
}

LogLogCurve read_loglog_csv(std::istream& in, double r_max) {
    std::string line;
    if (!std::getline(in, line) || line != "log_r,log_v")
        fail("ParseError", "missing log-log curve header");
    LogLogCurve curve;
    curve.r_max = r_max;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 2) fail("ParseError", "expected 2 fields: " + line);
        curve.points.push_back({parse_double(fields[0], "log_r"), parse_double(fields[1], "log_v")});
    }
    return curve;
}

} // namespace mfd
