#include "mfd/signature.hpp"

#include "mfd/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>

namespace mfd {

void SignatureParams::validate() const {
    if (!(sigma > 0.0)) fail("NonPositiveSigma", "sigma must be > 0");
    if (!(r_max >= 2.0)) fail("BadParams", "r_max must be >= 2");
    if (grid_len < 64 || (grid_len & (grid_len - 1)) != 0)
        fail("BadParams", "grid_len must be a power of two >= 64");
    if (feature_len < 2 || feature_len > grid_len)
        fail("BadParams", "feature_len must lie in [2, grid_len]");
}

namespace {

// Linear interpolation of a polyline at ascending query positions.
// Queries are clamped to the polyline's span (relevant only for the
// endpoint, which can land a rounding error outside it).
std::vector<double> interp_linear(const std::vector<double>& xs, const std::vector<double>& ys,
                                  const std::vector<double>& queries) {
    std::vector<double> out(queries.size());
    size_t seg = 0;
    for (size_t i = 0; i < queries.size(); ++i) {
        const double x = queries[i];
        while (seg + 2 < xs.size() && xs[seg + 1] < x) ++seg;
        const double x0 = xs[seg], x1 = xs[seg + 1];
        double t = (x - x0) / (x1 - x0);
        t = std::clamp(t, 0.0, 1.0);
        out[i] = ys[seg] + t * (ys[seg + 1] - ys[seg]);
    }
    return out;
}

std::vector<double> uniform_grid(double x0, double x1, size_t n) {
    std::vector<double> g(n);
    const double h = (x1 - x0) / static_cast<double>(n - 1);
    for (size_t i = 0; i < n; ++i) g[i] = x0 + h * static_cast<double>(i);
    g.back() = x1;
    return g;
}

} // namespace

UniformCurve prepare_curve(const LogLogCurve& curve, uint32_t grid_len) {
    const auto& pts = curve.points;
    if (pts.size() < 8)
        fail("CurveTooShort", "need >= 8 log-log points, have " + std::to_string(pts.size()));
    if (grid_len < 2) fail("BadParams", "grid_len must be >= 2");

    // median consecutive gap of the full curve
    std::vector<double> gaps(pts.size() - 1);
    for (size_t i = 0; i + 1 < pts.size(); ++i) gaps[i] = pts[i + 1].log_r - pts[i].log_r;
    std::vector<double> sorted = gaps;
    const size_t mid = sorted.size() / 2;
    std::nth_element(sorted.begin(), sorted.begin() + mid, sorted.end());
    double median = sorted[mid];
    if (sorted.size() % 2 == 0) {
        const double below = *std::max_element(sorted.begin(), sorted.begin() + mid);
        median = 0.5 * (median + below);
    }

    // drop leading points while the leading gap exceeds 2x the median gap;
    // the sparse-sampling pathology lives at the head of the curve, so
    // only leading gaps are inspected
    size_t start = 0;
    while (start < gaps.size() && gaps[start] > 2.0 * median) ++start;
    if (pts.size() - start < 2)
        fail("DegenerateRange", "sparse-head removal left fewer than 2 points");

    std::vector<double> xs, ys;
    xs.reserve(pts.size() - start);
    ys.reserve(pts.size() - start);
    for (size_t i = start; i < pts.size(); ++i) {
        xs.push_back(pts[i].log_r);
        ys.push_back(pts[i].log_v);
    }
    const double lo = xs.front(), hi = xs.back();
    if (!(hi > lo)) fail("DegenerateRange", "retained log r range has zero width");

    // averaging interpolation: insert midpoints until no gap exceeds the
    // target spacing of the uniform grid
    const double target = (hi - lo) / static_cast<double>(grid_len - 1);
    for (;;) {
        bool inserted = false;
        std::vector<double> nx, ny;
        nx.reserve(xs.size() * 2);
        ny.reserve(ys.size() * 2);
        for (size_t i = 0; i + 1 < xs.size(); ++i) {
            nx.push_back(xs[i]);
            ny.push_back(ys[i]);
            if (xs[i + 1] - xs[i] > target * (1.0 + 1e-12)) {
                nx.push_back(0.5 * (xs[i] + xs[i + 1]));
                ny.push_back(0.5 * (ys[i] + ys[i + 1]));
                inserted = true;
            }
        }
        nx.push_back(xs.back());
        ny.push_back(ys.back());
        xs = std::move(nx);
        ys = std::move(ny);
        if (!inserted) break;
    }

    UniformCurve out;
    out.x0 = lo;
    out.dx = (hi - lo) / static_cast<double>(grid_len - 1);
    out.values = interp_linear(xs, ys, uniform_grid(lo, hi, grid_len));
    out.core_begin = 0;
    out.core_len = grid_len;
    return out;
}

UniformCurve replicate(const UniformCurve& curve) {
    const size_t n = curve.values.size();
    UniformCurve out;
    out.dx = curve.dx;
    out.x0 = curve.x0 - static_cast<double>(n) * curve.dx;
    out.values.reserve(3 * n);
    for (int copy = 0; copy < 3; ++copy)
        out.values.insert(out.values.end(), curve.values.begin(), curve.values.end());
    out.core_begin = n;
    out.core_len = n;
    return out;
}

namespace {

// Cached FFTW plans per transform length. Planning is not thread-safe so
// cache access is serialized; execution uses the new-array interface on
// per-call fftw_malloc'd buffers, which is safe to run concurrently.
struct FftPlans {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
    double* real = nullptr;
    fftw_complex* complex_ = nullptr;
    size_t n = 0;

    ~FftPlans() {
        if (forward) fftw_destroy_plan(forward);
        if (inverse) fftw_destroy_plan(inverse);
        if (real) fftw_free(real);
        if (complex_) fftw_free(complex_);
    }
};

std::mutex g_plan_mutex;
std::map<size_t, std::unique_ptr<FftPlans>>& plan_cache() {
    static std::map<size_t, std::unique_ptr<FftPlans>> cache;
    return cache;
}

const FftPlans& plans_for(size_t n) {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto& cache = plan_cache();
    auto it = cache.find(n);
    if (it != cache.end()) return *it->second;

    auto entry = std::make_unique<FftPlans>();
    entry->n = n;
    entry->real = fftw_alloc_real(n);
    entry->complex_ = fftw_alloc_complex(n / 2 + 1);
    entry->forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), entry->real, entry->complex_,
                                          FFTW_ESTIMATE);
    entry->inverse = fftw_plan_dft_c2r_1d(static_cast<int>(n), entry->complex_, entry->real,
                                          FFTW_ESTIMATE);
    if (!entry->forward || !entry->inverse) fail("FftPlanFailed", "FFTW planning failed");
    auto [pos, ok] = cache.emplace(n, std::move(entry));
    (void)ok;
    return *pos->second;
}

struct FftwBuffer {
    double* real = nullptr;
    fftw_complex* complex_ = nullptr;
    explicit FftwBuffer(size_t n) {
        real = fftw_alloc_real(n);
        complex_ = fftw_alloc_complex(n / 2 + 1);
    }
    ~FftwBuffer() {
        fftw_free(real);
        fftw_free(complex_);
    }
};

} // namespace

std::vector<double> spectral_derivative(std::span<const double> values, double spacing,
                                        double sigma) {
    const size_t n = values.size();
    if (n < 2 || n % 2 != 0)
        fail("OddLength", "sample count must be even and >= 2, got " + std::to_string(n));
    if (!(sigma > 0.0)) fail("NonPositiveSigma", "sigma must be > 0");
    if (!(spacing > 0.0)) fail("NonPositiveSpacing", "spacing must be > 0");

    const FftPlans& plans = plans_for(n);
    FftwBuffer buf(n);
    std::copy(values.begin(), values.end(), buf.real);
    fftw_execute_dft_r2c(plans.forward, buf.real, buf.complex_);

    const double sigma_x = sigma * spacing;
    const double two_pi = 2.0 * std::numbers::pi;
    const size_t half = n / 2;
    for (size_t k = 0; k <= half; ++k) {
        double factor = 0.0;  // Nyquist bin stays zero
        if (k < half) {
            const double f = static_cast<double>(k) / (static_cast<double>(n) * spacing);
            factor = two_pi * f * std::exp(-2.0 * std::numbers::pi * std::numbers::pi *
                                           sigma_x * sigma_x * f * f);
        }
        // multiply by i*factor: (re, im) -> (-im*factor, re*factor)
        const double re = buf.complex_[k][0];
        const double im = buf.complex_[k][1];
        buf.complex_[k][0] = -im * factor;
        buf.complex_[k][1] = re * factor;
    }

    fftw_execute_dft_c2r(plans.inverse, buf.complex_, buf.real);

    std::vector<double> out(n);
    const double scale = 1.0 / static_cast<double>(n);
    for (size_t i = 0; i < n; ++i) out[i] = buf.real[i] * scale;
    return out;
}

Signature mfd_signature(const LogLogCurve& curve, const SignatureParams& params,
                        std::string source_id) {
    params.validate();

    const UniformCurve prepared = prepare_curve(curve, params.grid_len);
    const UniformCurve tripled = replicate(prepared);
    const std::vector<double> derivative =
        spectral_derivative(tripled.values, tripled.dx, params.sigma);

    const size_t n = prepared.values.size();
    std::vector<double> mfd_full(n);
    for (size_t i = 0; i < n; ++i) mfd_full[i] = 3.0 - derivative[tripled.core_begin + i];

    Signature sig;
    sig.source_id = std::move(source_id);
    sig.params = params;
    const double hi = prepared.x0 + prepared.dx * static_cast<double>(n - 1);
    sig.log_r_grid = uniform_grid(prepared.x0, hi, params.feature_len);
    const std::vector<double> xs = uniform_grid(prepared.x0, hi, n);
    sig.mfd = interp_linear(xs, mfd_full, sig.log_r_grid);
    return sig;
}

namespace {
std::string fmt_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, end);
}

double parse_double_str(const std::string& s, const char* what) {
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        fail("ParseError", std::string("bad ") + what + " value '" + s + "'");
    return v;
}

std::vector<std::string> split_line(const std::string& line) {
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
} // namespace

void write_signature_csv(const Signature& sig, std::ostream& out) {
    const size_t len = sig.mfd.size();
    out << "source_id,sigma,r_max";
    for (size_t i = 0; i < len; ++i) out << ",log_r_" << i;
    out << "\n";
    out << sig.source_id << "," << fmt_double(sig.params.sigma) << ","
        << fmt_double(sig.params.r_max);
    for (size_t i = 0; i < len; ++i) out << "," << fmt_double(sig.log_r_grid[i]);
    out << "\n";
    for (size_t i = 0; i < len; ++i) out << (i ? "," : "") << "mfd_" << i;
    out << "\n";
    for (size_t i = 0; i < len; ++i) out << (i ? "," : "") << fmt_double(sig.mfd[i]);
    out << "\n";
}

Signature read_signature_csv(std::istream& in) {
    std::string header, meta, mfd_header, mfd_row;
    if (!std::getline(in, header) || !std::getline(in, meta) || !std::getline(in, mfd_header) ||
        !std::getline(in, mfd_row))
        fail("ParseError", "signature CSV needs 4 lines");

    const auto head = split_line(header);
    if (head.size() < 4 || head[0] != "source_id" || head[1] != "sigma" || head[2] != "r_max")
        fail("ParseError", "bad signature CSV header");
    const size_t len = head.size() - 3;

    const auto meta_fields = split_line(meta);
    if (meta_fields.size() != head.size()) fail("ParseError", "metadata row width mismatch");
    const auto mfd_fields = split_line(mfd_row);
    if (mfd_fields.size() != len) fail("ParseError", "mfd row width mismatch");

    Signature sig;
    sig.source_id = meta_fields[0];
    sig.params.sigma = parse_double_str(meta_fields[1], "sigma");
    sig.params.r_max = parse_double_str(meta_fields[2], "r_max");
    sig.params.feature_len = static_cast<uint32_t>(len);
    sig.params.grid_len = std::max<uint32_t>(sig.params.feature_len, 64);
    for (size_t i = 0; i < len; ++i) {
        sig.log_r_grid.push_back(parse_double_str(meta_fields[3 + i], "log_r"));
        sig.mfd.push_back(parse_double_str(mfd_fields[i], "mfd"));
    }
    return sig;
}

nlohmann::json signature_to_json(const Signature& sig) {
    return nlohmann::json{
        {"source_id", sig.source_id},
        {"params",
         {{"sigma", sig.params.sigma},
          {"r_max", sig.params.r_max},
          {"grid_len", sig.params.grid_len},
          {"feature_len", sig.params.feature_len}}},
        {"log_r_grid", sig.log_r_grid},
        {"mfd", sig.mfd},
    };
}

Signature signature_from_json(const nlohmann::json& j) {
    Signature sig;
    sig.source_id = j.at("source_id").get<std::string>();
    const auto& p = j.at("params");
    sig.params.sigma = p.at("sigma").get<double>();
    sig.params.r_max = p.at("r_max").get<double>();
    sig.params.grid_len = p.at("grid_len").get<uint32_t>();
    sig.params.feature_len = p.at("feature_len").get<uint32_t>();
    sig.log_r_grid = j.at("log_r_grid").get<std::vector<double>>();
    sig.mfd = j.at("mfd").get<std::vector<double>>();
    return sig;
}

} // namespace mfd
