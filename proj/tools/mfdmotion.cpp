// mfdmotion — space-time fractal signatures for motion classification.
//
// Pipeline: silhouette frames -> packed 3D space-time volume -> exact
// squared EDT -> Bouligand-Minkowski dilation curve -> multi-scale
// fractal dimension signature -> one-vs-one linear SVM with repeated
// stratified cross-validation.

#include "mfd/classifier.hpp"
#include "mfd/config.hpp"
#include "mfd/edt.hpp"
#include "mfd/error.hpp"
#include "mfd/minkowski.hpp"
#include "mfd/parallel.hpp"
#include "mfd/pipeline.hpp"
#include "mfd/signature.hpp"
#include "mfd/synth.hpp"
#include "mfd/volume.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------
// shared config plumbing: flag > config file > preset > default
// ---------------------------------------------------------------------

struct ConfigCli {
    mfd::RunConfig flags;
    std::string config_path;
    std::string preset;

    CLI::Option* opt_sigma = nullptr;
    CLI::Option* opt_r_max = nullptr;
    CLI::Option* opt_grid_len = nullptr;
    CLI::Option* opt_feature_len = nullptr;
    CLI::Option* opt_threshold = nullptr;
    CLI::Option* opt_svm_c = nullptr;
    CLI::Option* opt_folds = nullptr;
    CLI::Option* opt_runs = nullptr;
    CLI::Option* opt_seed = nullptr;
    CLI::Option* opt_threads = nullptr;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "flat key=value config file");
        cmd->add_option("--preset", preset,
                        "parameter preset: mocap (r_max=10, sigma=1) or "
                        "weizmann (r_max=110, sigma=2)");
        opt_sigma = cmd->add_option("--sigma", flags.sigma,
                                    "Gaussian std-dev for the spectral derivative (samples)");
        opt_r_max = cmd->add_option("--r_max", flags.r_max, "maximum dilation radius (voxels)");
        opt_grid_len = cmd->add_option("--grid_len", flags.grid_len,
                                       "resampled curve length (power of two)");
        opt_feature_len =
            cmd->add_option("--feature_len", flags.feature_len, "signature attribute count");
        opt_threshold = cmd->add_option("--binarize_threshold", flags.binarize_threshold,
                                        "frame binarization gray level [0,255]");
        opt_svm_c = cmd->add_option("--svm_c", flags.svm_c, "SVM regularization parameter C");
        opt_folds = cmd->add_option("--folds", flags.folds, "cross-validation folds");
        opt_runs = cmd->add_option("--runs", flags.runs, "cross-validation repetitions");
        opt_seed = cmd->add_option("--seed", flags.seed, "random seed");
        opt_threads = cmd->add_option("--threads", flags.threads, "worker threads (0 = auto)");
    }

    bool explicit_sigma() const { return opt_sigma && opt_sigma->count() > 0; }
    bool explicit_r_max() const { return opt_r_max && opt_r_max->count() > 0; }
    bool explicit_grid_len() const { return opt_grid_len && opt_grid_len->count() > 0; }
    bool explicit_feature_len() const { return opt_feature_len && opt_feature_len->count() > 0; }

    mfd::RunConfig resolve() const {
        mfd::RunConfig cfg;
        if (!preset.empty()) {
            if (preset == "mocap") {
                cfg.r_max = 10.0;
                cfg.sigma = 1.0;
            } else if (preset == "weizmann") {
                cfg.r_max = 110.0;
                cfg.sigma = 2.0;
            } else {
                throw mfd::UsageError("unknown preset '" + preset + "'");
            }
        }
        if (!config_path.empty()) cfg.apply_file(config_path);
        if (opt_sigma->count()) cfg.sigma = flags.sigma;
        if (opt_r_max->count()) cfg.r_max = flags.r_max;
        if (opt_grid_len->count()) cfg.grid_len = flags.grid_len;
        if (opt_feature_len->count()) cfg.feature_len = flags.feature_len;
        if (opt_threshold->count()) cfg.binarize_threshold = flags.binarize_threshold;
        if (opt_svm_c->count()) cfg.svm_c = flags.svm_c;
        if (opt_folds->count()) cfg.folds = flags.folds;
        if (opt_runs->count()) cfg.runs = flags.runs;
        if (opt_seed->count()) cfg.seed = flags.seed;
        if (opt_threads->count()) cfg.threads = flags.threads;
        return cfg;
    }
};

// ---------------------------------------------------------------------
// helpers
// ---------------------------------------------------------------------

std::array<uint32_t, 3> parse_extent(const std::string& text) {
    std::array<uint32_t, 3> out{};
    size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        const size_t next = i < 2 ? text.find('x', pos) : text.size();
        if (next == std::string::npos) throw mfd::UsageError("extent must look like WxHxD");
        uint32_t v = 0;
        const char* first = text.data() + pos;
        const char* last = text.data() + next;
        auto [p, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || p != last || v == 0)
            throw mfd::UsageError("bad extent component in '" + text + "'");
        out[static_cast<size_t>(i)] = v;
        pos = next + 1;
    }
    return out;
}

// "a:b", "a:b:step" or "v1,v2,..."
std::vector<double> parse_range(const std::string& text, const std::string& what) {
    std::vector<double> values;
    auto parse_one = [&](const std::string& s) {
        double v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size())
            throw mfd::UsageError("bad " + what + " value '" + s + "'");
        return v;
    };

    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        size_t start = 0;
        for (;;) {
            const size_t colon = text.find(':', start);
            parts.push_back(text.substr(start, colon == std::string::npos
                                                   ? std::string::npos
                                                   : colon - start));
            if (colon == std::string::npos) break;
            start = colon + 1;
        }
        if (parts.size() < 2 || parts.size() > 3)
            throw mfd::UsageError(what + " range must be lo:hi or lo:hi:step");
        const double lo = parse_one(parts[0]);
        const double hi = parse_one(parts[1]);
        const double step = parts.size() == 3 ? parse_one(parts[2]) : 1.0;
        if (!(step > 0)) throw mfd::UsageError(what + " range step must be > 0");
        for (double v = lo; v <= hi + 1e-9; v += step) values.push_back(v);
    } else {
        size_t start = 0;
        for (;;) {
            const size_t comma = text.find(',', start);
            const std::string tok =
                text.substr(start, comma == std::string::npos ? std::string::npos
                                                              : comma - start);
            if (!tok.empty()) values.push_back(parse_one(tok));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    }
    if (values.empty()) throw mfd::UsageError("empty " + what + " range");
    return values;
}

std::vector<fs::path> collect_frames(const fs::path& dir) {
    std::vector<fs::path> frames;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (ext == ".pgm" || ext == ".png") frames.push_back(entry.path());
    }
    std::sort(frames.begin(), frames.end());
    if (frames.empty()) mfd::fail("EmptySequence", "no .pgm/.png frames in " + dir.string());
    return frames;
}

mfd::VideoVolume load_input_volume(const fs::path& input, const mfd::RunConfig& cfg) {
    if (fs::is_directory(input)) {
        mfd::FrameSpec spec;
        spec.frames = collect_frames(input);
        spec.binarize_threshold = cfg.binarize_threshold;
        return mfd::load_frame_sequence(spec, cfg.threads);
    }
    return mfd::load_volume(input);
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) mfd::fail("IoError", "cannot open " + path.string() + " for writing");
    out << content;
    if (!out) mfd::fail("IoError", "short write to " + path.string());
}

std::string percent(double fraction) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << fraction * 100.0;
    return os.str();
}

json cv_json_with_config(const mfd::CvReport& report,
                         const std::vector<std::string>& class_names,
                         const mfd::RunConfig& cfg) {
    json j = mfd::cv_report_to_json(report, class_names);
    j["config"] = {{"sigma", cfg.sigma},
                   {"r_max", cfg.r_max},
                   {"grid_len", cfg.grid_len},
                   {"feature_len", cfg.feature_len},
                   {"svm_c", cfg.svm_c},
                   {"folds", cfg.folds},
                   {"runs", cfg.runs},
                   {"seed", cfg.seed}};
    return j;
}

void print_cv_report(const mfd::CvReport& report, const std::vector<std::string>& names) {
    std::cout << "accuracy " << percent(report.mean_accuracy) << " % (standard deviation "
              << percent(report.std_accuracy) << ")\n"
              << report.correct_count << " of " << report.total_count
              << " correctly classified instances\n"
              << "confusion matrix (final run, rows = truth):\n";
    size_t name_w = 0;
    for (const auto& n : names) name_w = std::max(name_w, n.size());
    for (size_t r = 0; r < report.confusion.size(); ++r) {
        std::cout << "  " << std::setw(static_cast<int>(name_w)) << names[r];
        for (int64_t v : report.confusion[r]) std::cout << std::setw(6) << v;
        std::cout << "\n";
    }
}

json signature_params_json(const mfd::SignatureParams& p) {
    return json{{"sigma", p.sigma},
                {"r_max", p.r_max},
                {"grid_len", p.grid_len},
                {"feature_len", p.feature_len}};
}

// ---------------------------------------------------------------------
// ingest
// ---------------------------------------------------------------------

struct IngestArgs {
    std::vector<std::string> inputs;
    std::string out;
    ConfigCli cfg;
};

int cmd_ingest(const IngestArgs& args) {
    const mfd::RunConfig cfg = args.cfg.resolve();
    mfd::FrameSpec spec;
    if (args.inputs.size() == 1 && fs::is_directory(args.inputs[0])) {
        spec.frames = collect_frames(args.inputs[0]);
    } else {
        for (const auto& p : args.inputs) spec.frames.emplace_back(p);
    }
    spec.binarize_threshold = cfg.binarize_threshold;
    const mfd::VideoVolume vol = mfd::load_frame_sequence(spec, cfg.threads);
    mfd::save_volume(vol, args.out);
    std::cout << "wrote " << args.out << ": " << vol.width << "x" << vol.height << "x"
              << vol.depth << ", " << vol.foreground_count << " foreground voxels\n";
    return 0;
}

// ---------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------

struct SynthArgs {
    std::string kind;
    std::string extent = "32x32x32";
    std::vector<std::string> params;  // key=value
    double jitter = 0.0;
    std::string out;
    bool benchmark = false;
    std::string out_dir = ".";
    int per_class = 16;
    ConfigCli cfg;
};

int cmd_synth(const SynthArgs& args) {
    const mfd::RunConfig cfg = args.cfg.resolve();

    if (args.benchmark) {
        mfd::BenchmarkSpec bench;
        const auto ext = parse_extent(args.extent);
        bench.width = ext[0];
        bench.height = ext[1];
        bench.depth = ext[2];
        bench.per_class = args.per_class;
        bench.jitter = args.jitter;
        bench.seed = cfg.seed;

        fs::create_directories(args.out_dir);
        const auto instances = mfd::benchmark_instances(bench);
        mfd::Manifest manifest;
        for (const auto& inst : instances)
            manifest.rows.push_back({inst.instance_id + ".mfv", inst.class_name});
        mfd::parallel_for(instances.size(), cfg.threads, [&](size_t i) {
            const mfd::VideoVolume vol = mfd::generate(instances[i].spec);
            mfd::save_volume(vol, fs::path(args.out_dir) / manifest.rows[i].path);
        });
        const fs::path manifest_path = fs::path(args.out_dir) / "manifest.csv";
        mfd::write_manifest(manifest, manifest_path);
        std::cout << "wrote " << instances.size() << " volumes and " << manifest_path.string()
                  << "\n";
        return 0;
    }

    if (args.kind.empty()) throw mfd::UsageError("synth needs --kind or --benchmark");
    if (args.out.empty()) throw mfd::UsageError("synth --kind needs --out");

    mfd::SynthSpec spec;
    spec.kind = mfd::parse_kind(args.kind);
    const auto ext = parse_extent(args.extent);
    spec.width = ext[0];
    spec.height = ext[1];
    spec.depth = ext[2];
    spec.seed = cfg.seed;
    spec.jitter = args.jitter;
    for (const auto& kv : args.params) {
        const size_t eq = kv.find('=');
        if (eq == std::string::npos)
            throw mfd::UsageError("--param needs key=value, got '" + kv + "'");
        double v = 0;
        const std::string val = kv.substr(eq + 1);
        auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
        if (ec != std::errc{} || p != val.data() + val.size())
            throw mfd::UsageError("bad --param value '" + kv + "'");
        spec.params[kv.substr(0, eq)] = v;
    }

    const mfd::VideoVolume vol = mfd::generate(spec);
    mfd::save_volume(vol, args.out);
    std::cout << "wrote " << args.out << ": " << kind_name(spec.kind) << ", "
              << vol.foreground_count << " foreground voxels\n";
    return 0;
}

// ---------------------------------------------------------------------
// signature
// ---------------------------------------------------------------------

struct SignatureArgs {
    std::vector<std::string> inputs;
    std::string out_dir = ".";
    bool emit_curves = false;
    std::string format = "both";  // json|csv|both
    ConfigCli cfg;
};

int cmd_signature(const SignatureArgs& args) {
    const mfd::RunConfig cfg = args.cfg.resolve();
    const mfd::SignatureParams params = cfg.signature_params();
    params.validate();
    if (args.format != "json" && args.format != "csv" && args.format != "both")
        throw mfd::UsageError("--format must be json, csv or both");

    fs::create_directories(args.out_dir);
    std::vector<std::string> notes(args.inputs.size());
    std::vector<uint8_t> saturated(args.inputs.size(), 0);

    mfd::parallel_for(args.inputs.size(), cfg.threads, [&](size_t i) {
        const fs::path input(args.inputs[i]);
        const mfd::VideoVolume vol = load_input_volume(input, cfg);
        const std::string id =
            input.has_stem() ? input.stem().string() : input.filename().string();

        const mfd::DistanceField field = mfd::squared_edt(vol);
        const mfd::DilationCurve dcurve = mfd::dilation_curve(field, params.r_max);
        saturated[i] = dcurve.saturated() &&
                       dcurve.sq_radii.back() <
                           static_cast<int64_t>(params.r_max * params.r_max + 1e-9);
        const mfd::LogLogCurve llcurve = mfd::loglog(dcurve);
        const mfd::Signature sig = mfd::mfd_signature(llcurve, params, id);

        const fs::path base = fs::path(args.out_dir) / id;
        std::string made;
        if (args.format != "csv") {
            write_text_file(base.string() + ".sig.json", signature_to_json(sig).dump(2) + "\n");
            made = base.string() + ".sig.json";
        }
        if (args.format != "json") {
            std::ostringstream os;
            mfd::write_signature_csv(sig, os);
            write_text_file(base.string() + ".sig.csv", os.str());
            if (made.empty()) made = base.string() + ".sig.csv";
        }
        if (args.emit_curves) {
            std::ostringstream dos, los;
            mfd::write_dilation_csv(dcurve, dos);
            mfd::write_loglog_csv(llcurve, los);
            write_text_file(base.string() + ".dilation.csv", dos.str());
            write_text_file(base.string() + ".loglog.csv", los.str());
        }
        notes[i] = args.inputs[i] + " -> " + made;
    });

    for (const auto& note : notes) std::cout << note << "\n";
    size_t n_saturated = 0;
    for (uint8_t s : saturated) n_saturated += s;
    if (n_saturated > 0)
        std::cerr << "warning: " << n_saturated << " of " << args.inputs.size()
                  << " curves saturated before r_max (truncated at grid fill)\n";
    return 0;
}

// ---------------------------------------------------------------------
// crossval
// ---------------------------------------------------------------------

struct CrossvalArgs {
    std::string manifest;
    std::string report;
    ConfigCli cfg;
};

int cmd_crossval(const CrossvalArgs& args) {
    const mfd::RunConfig cfg = args.cfg.resolve();
    const mfd::Manifest manifest = mfd::read_manifest(args.manifest);
    const mfd::DatasetBundle bundle =
        mfd::dataset_from_manifest(manifest, fs::path(args.manifest).parent_path(), cfg);
    if (bundle.saturated_curves > 0)
        std::cerr << "warning: " << bundle.saturated_curves << " of "
                  << bundle.dataset.size()
                  << " curves saturated before r_max (truncated at grid fill)\n";

    const mfd::CvReport report = mfd::cross_validate(bundle.dataset, cfg.folds, cfg.runs,
                                                     cfg.svm_c, cfg.seed);
    std::cout << bundle.dataset.size() << " instances in " << bundle.dataset.class_names.size()
              << " classes, " << cfg.folds << "-fold cross-validation, " << cfg.runs
              << " runs\n";
    print_cv_report(report, bundle.dataset.class_names);

    if (!args.report.empty())
        write_text_file(args.report,
                        cv_json_with_config(report, bundle.dataset.class_names, cfg).dump(2) +
                            "\n");
    return 0;
}

// ---------------------------------------------------------------------
// train / predict
// ---------------------------------------------------------------------

struct TrainArgs {
    std::string manifest;
    std::string out;
    ConfigCli cfg;
};

int cmd_train(const TrainArgs& args) {
    const mfd::RunConfig cfg = args.cfg.resolve();
    const mfd::Manifest manifest = mfd::read_manifest(args.manifest);
    const mfd::DatasetBundle bundle =
        mfd::dataset_from_manifest(manifest, fs::path(args.manifest).parent_path(), cfg);

    const mfd::SvmModel model = mfd::train(bundle.dataset, cfg.svm_c, cfg.seed);
    json j = mfd::model_to_json(model);
    j["signature_params"] = signature_params_json(cfg.signature_params());
    write_text_file(args.out, j.dump(2) + "\n");
    std::cout << "trained " << model.pairs.size() << " pair classifiers on "
              << bundle.dataset.size() << " instances; wrote " << args.out << "\n";
    return 0;
}

struct PredictArgs {
    std::string model_path;
    std::vector<std::string> inputs;
    std::string out;
    ConfigCli cfg;
};

int cmd_predict(const PredictArgs& args) {
    mfd::RunConfig cfg = args.cfg.resolve();

    std::ifstream in(args.model_path);
    if (!in) mfd::fail("IoError", "cannot open model " + args.model_path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        mfd::fail("ParseError", std::string("bad model JSON: ") + e.what());
    }
    const mfd::SvmModel model = mfd::model_from_json(j);

    // signature parameters travel with the model; explicit flags override
    if (j.contains("signature_params")) {
        const auto& p = j["signature_params"];
        if (!args.cfg.explicit_sigma()) cfg.sigma = p.at("sigma").get<double>();
        if (!args.cfg.explicit_r_max()) cfg.r_max = p.at("r_max").get<double>();
        if (!args.cfg.explicit_grid_len()) cfg.grid_len = p.at("grid_len").get<uint32_t>();
        if (!args.cfg.explicit_feature_len())
            cfg.feature_len = p.at("feature_len").get<uint32_t>();
    }
    const mfd::SignatureParams params = cfg.signature_params();
    params.validate();

    std::vector<std::string> labels(args.inputs.size());
    mfd::parallel_for(args.inputs.size(), cfg.threads, [&](size_t i) {
        const mfd::VideoVolume vol = load_input_volume(args.inputs[i], cfg);
        const mfd::Signature sig = mfd::signature_of_volume(vol, params, args.inputs[i]);
        const int label = mfd::predict(model, sig.mfd);
        labels[i] = model.class_names.at(static_cast<size_t>(label));
    });

    std::ostringstream csv;
    csv << "path,label\n";
    for (size_t i = 0; i < args.inputs.size(); ++i) {
        std::cout << args.inputs[i] << "," << labels[i] << "\n";
        csv << args.inputs[i] << "," << labels[i] << "\n";
    }
    if (!args.out.empty()) write_text_file(args.out, csv.str());
    return 0;
}

// ---------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------

struct SweepArgs {
    std::string manifest;
    std::string sigma_range;
    std::string rmax_range;
    std::string out = "sweep.csv";
    ConfigCli cfg;
};

int cmd_sweep(const SweepArgs& args) {
    const mfd::RunConfig cfg = args.cfg.resolve();
    const std::vector<double> sigmas = parse_range(args.sigma_range, "sigma");
    const std::vector<double> rmaxes = parse_range(args.rmax_range, "r_max");

    const mfd::Manifest manifest = mfd::read_manifest(args.manifest);
    const fs::path manifest_dir = fs::path(args.manifest).parent_path();
    const std::vector<mfd::VideoVolume> volumes =
        mfd::load_manifest_volumes(manifest, manifest_dir, cfg.threads);

    std::vector<int> labels(manifest.rows.size());
    std::vector<std::string> class_names;
    for (size_t i = 0; i < manifest.rows.size(); ++i) {
        const std::string& label = manifest.rows[i].label;
        int id = -1;
        for (size_t c = 0; c < class_names.size(); ++c)
            if (class_names[c] == label) id = static_cast<int>(c);
        if (id < 0) {
            id = static_cast<int>(class_names.size());
            class_names.push_back(label);
        }
        labels[i] = id;
    }

    std::ostringstream csv;
    csv << "sigma,r_max,mean_accuracy,std_accuracy\n";
    double best_mean = -1.0, best_sigma = 0.0, best_rmax = 0.0;

    for (double r_max : rmaxes) {
        // log-log curves depend only on r_max; sigma touches just the
        // derivative stage, so curves are computed once per r_max
        std::vector<mfd::LogLogCurve> curves(volumes.size());
        std::vector<uint8_t> saturated(volumes.size(), 0);
        mfd::parallel_for(volumes.size(), cfg.threads, [&](size_t i) {
            const mfd::VolumeCurve vc = mfd::loglog_of_volume(volumes[i], r_max);
            curves[i] = vc.curve;
            saturated[i] = vc.saturated ? 1 : 0;
        });
        size_t n_saturated = 0;
        for (uint8_t s : saturated) n_saturated += s;
        if (n_saturated > 0)
            std::cerr << "warning: r_max=" << r_max << ": " << n_saturated << " of "
                      << volumes.size() << " curves saturated before r_max\n";

        for (double sigma : sigmas) {
            mfd::SignatureParams params = cfg.signature_params();
            params.sigma = sigma;
            params.r_max = r_max;
            params.validate();

            mfd::LabeledDataset data;
            data.class_names = class_names;
            data.labels = labels;
            data.features.resize(volumes.size());
            mfd::parallel_for(volumes.size(), cfg.threads, [&](size_t i) {
                data.features[i] =
                    mfd::mfd_signature(curves[i], params, manifest.rows[i].path).mfd;
            });

            const mfd::CvReport report =
                mfd::cross_validate(data, cfg.folds, cfg.runs, cfg.svm_c, cfg.seed);
            char sbuf[64], rbuf[64];
            auto [se, sec] = std::to_chars(sbuf, sbuf + sizeof sbuf, sigma);
            auto [re, rec] = std::to_chars(rbuf, rbuf + sizeof rbuf, r_max);
            (void)sec;
            (void)rec;
            csv << std::string(sbuf, se) << "," << std::string(rbuf, re) << ","
                << report.mean_accuracy << "," << report.std_accuracy << "\n";
            if (report.mean_accuracy > best_mean) {
                best_mean = report.mean_accuracy;
                best_sigma = sigma;
                best_rmax = r_max;
            }
        }
    }

    write_text_file(args.out, csv.str());
    std::cout << "wrote " << args.out << "\n"
              << "best: sigma=" << best_sigma << " r_max=" << best_rmax
              << " mean_accuracy=" << best_mean << "\n";
    return 0;
}

// ---------------------------------------------------------------------
// edt-verify
// ---------------------------------------------------------------------

struct EdtVerifyArgs {
    std::string input;
    std::string dump;
    ConfigCli cfg;
};

int cmd_edt_verify(const EdtVerifyArgs& args) {
    const mfd::RunConfig cfg = args.cfg.resolve();
    const mfd::VideoVolume vol = load_input_volume(args.input, cfg);
    const mfd::DistanceField fast = mfd::squared_edt(vol);
    const mfd::DistanceField brute = mfd::brute_force_edt(vol);

    for (uint64_t i = 0; i < fast.num_voxels(); ++i) {
        if (fast.sqdist[i] != brute.sqdist[i]) {
            const uint32_t x = static_cast<uint32_t>(i % fast.width);
            const uint32_t y = static_cast<uint32_t>((i / fast.width) % fast.height);
            const uint32_t z = static_cast<uint32_t>(i / (static_cast<uint64_t>(fast.width) *
                                                          fast.height));
            mfd::fail("EdtMismatch",
                      "voxel (" + std::to_string(x) + "," + std::to_string(y) + "," +
                          std::to_string(z) + "): separable=" +
                          std::to_string(fast.sqdist[i]) +
                          " brute=" + std::to_string(brute.sqdist[i]));
        }
    }
    if (!args.dump.empty()) mfd::save_distance_field(fast, args.dump);
    std::cout << "edt-verify: PASS (" << fast.num_voxels() << " voxels, "
              << vol.foreground_count << " foreground)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"space-time multi-scale fractal dimension motion analysis"};
    app.require_subcommand(1);

    IngestArgs ingest;
    auto* ingest_cmd =
        app.add_subcommand("ingest", "build an MFV1 volume from silhouette frames");
    ingest_cmd->add_option("inputs", ingest.inputs, "frame files or one frame directory")
        ->required();
    ingest_cmd->add_option("--out", ingest.out, "output MFV1 path")->required();
    ingest.cfg.attach(ingest_cmd);

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "generate synthetic volumes");
    synth_cmd->add_option("--kind", synth.kind,
                          "point|line|plane|solid_block|moving_sphere|oscillating_bar|"
                          "expanding_blob|zigzag_walker");
    synth_cmd->add_option("--extent", synth.extent, "volume extent WxHxD");
    synth_cmd->add_option("--param", synth.params, "kind parameter key=value (repeatable)");
    synth_cmd->add_option("--jitter", synth.jitter, "per-voxel flip probability [0, 0.05]");
    synth_cmd->add_option("--out", synth.out, "output MFV1 path (single volume mode)");
    synth_cmd->add_flag("--benchmark", synth.benchmark,
                        "write the 4-class motion benchmark plus manifest.csv");
    synth_cmd->add_option("--out-dir", synth.out_dir, "benchmark output directory");
    synth_cmd->add_option("--per-class", synth.per_class, "benchmark instances per class");
    synth.cfg.attach(synth_cmd);

    SignatureArgs signature;
    auto* signature_cmd =
        app.add_subcommand("signature", "compute MFD signatures for volumes or frame dirs");
    signature_cmd->add_option("inputs", signature.inputs, "MFV1 files or frame directories")
        ->required();
    signature_cmd->add_option("--out-dir", signature.out_dir, "output directory");
    signature_cmd->add_flag("--emit-curves", signature.emit_curves,
                            "also write dilation and log-log curve CSVs");
    signature_cmd->add_option("--format", signature.format, "json|csv|both");
    signature.cfg.attach(signature_cmd);

    CrossvalArgs crossval;
    auto* crossval_cmd =
        app.add_subcommand("crossval", "repeated stratified k-fold cross-validation");
    crossval_cmd->add_option("--manifest", crossval.manifest, "path,label manifest CSV")
        ->required();
    crossval_cmd->add_option("--report", crossval.report, "JSON report output path");
    crossval.cfg.attach(crossval_cmd);

    TrainArgs train_args;
    auto* train_cmd = app.add_subcommand("train", "train an SVM on a manifest");
    train_cmd->add_option("--manifest", train_args.manifest, "path,label manifest CSV")
        ->required();
    train_cmd->add_option("--out", train_args.out, "model JSON output path")->required();
    train_args.cfg.attach(train_cmd);

    PredictArgs predict_args;
    auto* predict_cmd = app.add_subcommand("predict", "classify volumes with a trained model");
    predict_cmd->add_option("--model", predict_args.model_path, "model JSON path")->required();
    predict_cmd->add_option("inputs", predict_args.inputs, "MFV1 files or frame directories")
        ->required();
    predict_cmd->add_option("--out", predict_args.out, "prediction CSV output path");
    predict_args.cfg.attach(predict_cmd);

    SweepArgs sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "grid sweep over sigma and r_max");
    sweep_cmd->add_option("--manifest", sweep.manifest, "path,label manifest CSV")->required();
    sweep_cmd->add_option("--sigma-range", sweep.sigma_range, "sigma values (a:b, a:b:s or list)")
        ->required();
    sweep_cmd->add_option("--rmax-range", sweep.rmax_range, "r_max values (a:b, a:b:s or list)")
        ->required();
    sweep_cmd->add_option("--out", sweep.out, "sweep CSV output path");
    sweep.cfg.attach(sweep_cmd);

    EdtVerifyArgs edt_verify;
    auto* edt_verify_cmd =
        app.add_subcommand("edt-verify", "compare separable EDT against the brute-force oracle");
    edt_verify_cmd->add_option("input", edt_verify.input, "MFV1 file or frame directory")
        ->required();
    edt_verify_cmd->add_option("--dump", edt_verify.dump, "write the MFD1 distance field");
    edt_verify.cfg.attach(edt_verify_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage problems exit 1, --help exits 0
    }

    try {
        if (ingest_cmd->parsed()) return cmd_ingest(ingest);
        if (synth_cmd->parsed()) return cmd_synth(synth);
        if (signature_cmd->parsed()) return cmd_signature(signature);
        if (crossval_cmd->parsed()) return cmd_crossval(crossval);
        if (train_cmd->parsed()) return cmd_train(train_args);
        if (predict_cmd->parsed()) return cmd_predict(predict_args);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep);
        if (edt_verify_cmd->parsed()) return cmd_edt_verify(edt_verify);
        throw mfd::UsageError("no subcommand given");
    } catch (const mfd::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const mfd::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: Unhandled: " << e.what() << "\n";
        return 2;
    }
}
