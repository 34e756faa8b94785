#include "mfd/classifier.hpp"

#include "mfd/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mfd {

namespace {

void validate_dataset(const LabeledDataset& data) {
    if (data.features.empty()) fail("DegenerateDataset", "dataset is empty");
    if (data.features.size() != data.labels.size())
        fail("DimensionMismatch", "feature/label count mismatch");
    if (data.class_names.size() < 2)
        fail("DegenerateDataset", "need at least 2 classes");
    const size_t dim = data.features[0].size();
    for (const auto& f : data.features)
        if (f.size() != dim) fail("DimensionMismatch", "ragged feature vectors");
    std::vector<int64_t> counts(data.class_names.size(), 0);
    for (int label : data.labels) {
        if (label < 0 || static_cast<size_t>(label) >= data.class_names.size())
            fail("DimensionMismatch", "label out of range");
        ++counts[static_cast<size_t>(label)];
    }
    for (size_t c = 0; c < counts.size(); ++c)
        if (counts[c] == 0)
            fail("DegenerateDataset", "class '" + data.class_names[c] + "' has no instances");
}

// L1-hinge linear SVM via dual coordinate descent; the bias enters as a
// regularized constant attribute, so the dual is box-constrained only.
//   primal: min 1/2 (||w||^2 + b^2) + C sum_i max(0, 1 - y_i (w.x_i + b))
// Stops at relative duality gap <= tol.
struct BinarySolution {
    std::vector<double> weights;  // length dim
    double bias = 0.0;
};

BinarySolution solve_binary(const std::vector<const double*>& rows, size_t dim,
                            const std::vector<int8_t>& y, double C, double tol, Rng& rng) {
    const size_t n = rows.size();
    std::vector<double> alpha(n, 0.0);
    std::vector<double> w(dim + 1, 0.0);  // w[dim] is the bias
    std::vector<double> qdiag(n);
    for (size_t i = 0; i < n; ++i) {
        double q = 1.0;  // bias attribute
        for (size_t k = 0; k < dim; ++k) q += rows[i][k] * rows[i][k];
        qdiag[i] = q;
    }

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});

    const int max_epochs = 10000;
    for (int epoch = 0; epoch < max_epochs; ++epoch) {
        rng.shuffle(order);
        for (size_t i : order) {
            const double* x = rows[i];
            double f = w[dim];
            for (size_t k = 0; k < dim; ++k) f += w[k] * x[k];
            const double g = y[i] * f - 1.0;

            double pg = g;
            if (alpha[i] <= 0.0 && g > 0.0) pg = 0.0;
            if (alpha[i] >= C && g < 0.0) pg = 0.0;
            if (std::abs(pg) < 1e-14) continue;

            const double old = alpha[i];
            alpha[i] = std::clamp(old - g / qdiag[i], 0.0, C);
            const double delta = (alpha[i] - old) * y[i];
            if (delta != 0.0) {
                for (size_t k = 0; k < dim; ++k) w[k] += delta * x[k];
                w[dim] += delta;
            }
        }

        double wsq = 0.0;
        for (double v : w) wsq += v * v;
        double hinge = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double f = w[dim];
            for (size_t k = 0; k < dim; ++k) f += w[k] * rows[i][k];
            hinge += std::max(0.0, 1.0 - y[i] * f);
        }
        const double primal = 0.5 * wsq + C * hinge;
        const double dual = std::accumulate(alpha.begin(), alpha.end(), 0.0) - 0.5 * wsq;
        if (primal - dual <= tol * std::max(1.0, std::abs(primal))) break;
    }

    BinarySolution sol;
    sol.weights.assign(w.begin(), w.begin() + static_cast<ptrdiff_t>(dim));
    sol.bias = w[dim];
    return sol;
}

} // namespace

std::vector<double> SvmModel::standardize(std::span<const double> features) const {
    std::vector<double> z(features.size());
    for (size_t k = 0; k < features.size(); ++k)
        z[k] = stds[k] > 0.0 ? (features[k] - means[k]) / stds[k] : 0.0;
    return z;
}

SvmModel train(const LabeledDataset& data, double C, uint64_t seed) {
    validate_dataset(data);
    if (!(C > 0.0)) fail("BadParams", "C must be > 0");

    const size_t n = data.size();
    const size_t dim = data.dim();

    SvmModel model;
    model.class_names = data.class_names;
    model.C = C;
    model.means.assign(dim, 0.0);
    model.stds.assign(dim, 0.0);

    for (const auto& f : data.features)
        for (size_t k = 0; k < dim; ++k) model.means[k] += f[k];
    for (size_t k = 0; k < dim; ++k) model.means[k] /= static_cast<double>(n);
    for (const auto& f : data.features)
        for (size_t k = 0; k < dim; ++k) {
            const double d = f[k] - model.means[k];
            model.stds[k] += d * d;
        }
    for (size_t k = 0; k < dim; ++k) {
        model.stds[k] = std::sqrt(model.stds[k] / static_cast<double>(n));
        if (model.stds[k] < 1e-12) model.stds[k] = 0.0;  // zero-variance attribute
    }

    std::vector<std::vector<double>> standardized(n);
    for (size_t i = 0; i < n; ++i) standardized[i] = model.standardize(data.features[i]);

    const int k_classes = static_cast<int>(data.class_names.size());
    for (int a = 0; a < k_classes; ++a) {
        for (int b = a + 1; b < k_classes; ++b) {
            std::vector<const double*> rows;
            std::vector<int8_t> y;
            for (size_t i = 0; i < n; ++i) {
                if (data.labels[i] == a) {
                    rows.push_back(standardized[i].data());
                    y.push_back(1);
                } else if (data.labels[i] == b) {
                    rows.push_back(standardized[i].data());
                    y.push_back(-1);
                }
            }
            Rng rng(mix64(seed, static_cast<uint64_t>(a) * 1000003u + static_cast<uint64_t>(b)));
            BinarySolution sol = solve_binary(rows, dim, y, C, 1e-3, rng);
            model.pairs.push_back({a, b, std::move(sol.weights), sol.bias});
        }
    }
    return model;
}

int predict(const SvmModel& model, std::span<const double> features) {
    if (features.size() != model.means.size())
        fail("DimensionMismatch", "feature length " + std::to_string(features.size()) +
                                      " does not match model attribute count " +
                                      std::to_string(model.means.size()));
    const std::vector<double> z = model.standardize(features);

    std::vector<int> votes(model.class_names.size(), 0);
    for (const PairClassifier& pair : model.pairs) {
        double f = pair.bias;
        for (size_t k = 0; k < z.size(); ++k) f += pair.weights[k] * z[k];
        ++votes[static_cast<size_t>(f >= 0.0 ? pair.class_a : pair.class_b)];
    }

    int best = 0;
    for (size_t c = 1; c < votes.size(); ++c)
        if (votes[c] > votes[static_cast<size_t>(best)]) best = static_cast<int>(c);
    return best;  // ties fall to the lowest class index
}

std::vector<int> stratified_folds(const std::vector<int>& labels, int folds, Rng& rng) {
    int max_label = 0;
    for (int l : labels) max_label = std::max(max_label, l);

    std::vector<int> fold_of(labels.size(), -1);
    for (int c = 0; c <= max_label; ++c) {
        std::vector<size_t> members;
        for (size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == c) members.push_back(i);
        if (members.empty()) continue;
        rng.shuffle(members);
        const int offset = static_cast<int>(rng.below(static_cast<uint64_t>(folds)));
        for (size_t j = 0; j < members.size(); ++j)
            fold_of[members[j]] = static_cast<int>((j + static_cast<size_t>(offset)) %
                                                   static_cast<size_t>(folds));
    }
    return fold_of;
}

CvReport cross_validate(const LabeledDataset& data, int folds, int runs, double C,
                        uint64_t seed, const FoldObserver& observer) {
    validate_dataset(data);
    if (folds < 2) fail("BadParams", "folds must be >= 2");
    if (runs < 1) fail("BadParams", "runs must be >= 1");

    std::vector<int64_t> class_counts(data.class_names.size(), 0);
    for (int l : data.labels) ++class_counts[static_cast<size_t>(l)];
    for (size_t c = 0; c < class_counts.size(); ++c)
        if (class_counts[c] < folds)
            fail("TooFewInstances", "class '" + data.class_names[c] + "' has " +
                                        std::to_string(class_counts[c]) + " instances, need >= " +
                                        std::to_string(folds));

    CvReport report;
    report.total_count = static_cast<int64_t>(data.size());
    const size_t k_classes = data.class_names.size();

    for (int run = 0; run < runs; ++run) {
        Rng rng(mix64(seed, 0x5eed0000u + static_cast<uint64_t>(run)));
        const std::vector<int> fold_of = stratified_folds(data.labels, folds, rng);

        int64_t run_correct = 0;
        std::vector<std::vector<int64_t>> confusion(k_classes,
                                                    std::vector<int64_t>(k_classes, 0));

        for (int fold = 0; fold < folds; ++fold) {
            std::vector<size_t> train_idx, test_idx;
            for (size_t i = 0; i < data.size(); ++i)
                (fold_of[i] == fold ? test_idx : train_idx).push_back(i);
            if (observer) observer(run, fold, train_idx, test_idx);

            LabeledDataset sub;
            sub.class_names = data.class_names;
            sub.features.reserve(train_idx.size());
            for (size_t i : train_idx) {
                sub.features.push_back(data.features[i]);
                sub.labels.push_back(data.labels[i]);
            }

            const SvmModel model =
                train(sub, C, mix64(seed, static_cast<uint64_t>(run) * 1000u +
                                              static_cast<uint64_t>(fold)));
            for (size_t i : test_idx) {
                const int predicted = predict(model, data.features[i]);
                if (predicted == data.labels[i]) ++run_correct;
                ++confusion[static_cast<size_t>(data.labels[i])][static_cast<size_t>(predicted)];
            }
        }

        report.run_accuracies.push_back(static_cast<double>(run_correct) /
                                        static_cast<double>(data.size()));
        if (run == runs - 1) report.confusion = std::move(confusion);
    }

    double mean = 0.0;
    for (double a : report.run_accuracies) mean += a;
    mean /= static_cast<double>(runs);
    double var = 0.0;
    for (double a : report.run_accuracies) var += (a - mean) * (a - mean);
    report.mean_accuracy = mean;
    report.std_accuracy = runs > 1 ? std::sqrt(var / static_cast<double>(runs - 1)) : 0.0;
    report.correct_count = std::llround(mean * static_cast<double>(report.total_count));
    return report;
}

nlohmann::json model_to_json(const SvmModel& model) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& p : model.pairs)
        pairs.push_back({{"class_a", p.class_a},
                         {"class_b", p.class_b},
                         {"weights", p.weights},
                         {"bias", p.bias}});
    return nlohmann::json{{"class_names", model.class_names},
                          {"C", model.C},
                          {"normalization", {{"means", model.means}, {"stds", model.stds}}},
                          {"pairs", pairs}};
}

SvmModel model_from_json(const nlohmann::json& j) {
    SvmModel model;
    model.class_names = j.at("class_names").get<std::vector<std::string>>();
    model.C = j.at("C").get<double>();
    model.means = j.at("normalization").at("means").get<std::vector<double>>();
    model.stds = j.at("normalization").at("stds").get<std::vector<double>>();
    for (const auto& p : j.at("pairs")) {
        PairClassifier pair;
        pair.class_a = p.at("class_a").get<int>();
        pair.class_b = p.at("class_b").get<int>();
        pair.weights = p.at("weights").get<std::vector<double>>();
        pair.bias = p.at("bias").get<double>();
        model.pairs.push_back(std::move(pair));
    }
    return model;
}

nlohmann::json cv_report_to_json(const CvReport& report,
                                 const std::vector<std::string>& class_names) {
    return nlohmann::json{{"mean_accuracy", report.mean_accuracy},
                          {"std_accuracy", report.std_accuracy},
                          {"run_accuracies", report.run_accuracies},
                          {"confusion", report.confusion},
                          {"correct_count", report.correct_count},
                          {"total_count", report.total_count},
                          {"class_names", class_names}};
}

} // namespace mfd
