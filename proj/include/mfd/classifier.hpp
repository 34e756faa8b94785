#pragma once

#include "mfd/rng.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace mfd {

struct LabeledDataset {
    std::vector<std::vector<double>> features;  // uniform length
    std::vector<int> labels;                    // index into class_names
    std::vector<std::string> class_names;

    size_t size() const { return features.size(); }
    size_t dim() const { return features.empty() ? 0 : features[0].size(); }
};

// One binary one-vs-one subproblem; the decision value w.z + bias is
// positive for class_a (computed on standardized features).
struct PairClassifier {
    int class_a = 0;
    int class_b = 0;
    std::vector<double> weights;
    double bias = 0.0;
};

struct SvmModel {
    std::vector<std::string> class_names;
    double C = 1.0;
    std::vector<double> means;  // per-attribute standardization statistics
    std::vector<double> stds;   // 0 marks a zero-variance attribute
    std::vector<PairClassifier> pairs;  // all a < b, lexicographic order

    std::vector<double> standardize(std::span<const double> features) const;
};

// Trains a one-vs-one linear SVM. Attributes are standardized with
// training-set statistics (zero-variance attributes map to zero). Each
// pair minimizes 1/2 ||w||^2 + C * sum hinge via dual coordinate descent
// (bias handled as a regularized constant attribute) to duality gap
// <= 1e-3 relative. Deterministic given the seed.
// Errors: DegenerateDataset, DimensionMismatch.
SvmModel train(const LabeledDataset& data, double C, uint64_t seed = 0);

// Pair votes by decision-function sign; majority wins; ties break to the
// lowest class index. Errors: DimensionMismatch.
int predict(const SvmModel& model, std::span<const double> features);

struct CvReport {
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;
    std::vector<double> run_accuracies;
    std::vector<std::vector<int64_t>> confusion;  // final run, rows = truth
    int64_t correct_count = 0;  // round(mean_accuracy * total), "X of Y" style
    int64_t total_count = 0;
};

// Test hook: called once per (run, fold) with the exact index split.
using FoldObserver =
    std::function<void(int run, int fold, const std::vector<size_t>& train_idx,
                       const std::vector<size_t>& test_idx)>;

// Stratified fold ids, one per instance: per class, members are shuffled
// and dealt round-robin, so per-class fold counts differ by at most 1.
std::vector<int> stratified_folds(const std::vector<int>& labels, int folds, Rng& rng);

// Repeated stratified k-fold cross-validation: per run, shuffle with a
// run-specific seed, split, train on folds-1, test on the held-out fold.
// Reports mean and sample standard deviation of the per-run accuracies.
// Errors: TooFewInstances when any class has fewer members than folds.
CvReport cross_validate(const LabeledDataset& data, int folds, int runs, double C,
                        uint64_t seed, const FoldObserver& observer = nullptr);

// Model persistence.
nlohmann::json model_to_json(const SvmModel& model);
SvmModel model_from_json(const nlohmann::json& j);

nlohmann::json cv_report_to_json(const CvReport& report,
                                 const std::vector<std::string>& class_names);

} // namespace mfd
