#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "rtc/dataset.hpp"
#include "rtc/metrics.hpp"
#include "rtc/svm.hpp"

namespace rtc {

// One grid cell: which tasks feed the classifier plus the RBF hyperparameters.
struct SvmGridConfig {
  IndicatorVector indicator;
  double c = 1.0;
  double gamma = 1.0;

  friend bool operator==(const SvmGridConfig&, const SvmGridConfig&) = default;
};

// The standard soft-margin / kernel-width ladder searched by default.
inline constexpr std::array<double, 10> kDefaultLadder = {0.1, 0.2, 0.5, 1.0,  2.0,
                                                          5.0, 10.0, 20.0, 50.0, 100.0};

struct GridSpec {
  std::vector<IndicatorVector> indicators;
  std::vector<double> c_values;
  std::vector<double> gamma_values;

  // All 127 task subsets crossed with the default ladder on both axes:
  // 12,700 configurations.
  static GridSpec full();
};

// Cartesian product in a fixed order: indicators (as listed), then c, then
// gamma, innermost. Throws EmptyGrid if any axis is empty.
std::vector<SvmGridConfig> enumerate_configs(const GridSpec& grid);

struct CvOptions {
  bool scale_per_fold = false;  // refit the [-1,1] scaler inside each fold
  int threads = 1;              // < 1 means hardware concurrency
  SvmTrainOptions train;
};

// Leave-one-out result of a single configuration. A configuration is
// infeasible when feature selection leaves no usable binary problem (empty
// result, a class with fewer than two samples, or a constant feature).
struct ConfigEvaluation {
  bool feasible = false;
  std::int64_t error_count = 0;
  std::size_t evaluated = 0;  // samples with all selected tasks present
  ConfusionMatrix confusion;

  double rate() const {
    return evaluated == 0 ? 1.0
                          : static_cast<double>(error_count) / static_cast<double>(evaluated);
  }
};

// LOOCV of every configuration, in enumeration order. The dataset must carry
// a binary polarity (see pair_subset).
std::vector<ConfigEvaluation> evaluate_grid_loocv(const DurationDataset& ds,
                                                  const GridSpec& grid,
                                                  const CvOptions& opts = {});

struct GridSearchResult {
  SvmGridConfig best;
  std::size_t best_index = 0;  // into enumerate_configs(grid)
  ConfigEvaluation eval;
};

// Minimizes the LOOCV error rate; on ties the earliest configuration in
// enumeration order wins. Throws EmptyResult if nothing is feasible.
GridSearchResult loocv_grid_search(const DurationDataset& ds, const GridSpec& grid,
                                   const CvOptions& opts = {});

// Leave-one-out on the outside; for each held-out sample the full grid is
// re-searched on the remainder (selection by inner LOOCV error count) and the
// winner is retrained to classify the held-out sample. An outer sample that
// cannot be classified (missing selected tasks, or no feasible inner
// configuration) counts as an error.
struct NestedCvResult {
  std::size_t n = 0;
  std::int64_t errors = 0;
  double accuracy = 0.0;
  ConfusionMatrix confusion;
  std::vector<std::optional<SvmGridConfig>> fold_configs;  // one per sample
  std::optional<SvmGridConfig> modal_config;
  std::size_t modal_count = 0;
};

NestedCvResult nested_cv(const DurationDataset& ds, const GridSpec& grid,
                         const CvOptions& opts = {});

// Trains on the full (selected, scaled) dataset and classifies the same
// samples; the resubstitution counterpart of the CV numbers.
ConfusionMatrix train_as_test(const DurationDataset& ds, const SvmGridConfig& config,
                              const CvOptions& opts = {});

struct KfoldResult {
  int k = 0;
  std::size_t repetitions = 0;
  std::uint64_t seed = 0;
  std::size_t evaluated = 0;                        // post-drop sample count
  std::map<std::int64_t, std::int64_t> histogram;   // total errors -> #repetitions
};

// Repeats k-fold CV of one fixed configuration with a fresh seeded shuffle
// per repetition. Fold sizes differ by at most one (the first n mod k folds
// take the extra sample). k = n reduces to LOOCV. Throws BadFoldCount unless
// 2 <= k <= n.
KfoldResult repeated_kfold(const DurationDataset& ds, int k, const SvmGridConfig& config,
                           std::size_t repetitions, std::uint64_t seed,
                           const CvOptions& opts = {});

}  // namespace rtc
