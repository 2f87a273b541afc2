#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rtc/dataset.hpp"
#include "rtc/metrics.hpp"

namespace rtc {

// One subject reduced to the durations of tasks 4, 7 and 2 (in that
// coordinate order) under the clamped measurement; label is HC or ES-AD.
struct TripleSample {
  std::string subject_id;
  GroupLabel label = GroupLabel::HC;
  double t4 = 0.0;
  double t7 = 0.0;
  double t2 = 0.0;

  std::array<double, 3> coords() const { return {t4, t7, t2}; }
};

// Keeps samples that carry tasks 2, 4 and 7; others are dropped. All labels
// must be HC or ES-AD (run pair_subset first). Throws EmptyResult if nothing
// survives.
std::vector<TripleSample> to_triples(const DurationDataset& ds);

// The (t4, t7) plane splits at the prescribed 15 s limit:
//   region 1: both under;  region 2: both at the limit;
//   region 3: t4 at the limit;  region 4: t7 at the limit.
enum class Region { R1 = 1, R2 = 2, R3 = 3, R4 = 4 };

// A coordinate counts as "at the limit" within 1e-9 of 15. Values outside
// [0, 15 + 1e-9] (or a negative t2) throw OutOfDomain.
Region assign_region(double t4, double t7);
Region assign_region(const TripleSample& s);

inline constexpr double kRegionTolerance = 1e-9;

// How atypical samples are found before the cell statistics are computed:
//   Jackknife    leave-one-out z-score per active coordinate (pair-gap
//                comparison against the sibling class when a cell holds
//                exactly two samples)
//   AllSamples   z-score against the cell's own all-sample fit; kept for
//                reference, provably silent below 18 samples per cell
//   None         no exclusion
enum class AtypicalRule { Jackknife, AllSamples, None };

struct GmFitOptions {
  AtypicalRule atypical_rule = AtypicalRule::Jackknife;
  double atypical_threshold = 4.0;  // in estimated standard deviations
  bool truncated_normal = false;    // renormalize t4/t7 densities over [0, 15]
  bool use_t2_outside_region2 = true;
};

// Coordinate indices (0=t4, 1=t7, 2=t2) that vary within a region; the
// clamped coordinates sit exactly at 15 and carry no information.
std::vector<int> active_dims(Region r, const GmFitOptions& opts);

// Estimates for one (region, class) cell.
struct GmCell {
  std::int64_t count_pre = 0;   // samples before exclusion; prior numerator
  std::int64_t count_post = 0;  // survivors the moments are computed from
  std::optional<std::array<double, 3>> mu;     // present when count_post >= 1
  std::optional<std::array<double, 3>> sigma;  // unbiased; present when count_post >= 2
  std::vector<std::string> excluded;           // subject ids removed as atypical

  bool usable() const { return count_post >= 2; }
};

struct RegionMixtureModel {
  std::array<std::array<GmCell, 2>, 4> cells;  // [region-1][0=HC, 1=ES-AD]
  std::array<std::int64_t, 4> region_counts{};  // prior denominators, pre-exclusion
  GmFitOptions options;

  const GmCell& cell(Region r, GroupLabel label) const;
  GmCell& cell(Region r, GroupLabel label);
};

int class_index(GroupLabel label);  // 0 = HC, 1 = ES-AD

RegionMixtureModel fit_region_mixtures(const std::vector<TripleSample>& data,
                                       const GmFitOptions& opts = {});

// Product of univariate normal densities over the region's active
// coordinates. A zero-variance active coordinate contributes 1 when the
// query sits on the collapsed value (within tolerance) and 0 otherwise.
// Throws UnusableCell when the cell has fewer than two survivors.
double gm_density(const RegionMixtureModel& model, Region r, GroupLabel label,
                  const std::array<double, 3>& x);

// Prior-weighted density; an unusable cell scores 0 instead of throwing.
double gm_score(const RegionMixtureModel& model, Region r, GroupLabel label,
                const std::array<double, 3>& x);

// Highest score wins; exact ties resolve to ES-AD. When neither cell of the
// query's region is usable the larger pre-exclusion cell count decides, then
// the overall class counts, then ES-AD.
GroupLabel gm_predict(const RegionMixtureModel& model, const std::array<double, 3>& x);

struct RegionErrorRecord {
  std::string subject_id;
  Region region = Region::R1;
  GroupLabel truth = GroupLabel::HC;
  GroupLabel predicted = GroupLabel::HC;
};

struct RegionEvalResult {
  ConfusionMatrix confusion;  // positive class = ES-AD
  std::vector<RegionErrorRecord> errors;
};

RegionEvalResult gm_train_as_test(const std::vector<TripleSample>& data,
                              const GmFitOptions& opts = {});

// Leave-one-out: the whole fit, exclusion included, is redone per fold.
RegionEvalResult gm_loocv(const std::vector<TripleSample>& data, const GmFitOptions& opts = {});

std::string gm_model_json(const RegionMixtureModel& model);
RegionMixtureModel gm_model_from_json(const std::string& text);

}  // namespace rtc
