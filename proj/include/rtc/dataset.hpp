#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rtc/errors.hpp"

namespace rtc {

inline constexpr int kTaskCount = 7;

enum class GroupLabel { HC, EMci, AMci, MdMci, EsAd };

inline constexpr std::array<GroupLabel, 5> kAllLabels = {
    GroupLabel::HC, GroupLabel::EMci, GroupLabel::AMci, GroupLabel::MdMci,
    GroupLabel::EsAd};

std::string to_string(GroupLabel label);
GroupLabel label_from_string(const std::string& text);  // throws UnknownLabel

// Per-subject task durations in seconds. A missing entry means the subject
// never completed (or never recorded) that task. Present values are >= 0.
struct DurationSample {
  std::string subject_id;
  GroupLabel label = GroupLabel::HC;
  std::array<std::optional<double>, kTaskCount> tasks;  // index j-1 <-> task j

  bool has_task(int task) const { return tasks[task - 1].has_value(); }
  double task(int task) const { return *tasks[task - 1]; }
  void set_task(int task, double seconds) { tasks[task - 1] = seconds; }
};

// The classes a binary view was built from: negative maps to -1, positive
// to +1 throughout the classifiers.
struct BinaryPolarity {
  GroupLabel negative = GroupLabel::HC;
  GroupLabel positive = GroupLabel::EsAd;
};

struct DurationDataset {
  std::vector<DurationSample> samples;
  std::optional<BinaryPolarity> polarity;  // set by pair_subset

  std::size_t size() const { return samples.size(); }
  std::size_t count_label(GroupLabel l) const;
};

// Non-empty subset of the seven tasks, used to select feature columns.
class IndicatorVector {
 public:
  explicit IndicatorVector(const std::array<bool, kTaskCount>& bits);
  static IndicatorVector from_mask(unsigned mask);  // bit j-1 <-> task j
  static IndicatorVector from_tasks(const std::vector<int>& tasks);

  bool selects(int task) const { return bits_[task - 1]; }
  int count() const;
  unsigned mask() const;
  std::vector<int> tasks() const;  // ascending
  std::string to_string() const;   // e.g. "2,4,7"

  friend bool operator==(const IndicatorVector&, const IndicatorVector&) = default;

 private:
  std::array<bool, kTaskCount> bits_{};
};

// All 127 non-empty subsets, ascending by mask value.
std::vector<IndicatorVector> all_indicator_vectors();

struct SelectionResult {
  DurationDataset dataset;   // only the selected tasks remain populated
  std::size_t dropped = 0;   // samples removed for missing a selected task
};

// Projects onto the selected tasks; samples missing any selected task are
// dropped. Throws EmptyResult if nothing survives.
SelectionResult select_features(const DurationDataset& ds, const IndicatorVector& indicator);

// Keeps only the two named classes and fixes the -1/+1 polarity. Throws
// ClassAbsent if either class has no samples.
DurationDataset pair_subset(const DurationDataset& ds, GroupLabel negative, GroupLabel positive);

struct FeatureScale {
  double min = 0.0;
  double max = 0.0;
};

// Per-task affine map onto [-1, 1], fitted on training data only. Tasks with
// no observed values carry no scale.
struct ScalerParams {
  std::array<std::optional<FeatureScale>, kTaskCount> per_task;
};

// Fits min/max over the present values of each populated task column.
// Throws DegenerateFeature if a populated column has max == min.
ScalerParams fit_scaler(const DurationDataset& ds);

// x -> 2*(x - min)/(max - min) - 1; extrapolates linearly outside the fitted
// range. Present tasks must have a fitted scale.
DurationDataset apply_scaler(const DurationDataset& ds, const ScalerParams& params);

// Row-major feature matrix over the indicator's tasks (ascending task order).
// Every sample must have all selected tasks present.
std::vector<std::vector<double>> dense_features(const DurationDataset& ds,
                                                const IndicatorVector& indicator);

// -1/+1 labels under the dataset's polarity (which must be set).
std::vector<int> binary_labels(const DurationDataset& ds);

// CSV with header "subject,label,t1,...,t7"; empty field = missing task.
// Doubles round-trip exactly (shortest form that re-reads to the same bits).
DurationDataset parse_duration_csv(const std::string& text);
std::string duration_csv(const DurationDataset& ds);

std::string format_double(double v);        // shortest exact decimal form
double parse_double(const std::string& s);  // strict; throws MalformedRow

}  // namespace rtc
