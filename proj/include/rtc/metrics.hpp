#pragma once

#include <cstdint>

#include "rtc/errors.hpp"

namespace rtc {

// Binary confusion counts; "positive" is the +1 class of the pair polarity.
struct ConfusionMatrix {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;

  void add(bool truth_positive, bool predicted_positive) {
    if (truth_positive) {
      (predicted_positive ? tp : fn) += 1;
    } else {
      (predicted_positive ? fp : tn) += 1;
    }
  }

  std::int64_t total() const { return tp + fp + fn + tn; }
  std::int64_t errors() const { return fp + fn; }

  ConfusionMatrix& operator+=(const ConfusionMatrix& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
  }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct Metrics {
  double accuracy = 0.0;     // (tp+tn) / total
  double sensitivity = 0.0;  // tp / (tp+fn)
  double specificity = 0.0;  // tn / (tn+fp)
};

// Throws UndefinedMetric when any denominator is zero; no NaN ever escapes.
Metrics compute_metrics(const ConfusionMatrix& cm);

double error_rate(const ConfusionMatrix& cm);  // errors / total; UndefinedMetric if empty

}  // namespace rtc
