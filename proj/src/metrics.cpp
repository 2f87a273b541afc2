#include "rtc/metrics.hpp"

namespace rtc {

Metrics compute_metrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw UndefinedMetric("accuracy of an empty confusion matrix");
  if (cm.tp + cm.fn == 0) throw UndefinedMetric("sensitivity with no positive samples");
  if (cm.tn + cm.fp == 0) throw UndefinedMetric("specificity with no negative samples");
  Metrics m;
  m.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
  m.sensitivity = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
  m.specificity = static_cast<double>(cm.tn) / static_cast<double>(cm.tn + cm.fp);
  return m;
}

double error_rate(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw UndefinedMetric("error rate of an empty confusion matrix");
  return static_cast<double>(cm.errors()) / static_cast<double>(cm.total());
}

}  // namespace rtc
