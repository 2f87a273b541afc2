#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rtc/metrics.hpp"

using namespace rtc;

TEST_CASE("confusion matrix bookkeeping") {
  ConfusionMatrix cm;
  cm.add(true, true);    // tp
  cm.add(true, false);   // fn
  cm.add(false, true);   // fp
  cm.add(false, false);  // tn
  cm.add(true, true);
  CHECK(cm.tp == 2);
  CHECK(cm.fn == 1);
  CHECK(cm.fp == 1);
  CHECK(cm.tn == 1);
  CHECK(cm.total() == 5);
  CHECK(cm.errors() == 2);

  ConfusionMatrix sum = cm;
  sum += cm;
  CHECK(sum.total() == 10);
  CHECK(sum.tp == 4);
}

TEST_CASE("metric values are exact IEEE quotients of the counts") {
  ConfusionMatrix cm;
  cm.tp = 25;
  cm.fn = 1;
  cm.fp = 2;
  cm.tn = 25;
  const Metrics m = compute_metrics(cm);
  CHECK(m.accuracy == 50.0 / 53.0);
  CHECK(m.sensitivity == 25.0 / 26.0);
  CHECK(m.specificity == 25.0 / 27.0);
  CHECK(error_rate(cm) == 3.0 / 53.0);
}

TEST_CASE("degenerate denominators throw instead of returning NaN") {
  CHECK_THROWS_AS(compute_metrics(ConfusionMatrix{}), UndefinedMetric);
  CHECK_THROWS_AS(error_rate(ConfusionMatrix{}), UndefinedMetric);

  ConfusionMatrix no_pos;
  no_pos.tn = 3;
  no_pos.fp = 1;
  CHECK_THROWS_AS(compute_metrics(no_pos), UndefinedMetric);

  ConfusionMatrix no_neg;
  no_neg.tp = 3;
  no_neg.fn = 1;
  CHECK_THROWS_AS(compute_metrics(no_neg), UndefinedMetric);

  // error_rate only needs a non-empty matrix
  CHECK(error_rate(no_pos) == 1.0 / 4.0);
}
