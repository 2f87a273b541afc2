#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rtc/rng.hpp"
#include "rtc/threshold_rule.hpp"

using namespace rtc;

namespace {

TripleSample triple(const std::string& id, GroupLabel label, double t4, double t7,
                    double t2) {
  TripleSample s;
  s.subject_id = id;
  s.label = label;
  s.t4 = t4;
  s.t7 = t7;
  s.t2 = t2;
  return s;
}

// Exhaustive reference: every decision boundary of the rule moves only when a
// threshold crosses an observed value, so probing each value and both sides
// of it (data is 0.1-quantized, eps well below that) covers every achievable
// error count.
std::int64_t brute_force_min_errors(const std::vector<TripleSample>& data) {
  const double eps = 1e-3;
  std::vector<double> c4{0.0}, c7{0.0}, c2{0.0};
  for (const TripleSample& s : data) {
    if (assign_region(s) == Region::R2) {
      c2.insert(c2.end(), {s.t2 - eps, s.t2, s.t2 + eps});
    } else {
      c4.insert(c4.end(), {s.t4 - eps, s.t4, s.t4 + eps});
      c7.insert(c7.end(), {s.t7 - eps, s.t7, s.t7 + eps});
    }
  }
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (double p4 : c4) {
    for (double p7 : c7) {
      for (double p2 : c2) {
        std::int64_t e = 0;
        for (const TripleSample& s : data) {
          GroupLabel pred;
          if (assign_region(s) == Region::R2) {
            pred = s.t2 <= p2 ? GroupLabel::HC : GroupLabel::EsAd;
          } else {
            pred = (s.t4 >= p4 && s.t7 >= p7) ? GroupLabel::HC : GroupLabel::EsAd;
          }
          if (pred != s.label) ++e;
        }
        best = std::min(best, e);
      }
    }
  }
  return best;
}

std::vector<TripleSample> random_cohort(std::uint64_t seed) {
  DetRng rng(seed);
  const std::size_t n = 8 + rng.next_below(18);
  std::vector<TripleSample> data;
  for (std::size_t i = 0; i < n; ++i) {
    const GroupLabel label = rng.next_below(2) == 0 ? GroupLabel::HC : GroupLabel::EsAd;
    const auto coord = [&]() {
      if (rng.next_below(10) < 3) return 15.0;
      return std::round(rng.uniform(5.0, 14.9) * 10.0) / 10.0;
    };
    const double t2 = std::round(rng.uniform(30.0, 200.0) * 10.0) / 10.0;
    data.push_back(triple("s" + std::to_string(i), label, coord(), coord(), t2));
  }
  return data;
}

}  // namespace

TEST_CASE("prediction branches on the region") {
  ThresholdParams p{12.0, 11.0, 100.0};
  // Both coordinates at the limit: the t2 branch.
  CHECK(threshold_predict(15.0, 15.0, 99.0, p) == GroupLabel::HC);
  CHECK(threshold_predict(15.0, 15.0, 100.0, p) == GroupLabel::HC);  // <= keeps HC
  CHECK(threshold_predict(15.0, 15.0, 100.5, p) == GroupLabel::EsAd);
  // Everywhere else both coordinates must clear their thresholds.
  CHECK(threshold_predict(12.0, 11.0, 500.0, p) == GroupLabel::HC);
  CHECK(threshold_predict(11.9, 11.0, 50.0, p) == GroupLabel::EsAd);
  CHECK(threshold_predict(15.0, 10.9, 50.0, p) == GroupLabel::EsAd);  // region 3
  CHECK(threshold_predict(12.5, 15.0, 50.0, p) == GroupLabel::HC);    // region 4
  CHECK_THROWS_AS(threshold_predict(12.0, 11.0, -1.0, p), OutOfDomain);
  CHECK_THROWS_AS(threshold_predict(16.0, 11.0, 50.0, p), OutOfDomain);
}

TEST_CASE("training recovers hand-computed optima and intervals") {
  const std::vector<TripleSample> data = {
      triple("h1", GroupLabel::HC, 14.5, 14.8, 80.0),
      triple("h2", GroupLabel::HC, 14.2, 14.6, 85.0),
      triple("a1", GroupLabel::EsAd, 9.0, 8.0, 130.0),
      triple("a2", GroupLabel::EsAd, 9.5, 8.5, 125.0),
      triple("r1", GroupLabel::HC, 15.0, 15.0, 80.0),
      triple("r2", GroupLabel::HC, 15.0, 15.0, 85.0),
      triple("r3", GroupLabel::EsAd, 15.0, 15.0, 120.0),
      triple("r4", GroupLabel::EsAd, 15.0, 15.0, 130.0),
  };
  const ThresholdFit fit = threshold_train(data);

  CHECK(fit.train_errors == 0);
  CHECK(fit.other_errors == 0);
  CHECK(fit.region2_errors == 0);

  // p7 = 14.6 already separates the t4/t7 branch, so the first optimum has
  // p4 at its lowest candidate: the p4 interval runs to -infinity.
  CHECK(std::isinf(fit.p4_interval.lo));
  CHECK(fit.p4_interval.hi == 14.2);
  CHECK_FALSE(fit.p4_interval.hi_open);
  CHECK(fit.params.p4 == doctest::Approx(13.2));  // finite end backed off by 1

  CHECK(fit.p7_interval.lo == 8.5);
  CHECK(fit.p7_interval.lo_open);
  CHECK(fit.p7_interval.hi == 14.6);
  CHECK_FALSE(fit.p7_interval.hi_open);
  CHECK(fit.params.p7 == doctest::Approx(11.55));

  CHECK(fit.p2_interval.lo == 85.0);
  CHECK_FALSE(fit.p2_interval.lo_open);
  CHECK(fit.p2_interval.hi == 120.0);
  CHECK(fit.p2_interval.hi_open);
  CHECK(fit.params.p2 == doctest::Approx(102.5));

  CHECK(fit.p7_interval.contains(8.5) == false);
  CHECK(fit.p7_interval.contains(14.6) == true);
  CHECK(fit.p2_interval.contains(85.0) == true);
  CHECK(fit.p2_interval.contains(120.0) == false);

  // The midpoints reproduce the training error.
  CHECK(threshold_evaluate(data, fit.params).confusion.errors() == 0);
}

TEST_CASE("training error matches an exhaustive scan on random cohorts") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto data = random_cohort(seed);
    const ThresholdFit fit = threshold_train(data);
    CAPTURE(seed);
    CHECK(fit.train_errors == brute_force_min_errors(data));
    CHECK(threshold_evaluate(data, fit.params).confusion.errors() == fit.train_errors);

    // Any parameter inside its reported interval (others at their point
    // estimates) reproduces the optimum; stepping just outside a finite
    // closed end must not beat it.
    for (double p4 : {fit.p4_interval.lo + 1e-4, fit.params.p4, fit.p4_interval.hi}) {
      if (!std::isfinite(p4) || !fit.p4_interval.contains(p4)) continue;
      ThresholdParams probe = fit.params;
      probe.p4 = p4;
      CHECK(threshold_evaluate(data, probe).confusion.errors() == fit.train_errors);
    }
    for (double p2 : {fit.p2_interval.lo, fit.p2_interval.hi - 1e-4}) {
      if (!std::isfinite(p2) || !fit.p2_interval.contains(p2)) continue;
      ThresholdParams probe = fit.params;
      probe.p2 = p2;
      CHECK(threshold_evaluate(data, probe).confusion.errors() == fit.train_errors);
    }
  }
}

TEST_CASE("branches without data fall back to strict defaults") {
  const std::vector<TripleSample> only_r2 = {
      triple("r1", GroupLabel::HC, 15.0, 15.0, 80.0),
      triple("r2", GroupLabel::EsAd, 15.0, 15.0, 120.0),
  };
  const ThresholdFit a = threshold_train(only_r2);
  CHECK(a.params.p4 == 15.0);
  CHECK(a.params.p7 == 15.0);
  CHECK(a.other_errors == 0);
  CHECK(a.region2_errors == 0);

  const std::vector<TripleSample> no_r2 = {
      triple("h1", GroupLabel::HC, 14.0, 14.0, 80.0),
      triple("a1", GroupLabel::EsAd, 9.0, 8.0, 130.0),
  };
  const ThresholdFit b = threshold_train(no_r2);
  CHECK(b.params.p2 == 1.0);
  CHECK(b.train_errors == 0);

  CHECK_THROWS_AS(threshold_train({}), EmptyResult);
}

TEST_CASE("evaluation records the misclassified subjects") {
  const std::vector<TripleSample> data = {
      triple("h1", GroupLabel::HC, 14.0, 14.0, 80.0),
      triple("a1", GroupLabel::EsAd, 14.5, 14.5, 130.0),  // above both thresholds
      triple("r1", GroupLabel::EsAd, 15.0, 15.0, 90.0),   // under the t2 cut
  };
  const ThresholdParams p{12.0, 12.0, 100.0};
  const RegionEvalResult res = threshold_evaluate(data, p);
  CHECK(res.confusion.errors() == 2);
  CHECK(res.confusion.tn == 1);
  REQUIRE(res.errors.size() == 2);
  CHECK(res.errors[0].subject_id == "a1");
  CHECK(res.errors[0].truth == GroupLabel::EsAd);
  CHECK(res.errors[0].predicted == GroupLabel::HC);
  CHECK(res.errors[1].subject_id == "r1");
  CHECK(res.errors[1].region == Region::R2);
}

TEST_CASE("leave-one-out retrains per fold") {
  const std::vector<TripleSample> data = {
      triple("h1", GroupLabel::HC, 14.5, 14.8, 80.0),
      triple("h2", GroupLabel::HC, 14.2, 14.6, 85.0),
      triple("h3", GroupLabel::HC, 14.7, 14.9, 82.0),
      triple("a1", GroupLabel::EsAd, 9.0, 8.0, 130.0),
      triple("a2", GroupLabel::EsAd, 9.5, 8.5, 125.0),
      triple("a3", GroupLabel::EsAd, 8.5, 7.5, 135.0),
      triple("r1", GroupLabel::HC, 15.0, 15.0, 80.0),
      triple("r2", GroupLabel::HC, 15.0, 15.0, 85.0),
      triple("r3", GroupLabel::EsAd, 15.0, 15.0, 120.0),
      triple("r4", GroupLabel::EsAd, 15.0, 15.0, 130.0),
  };
  const RegionEvalResult res = threshold_loocv(data);
  CHECK(res.confusion.total() == 10);
  CHECK(res.confusion.errors() == 0);

  CHECK_THROWS_AS(threshold_loocv({data[0]}), BadFoldCount);
}

TEST_CASE("fit JSON round-trips including infinite interval ends") {
  const std::vector<TripleSample> data = {
      triple("h1", GroupLabel::HC, 14.5, 14.8, 80.0),
      triple("h2", GroupLabel::HC, 14.2, 14.6, 85.0),
      triple("a1", GroupLabel::EsAd, 9.0, 8.0, 130.0),
      triple("a2", GroupLabel::EsAd, 9.5, 8.5, 125.0),
  };
  const ThresholdFit fit = threshold_train(data);
  REQUIRE(std::isinf(fit.p4_interval.lo));
  const std::string text = threshold_fit_json(fit);
  const ThresholdFit back = threshold_fit_from_json(text);
  CHECK(back.params.p4 == fit.params.p4);
  CHECK(back.params.p7 == fit.params.p7);
  CHECK(back.params.p2 == fit.params.p2);
  CHECK(back.train_errors == fit.train_errors);
  CHECK(std::isinf(back.p4_interval.lo));
  CHECK(back.p4_interval.hi == fit.p4_interval.hi);
  CHECK(back.p7_interval.lo_open == fit.p7_interval.lo_open);
  CHECK(threshold_fit_json(back) == text);
}
