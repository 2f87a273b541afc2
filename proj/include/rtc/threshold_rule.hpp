#pragma once

#include <limits>

#include "rtc/gaussian_regions.hpp"

namespace rtc {

// Three-threshold decision rule over the (t4, t7, t2) triples:
//   both clamped coordinates at the 15 s limit (region 2): HC iff t2 <= p2;
//   everyone else:                                         HC iff t4 >= p4 and t7 >= p7.
struct ThresholdParams {
  double p4 = 0.0;
  double p7 = 0.0;
  double p2 = 0.0;
};

GroupLabel threshold_predict(double t4, double t7, double t2, const ThresholdParams& p);
GroupLabel threshold_predict(const TripleSample& s, const ThresholdParams& p);

// Maximal parameter range achieving the minimal training error while the
// other two parameters sit at their chosen optimum. Infinite endpoints mean
// the error is flat all the way out.
struct OptimalInterval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_open = true;
  bool hi_open = true;

  bool contains(double v) const;
  double midpoint() const;  // infinite ends back off by 1 from the finite one
};

struct ThresholdFit {
  ThresholdParams params;  // interval midpoints
  std::int64_t train_errors = 0;
  std::int64_t region2_errors = 0;  // contribution of the t2 branch
  std::int64_t other_errors = 0;    // contribution of the t4/t7 branch
  OptimalInterval p4_interval;
  OptimalInterval p7_interval;
  OptimalInterval p2_interval;
};

// Exhaustive search over the candidate thresholds (one representative per
// interval of constant training error). The two branches touch disjoint
// samples, so the (p4, p7) search and the p2 search decompose; ties resolve
// to the smallest threshold. Throws EmptyResult on empty input.
ThresholdFit threshold_train(const std::vector<TripleSample>& data);

RegionEvalResult threshold_evaluate(const std::vector<TripleSample>& data,
                                    const ThresholdParams& p);

// Leave-one-out with a full re-train per fold.
RegionEvalResult threshold_loocv(const std::vector<TripleSample>& data);

std::string threshold_fit_json(const ThresholdFit& fit);
ThresholdFit threshold_fit_from_json(const std::string& text);

}  // namespace rtc
