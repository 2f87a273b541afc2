#include "rtc/threshold_rule.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace rtc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Fallback point estimates when a branch saw no training data: the t4/t7
// branch then demands the full prescribed time, the t2 branch accepts only
// very fast subjects. Both lean toward the ES-AD call.
constexpr double kDefaultGePoint = 15.0;
constexpr double kDefaultLePoint = 1.0;

std::vector<double> sorted_distinct(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Candidate thresholds covering every distinct outcome of `x >= p`:
// index 0 stands for (-inf, v1], index i for (v_i, v_{i+1}], the last for
// (v_m, inf).
std::vector<double> ge_candidates(const std::vector<double>& distinct) {
  std::vector<double> c = distinct;
  if (!c.empty()) c.push_back(c.back() + 1.0);
  return c;
}

// Candidates for `x <= p`: index 0 stands for (-inf, v1), index i >= 1 for
// [v_i, v_{i+1}) and the last for [v_m, inf).
std::vector<double> le_candidates(const std::vector<double>& distinct) {
  std::vector<double> c;
  if (distinct.empty()) return c;
  c.push_back(distinct.front() - 1.0);
  c.insert(c.end(), distinct.begin(), distinct.end());
  return c;
}

OptimalInterval ge_interval(const std::vector<double>& candidates, std::size_t a,
                            std::size_t b) {
  OptimalInterval iv;
  const std::size_t last = candidates.size() - 1;
  if (a > 0) iv.lo = candidates[a - 1];
  if (b < last) {
    iv.hi = candidates[b];
    iv.hi_open = false;
  }
  return iv;
}

OptimalInterval le_interval(const std::vector<double>& candidates, std::size_t a,
                            std::size_t b) {
  OptimalInterval iv;
  const std::size_t last = candidates.size() - 1;
  if (a > 0) {
    iv.lo = candidates[a];
    iv.lo_open = false;
  }
  if (b < last) iv.hi = candidates[b + 1];
  return iv;
}

}  // namespace

bool OptimalInterval::contains(double v) const {
  if (v < lo || (lo_open && v == lo)) return false;
  if (v > hi || (hi_open && v == hi)) return false;
  return true;
}

double OptimalInterval::midpoint() const {
  const bool lo_fin = std::isfinite(lo), hi_fin = std::isfinite(hi);
  if (lo_fin && hi_fin) return 0.5 * (lo + hi);
  if (lo_fin) return lo + 1.0;
  if (hi_fin) return hi - 1.0;
  throw std::logic_error("midpoint of a doubly infinite interval");
}

namespace {

// A doubly infinite optimal interval means the training error ignores this
// parameter entirely; fall back to the branch default point.
double point_estimate(const OptimalInterval& iv, double fallback) {
  if (!std::isfinite(iv.lo) && !std::isfinite(iv.hi)) return fallback;
  return iv.midpoint();
}

}  // namespace

GroupLabel threshold_predict(double t4, double t7, double t2, const ThresholdParams& p) {
  const Region r = assign_region(t4, t7);
  if (t2 < 0.0) throw OutOfDomain("negative t2");
  if (r == Region::R2) {
    return t2 <= p.p2 ? GroupLabel::HC : GroupLabel::EsAd;
  }
  return (t4 >= p.p4 && t7 >= p.p7) ? GroupLabel::HC : GroupLabel::EsAd;
}

GroupLabel threshold_predict(const TripleSample& s, const ThresholdParams& p) {
  return threshold_predict(s.t4, s.t7, s.t2, p);
}

ThresholdFit threshold_train(const std::vector<TripleSample>& data) {
  if (data.empty()) throw EmptyResult("no samples to train the threshold rule on");

  std::vector<const TripleSample*> branch47, branch2;
  for (const TripleSample& s : data) {
    (assign_region(s) == Region::R2 ? branch2 : branch47).push_back(&s);
  }

  ThresholdFit fit;

  // --- (p4, p7) branch: joint exhaustive search ---
  std::vector<double> v4, v7;
  for (const TripleSample* s : branch47) {
    v4.push_back(s->t4);
    v7.push_back(s->t7);
  }
  const auto c4 = ge_candidates(sorted_distinct(v4));
  const auto c7 = ge_candidates(sorted_distinct(v7));
  const auto err47 = [&](double p4, double p7) {
    std::int64_t e = 0;
    for (const TripleSample* s : branch47) {
      const bool hc = s->t4 >= p4 && s->t7 >= p7;
      if (hc != (s->label == GroupLabel::HC)) ++e;
    }
    return e;
  };
  std::size_t i4 = 0, i7 = 0;
  if (branch47.empty()) {
    fit.params.p4 = kDefaultGePoint;
    fit.params.p7 = kDefaultGePoint;
  } else {
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (std::size_t a = 0; a < c4.size(); ++a) {
      for (std::size_t b = 0; b < c7.size(); ++b) {
        const std::int64_t e = err47(c4[a], c7[b]);
        if (e < best) {
          best = e;
          i4 = a;
          i7 = b;
        }
      }
    }
    fit.other_errors = best;
    std::size_t hi4 = i4;
    while (hi4 + 1 < c4.size() && err47(c4[hi4 + 1], c7[i7]) == best) ++hi4;
    std::size_t hi7 = i7;
    while (hi7 + 1 < c7.size() && err47(c4[i4], c7[hi7 + 1]) == best) ++hi7;
    fit.p4_interval = ge_interval(c4, i4, hi4);
    fit.p7_interval = ge_interval(c7, i7, hi7);
    fit.params.p4 = point_estimate(fit.p4_interval, kDefaultGePoint);
    fit.params.p7 = point_estimate(fit.p7_interval, kDefaultGePoint);
  }

  // --- p2 branch ---
  std::vector<double> v2;
  for (const TripleSample* s : branch2) v2.push_back(s->t2);
  const auto c2 = le_candidates(sorted_distinct(v2));
  const auto err2 = [&](double p2) {
    std::int64_t e = 0;
    for (const TripleSample* s : branch2) {
      const bool hc = s->t2 <= p2;
      if (hc != (s->label == GroupLabel::HC)) ++e;
    }
    return e;
  };
  if (branch2.empty()) {
    fit.params.p2 = kDefaultLePoint;
  } else {
    std::size_t i2 = 0;
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (std::size_t a = 0; a < c2.size(); ++a) {
      const std::int64_t e = err2(c2[a]);
      if (e < best) {
        best = e;
        i2 = a;
      }
    }
    fit.region2_errors = best;
    std::size_t hi2 = i2;
    while (hi2 + 1 < c2.size() && err2(c2[hi2 + 1]) == best) ++hi2;
    fit.p2_interval = le_interval(c2, i2, hi2);
    fit.params.p2 = point_estimate(fit.p2_interval, kDefaultLePoint);
  }

  fit.train_errors = fit.other_errors + fit.region2_errors;
  return fit;
}

RegionEvalResult threshold_evaluate(const std::vector<TripleSample>& data,
                                    const ThresholdParams& p) {
  RegionEvalResult res;
  for (const TripleSample& s : data) {
    const GroupLabel pred = threshold_predict(s, p);
    const bool truth_pos = s.label == GroupLabel::EsAd;
    const bool pred_pos = pred == GroupLabel::EsAd;
    res.confusion.add(truth_pos, pred_pos);
    if (truth_pos != pred_pos) {
      res.errors.push_back(RegionErrorRecord{s.subject_id, assign_region(s), s.label, pred});
    }
  }
  return res;
}

RegionEvalResult threshold_loocv(const std::vector<TripleSample>& data) {
  if (data.size() < 2) throw BadFoldCount("leave-one-out needs at least two samples");
  RegionEvalResult res;
  std::vector<TripleSample> rest;
  rest.reserve(data.size() - 1);
  for (std::size_t q = 0; q < data.size(); ++q) {
    rest.clear();
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (i != q) rest.push_back(data[i]);
    }
    const ThresholdFit fit = threshold_train(rest);
    const GroupLabel pred = threshold_predict(data[q], fit.params);
    const bool truth_pos = data[q].label == GroupLabel::EsAd;
    const bool pred_pos = pred == GroupLabel::EsAd;
    res.confusion.add(truth_pos, pred_pos);
    if (truth_pos != pred_pos) {
      res.errors.push_back(
          RegionErrorRecord{data[q].subject_id, assign_region(data[q]), data[q].label, pred});
    }
  }
  return res;
}

namespace {

using nlohmann::json;

json interval_to_json(const OptimalInterval& iv) {
  json j;
  j["lo"] = std::isfinite(iv.lo) ? json(iv.lo) : json(nullptr);
  j["hi"] = std::isfinite(iv.hi) ? json(iv.hi) : json(nullptr);
  j["lo_open"] = iv.lo_open;
  j["hi_open"] = iv.hi_open;
  return j;
}

OptimalInterval interval_from_json(const json& j) {
  OptimalInterval iv;
  if (!j.at("lo").is_null()) iv.lo = j.at("lo").get<double>();
  if (!j.at("hi").is_null()) iv.hi = j.at("hi").get<double>();
  iv.lo_open = j.at("lo_open").get<bool>();
  iv.hi_open = j.at("hi_open").get<bool>();
  return iv;
}

}  // namespace

std::string threshold_fit_json(const ThresholdFit& fit) {
  json j;
  j["params"] = {{"p4", fit.params.p4}, {"p7", fit.params.p7}, {"p2", fit.params.p2}};
  j["train_errors"] = fit.train_errors;
  j["region2_errors"] = fit.region2_errors;
  j["other_errors"] = fit.other_errors;
  j["intervals"] = {{"p4", interval_to_json(fit.p4_interval)},
                    {"p7", interval_to_json(fit.p7_interval)},
                    {"p2", interval_to_json(fit.p2_interval)}};
  return j.dump(2) + "\n";
}

ThresholdFit threshold_fit_from_json(const std::string& text) {
  const json j = json::parse(text);
  ThresholdFit fit;
  fit.params.p4 = j.at("params").at("p4").get<double>();
  fit.params.p7 = j.at("params").at("p7").get<double>();
  fit.params.p2 = j.at("params").at("p2").get<double>();
  fit.train_errors = j.at("train_errors").get<std::int64_t>();
  fit.region2_errors = j.at("region2_errors").get<std::int64_t>();
  fit.other_errors = j.at("other_errors").get<std::int64_t>();
  fit.p4_interval = interval_from_json(j.at("intervals").at("p4"));
  fit.p7_interval = interval_from_json(j.at("intervals").at("p7"));
  fit.p2_interval = interval_from_json(j.at("intervals").at("p2"));
  return fit;
}

}  // namespace rtc
