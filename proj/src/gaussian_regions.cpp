#include "rtc/gaussian_regions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "rtc/ingest.hpp"

namespace rtc {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;

bool at_limit(double v) { return std::fabs(v - kPrescribedLimitSeconds) <= kRegionTolerance; }

double normal_pdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * kSqrt2Pi);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

std::vector<TripleSample> to_triples(const DurationDataset& ds) {
  std::vector<TripleSample> out;
  for (const DurationSample& s : ds.samples) {
    if (s.label != GroupLabel::HC && s.label != GroupLabel::EsAd) {
      throw std::invalid_argument("sample " + s.subject_id +
                                  " is neither HC nor ES-AD; narrow the dataset first");
    }
    if (!s.has_task(2) || !s.has_task(4) || !s.has_task(7)) continue;
    TripleSample t;
    t.subject_id = s.subject_id;
    t.label = s.label;
    t.t4 = s.task(4);
    t.t7 = s.task(7);
    t.t2 = s.task(2);
    out.push_back(std::move(t));
  }
  if (out.empty()) throw EmptyResult("no sample carries tasks 2, 4 and 7");
  return out;
}

Region assign_region(double t4, double t7) {
  for (double v : {t4, t7}) {
    if (v < 0.0 || v > kPrescribedLimitSeconds + kRegionTolerance) {
      throw OutOfDomain("clamped duration " + format_double(v) + " outside [0, 15]");
    }
  }
  const bool a4 = at_limit(t4), a7 = at_limit(t7);
  if (a4 && a7) return Region::R2;
  if (a4) return Region::R3;
  if (a7) return Region::R4;
  return Region::R1;
}

Region assign_region(const TripleSample& s) {
  if (s.t2 < 0.0) throw OutOfDomain("negative t2 for " + s.subject_id);
  return assign_region(s.t4, s.t7);
}

std::vector<int> active_dims(Region r, const GmFitOptions& opts) {
  std::vector<int> dims;
  switch (r) {
    case Region::R1: dims = {0, 1}; break;
    case Region::R2: dims = {}; break;
    case Region::R3: dims = {1}; break;
    case Region::R4: dims = {0}; break;
  }
  if (r == Region::R2 || opts.use_t2_outside_region2) dims.push_back(2);
  return dims;
}

int class_index(GroupLabel label) {
  if (label == GroupLabel::HC) return 0;
  if (label == GroupLabel::EsAd) return 1;
  throw std::invalid_argument("region mixtures know only HC and ES-AD");
}

const GmCell& RegionMixtureModel::cell(Region r, GroupLabel label) const {
  return cells[static_cast<int>(r) - 1][class_index(label)];
}

GmCell& RegionMixtureModel::cell(Region r, GroupLabel label) {
  return cells[static_cast<int>(r) - 1][class_index(label)];
}

namespace {

std::array<double, 3> mean_of(const std::vector<const TripleSample*>& xs) {
  std::array<double, 3> mu{};
  for (const TripleSample* s : xs) {
    const auto c = s->coords();
    for (int i = 0; i < 3; ++i) mu[i] += c[i];
  }
  for (double& v : mu) v /= static_cast<double>(xs.size());
  return mu;
}

// Unbiased (n-1) standard deviations; requires xs.size() >= 2.
std::array<double, 3> sd_of(const std::vector<const TripleSample*>& xs,
                            const std::array<double, 3>& mu) {
  std::array<double, 3> acc{};
  for (const TripleSample* s : xs) {
    const auto c = s->coords();
    for (int i = 0; i < 3; ++i) {
      const double d = c[i] - mu[i];
      acc[i] += d * d;
    }
  }
  for (double& v : acc) v = std::sqrt(v / static_cast<double>(xs.size() - 1));
  return acc;
}

// Atypical flags for one cell. `sibling` is the other class of the same
// region, with its raw (pre-exclusion) samples.
std::vector<bool> atypical_flags(const std::vector<const TripleSample*>& xs,
                                 const std::vector<const TripleSample*>& sibling,
                                 const std::vector<int>& dims, const GmFitOptions& opts) {
  std::vector<bool> flag(xs.size(), false);
  if (opts.atypical_rule == AtypicalRule::None || xs.size() < 2) return flag;

  if (opts.atypical_rule == AtypicalRule::AllSamples) {
    const auto mu = mean_of(xs);
    const auto sd = sd_of(xs, mu);
    for (std::size_t s = 0; s < xs.size(); ++s) {
      for (int i : dims) {
        if (sd[i] > 0.0 &&
            std::fabs(xs[s]->coords()[i] - mu[i]) > opts.atypical_threshold * sd[i]) {
          flag[s] = true;
        }
      }
    }
    return flag;
  }

  // Jackknife rule.
  if (xs.size() == 2) {
    // A leave-one-out scale does not exist for two samples; compare the gap
    // against the sibling class's spread and drop the member farther from
    // the sibling mean on the first triggering coordinate.
    if (sibling.size() < 2) return flag;
    const auto sib_mu = mean_of(sibling);
    const auto sib_sd = sd_of(sibling, sib_mu);
    for (int i : dims) {
      if (sib_sd[i] <= 0.0) continue;
      const double a = xs[0]->coords()[i], b = xs[1]->coords()[i];
      if (std::fabs(a - b) > opts.atypical_threshold * sib_sd[i]) {
        flag[std::fabs(a - sib_mu[i]) >= std::fabs(b - sib_mu[i]) ? 0 : 1] = true;
        break;
      }
    }
    return flag;
  }

  for (std::size_t s = 0; s < xs.size(); ++s) {
    std::vector<const TripleSample*> rest;
    rest.reserve(xs.size() - 1);
    for (std::size_t t = 0; t < xs.size(); ++t) {
      if (t != s) rest.push_back(xs[t]);
    }
    const auto mu = mean_of(rest);
    const auto sd = sd_of(rest, mu);
    for (int i : dims) {
      if (sd[i] > 0.0 &&
          std::fabs(xs[s]->coords()[i] - mu[i]) > opts.atypical_threshold * sd[i]) {
        flag[s] = true;
        break;
      }
    }
  }
  return flag;
}

}  // namespace

RegionMixtureModel fit_region_mixtures(const std::vector<TripleSample>& data,
                                       const GmFitOptions& opts) {
  if (data.empty()) throw EmptyResult("no samples to fit");
  RegionMixtureModel model;
  model.options = opts;

  std::array<std::array<std::vector<const TripleSample*>, 2>, 4> buckets;
  for (const TripleSample& s : data) {
    const Region r = assign_region(s);
    buckets[static_cast<int>(r) - 1][class_index(s.label)].push_back(&s);
    model.region_counts[static_cast<int>(r) - 1] += 1;
  }

  for (int r = 0; r < 4; ++r) {
    const auto dims = active_dims(static_cast<Region>(r + 1), opts);
    for (int c = 0; c < 2; ++c) {
      const auto& xs = buckets[r][c];
      GmCell& cell = model.cells[r][c];
      cell.count_pre = static_cast<std::int64_t>(xs.size());
      if (xs.empty()) continue;

      const auto flags = atypical_flags(xs, buckets[r][1 - c], dims, opts);
      std::vector<const TripleSample*> kept;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (flags[i]) {
          cell.excluded.push_back(xs[i]->subject_id);
        } else {
          kept.push_back(xs[i]);
        }
      }
      cell.count_post = static_cast<std::int64_t>(kept.size());
      if (!kept.empty()) cell.mu = mean_of(kept);
      if (kept.size() >= 2) cell.sigma = sd_of(kept, *cell.mu);
    }
  }
  return model;
}

double gm_density(const RegionMixtureModel& model, Region r, GroupLabel label,
                  const std::array<double, 3>& x) {
  const GmCell& cell = model.cell(r, label);
  if (!cell.usable()) {
    throw UnusableCell("region " + std::to_string(static_cast<int>(r)) + " " +
                       to_string(label) + " cell has fewer than two survivors");
  }
  double density = 1.0;
  for (int i : active_dims(r, model.options)) {
    const double mu = (*cell.mu)[i];
    const double sigma = (*cell.sigma)[i];
    if (sigma <= 0.0) {
      // Collapsed coordinate: a point mass at mu.
      if (std::fabs(x[i] - mu) > kRegionTolerance) return 0.0;
      continue;
    }
    double f = normal_pdf(x[i], mu, sigma);
    if (model.options.truncated_normal && i != 2) {
      const double lo = normal_cdf((0.0 - mu) / sigma);
      const double hi = normal_cdf((kPrescribedLimitSeconds - mu) / sigma);
      f /= (hi - lo);
    }
    density *= f;
  }
  return density;
}

double gm_score(const RegionMixtureModel& model, Region r, GroupLabel label,
                const std::array<double, 3>& x) {
  const GmCell& cell = model.cell(r, label);
  if (!cell.usable()) return 0.0;
  const std::int64_t n_r = model.region_counts[static_cast<int>(r) - 1];
  const double prior = static_cast<double>(cell.count_pre) / static_cast<double>(n_r);
  return prior * gm_density(model, r, label, x);
}

GroupLabel gm_predict(const RegionMixtureModel& model, const std::array<double, 3>& x) {
  const Region r = assign_region(x[0], x[1]);
  if (x[2] < 0.0) throw OutOfDomain("negative t2");
  const double hc = gm_score(model, r, GroupLabel::HC, x);
  const double ad = gm_score(model, r, GroupLabel::EsAd, x);
  if (hc != ad) return ad > hc ? GroupLabel::EsAd : GroupLabel::HC;
  if (hc > 0.0) return GroupLabel::EsAd;  // exact positive tie

  // Nothing usable (or both scored zero): larger cell wins, then the larger
  // class overall, then ES-AD.
  const auto& hc_cell = model.cell(r, GroupLabel::HC);
  const auto& ad_cell = model.cell(r, GroupLabel::EsAd);
  if (hc_cell.count_pre != ad_cell.count_pre) {
    return hc_cell.count_pre > ad_cell.count_pre ? GroupLabel::HC : GroupLabel::EsAd;
  }
  std::int64_t hc_total = 0, ad_total = 0;
  for (int rr = 0; rr < 4; ++rr) {
    hc_total += model.cells[rr][0].count_pre;
    ad_total += model.cells[rr][1].count_pre;
  }
  return hc_total > ad_total ? GroupLabel::HC : GroupLabel::EsAd;
}

namespace {

RegionEvalResult evaluate(const std::vector<TripleSample>& data,
                      const std::vector<GroupLabel>& predictions) {
  RegionEvalResult res;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const bool truth_pos = data[i].label == GroupLabel::EsAd;
    const bool pred_pos = predictions[i] == GroupLabel::EsAd;
    res.confusion.add(truth_pos, pred_pos);
    if (truth_pos != pred_pos) {
      res.errors.push_back(RegionErrorRecord{data[i].subject_id, assign_region(data[i]),
                                         data[i].label, predictions[i]});
    }
  }
  return res;
}

}  // namespace

RegionEvalResult gm_train_as_test(const std::vector<TripleSample>& data,
                              const GmFitOptions& opts) {
  const RegionMixtureModel model = fit_region_mixtures(data, opts);
  std::vector<GroupLabel> pred;
  pred.reserve(data.size());
  for (const TripleSample& s : data) pred.push_back(gm_predict(model, s.coords()));
  return evaluate(data, pred);
}

RegionEvalResult gm_loocv(const std::vector<TripleSample>& data, const GmFitOptions& opts) {
  if (data.size() < 2) throw BadFoldCount("leave-one-out needs at least two samples");
  std::vector<GroupLabel> pred;
  pred.reserve(data.size());
  std::vector<TripleSample> rest;
  rest.reserve(data.size() - 1);
  for (std::size_t q = 0; q < data.size(); ++q) {
    rest.clear();
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (i != q) rest.push_back(data[i]);
    }
    const RegionMixtureModel model = fit_region_mixtures(rest, opts);
    pred.push_back(gm_predict(model, data[q].coords()));
  }
  return evaluate(data, pred);
}

namespace {

using nlohmann::json;

json cell_to_json(const GmCell& cell) {
  json j;
  j["count_pre"] = cell.count_pre;
  j["count_post"] = cell.count_post;
  j["mu"] = cell.mu ? json(*cell.mu) : json(nullptr);
  j["sigma"] = cell.sigma ? json(*cell.sigma) : json(nullptr);
  j["excluded"] = cell.excluded;
  return j;
}

GmCell cell_from_json(const json& j) {
  GmCell cell;
  cell.count_pre = j.at("count_pre").get<std::int64_t>();
  cell.count_post = j.at("count_post").get<std::int64_t>();
  if (!j.at("mu").is_null()) cell.mu = j.at("mu").get<std::array<double, 3>>();
  if (!j.at("sigma").is_null()) cell.sigma = j.at("sigma").get<std::array<double, 3>>();
  cell.excluded = j.at("excluded").get<std::vector<std::string>>();
  return cell;
}

constexpr const char* kRuleNames[] = {"jackknife", "all-samples", "none"};

}  // namespace

std::string gm_model_json(const RegionMixtureModel& model) {
  json j;
  j["region_counts"] = model.region_counts;
  j["options"] = {
      {"atypical_rule", kRuleNames[static_cast<int>(model.options.atypical_rule)]},
      {"atypical_threshold", model.options.atypical_threshold},
      {"truncated_normal", model.options.truncated_normal},
      {"use_t2_outside_region2", model.options.use_t2_outside_region2},
  };
  json regions = json::array();
  for (int r = 0; r < 4; ++r) {
    json row;
    row["region"] = r + 1;
    row["hc"] = cell_to_json(model.cells[r][0]);
    row["es_ad"] = cell_to_json(model.cells[r][1]);
    regions.push_back(row);
  }
  j["regions"] = regions;
  return j.dump(2) + "\n";
}

RegionMixtureModel gm_model_from_json(const std::string& text) {
  const json j = json::parse(text);
  RegionMixtureModel model;
  model.region_counts = j.at("region_counts").get<std::array<std::int64_t, 4>>();
  const json& o = j.at("options");
  const std::string rule = o.at("atypical_rule");
  bool found = false;
  for (int i = 0; i < 3; ++i) {
    if (rule == kRuleNames[i]) {
      model.options.atypical_rule = static_cast<AtypicalRule>(i);
      found = true;
    }
  }
  if (!found) throw std::invalid_argument("unknown atypical rule '" + rule + "'");
  model.options.atypical_threshold = o.at("atypical_threshold").get<double>();
  model.options.truncated_normal = o.at("truncated_normal").get<bool>();
  model.options.use_t2_outside_region2 = o.at("use_t2_outside_region2").get<bool>();
  for (const json& row : j.at("regions")) {
    const int r = row.at("region").get<int>();
    if (r < 1 || r > 4) throw std::invalid_argument("bad region id");
    model.cells[r - 1][0] = cell_from_json(row.at("hc"));
    model.cells[r - 1][1] = cell_from_json(row.at("es_ad"));
  }
  return model;
}

}  // namespace rtc
