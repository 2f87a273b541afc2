#include "rtc/synth.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "rtc/rng.hpp"

namespace rtc {

namespace {

double quantize_ms(double v) { return static_cast<double>(std::llround(v * 1000.0)) / 1000.0; }

// Coordinates that genuinely vary in a region; the others sit at 15 exactly.
bool geometric_active(Region r, int dim) {
  switch (r) {
    case Region::R1: return true;
    case Region::R2: return dim == 2;
    case Region::R3: return dim != 0;
    case Region::R4: return dim != 1;
  }
  return false;
}

// Sub-limit draw domain per coordinate: t4/t7 must quantize inside [0, 15),
// t2 anywhere >= 0.
bool in_domain(int dim, double q) {
  if (q < 0.0) return false;
  return dim == 2 || q < kPrescribedLimitSeconds;
}

double draw_coordinate(DetRng& rng, int dim, double mu, double sigma,
                       const std::string& what) {
  if (sigma < 0.0) throw UnsampleableCell(what + ": negative sigma");
  if (sigma == 0.0) {
    const double q = quantize_ms(mu);
    if (!in_domain(dim, q)) {
      throw UnsampleableCell(what + ": zero-sigma coordinate outside its region");
    }
    return q;
  }
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const double q = quantize_ms(rng.normal(mu, sigma));
    if (in_domain(dim, q)) return q;
  }
  throw UnsampleableCell(what + ": rejection sampling failed to land in the region");
}

std::string pad_id(const std::string& prefix, int number, int width) {
  std::string digits = std::to_string(number);
  while (static_cast<int>(digits.size()) < width) digits.insert(digits.begin(), '0');
  return prefix + "-" + digits;
}

}  // namespace

int& CellCounts::at(Region r, GroupLabel label) {
  return n[static_cast<int>(r) - 1][class_index(label)];
}

int CellCounts::at(Region r, GroupLabel label) const {
  return n[static_cast<int>(r) - 1][class_index(label)];
}

int CellCounts::total() const {
  int t = 0;
  for (const auto& row : n) {
    for (int v : row) t += v;
  }
  return t;
}

DurationDataset sample_cohort(const CohortSpec& spec) {
  for (const auto& row : spec.counts.n) {
    for (int v : row) {
      if (v < 0) throw std::invalid_argument("negative cell count");
    }
  }
  if (spec.counts.total() == 0) throw EmptyResult("cohort spec produces no samples");
  for (const FillerTask& f : spec.fillers) {
    if (f.task < 1 || f.task > kTaskCount || f.task == 2 || f.task == 4 || f.task == 7) {
      throw std::invalid_argument("filler tasks must lie outside {2, 4, 7}");
    }
    if (f.sigma_hc < 0.0 || f.sigma_ad < 0.0) {
      throw std::invalid_argument("negative filler sigma");
    }
  }

  // Plants per cell, kept in listed order.
  std::array<std::array<std::vector<const PlantedSample*>, 2>, 4> plants;
  for (const PlantedSample& p : spec.plants) {
    if (assign_region(quantize_ms(p.t4), quantize_ms(p.t7)) != p.region) {
      throw std::invalid_argument("planted sample does not lie in its declared region");
    }
    plants[static_cast<int>(p.region) - 1][class_index(p.label)].push_back(&p);
  }

  const int width = std::max<int>(3, static_cast<int>(std::to_string(spec.counts.total()).size()));
  DurationDataset ds;
  int counter = 0;

  for (int r = 0; r < 4; ++r) {
    const Region region = static_cast<Region>(r + 1);
    for (int c = 0; c < 2; ++c) {
      const GroupLabel label = c == 0 ? GroupLabel::HC : GroupLabel::EsAd;
      const int want = spec.counts.n[r][c];
      const auto& cell_plants = plants[r][c];
      if (want == 0 && cell_plants.empty()) continue;
      const int drawn = want - static_cast<int>(cell_plants.size());
      const std::string what = "region " + std::to_string(r + 1) + " " + to_string(label);
      if (drawn < 0) throw std::invalid_argument(what + ": more plants than its count");

      const GmCell& cell = spec.model.cells[r][c];
      const std::array<double, 3>* sigma = nullptr;
      if (drawn > 0) {
        if (!cell.mu) throw UnsampleableCell(what + ": no mean to sample from");
        if (cell.sigma) {
          sigma = &*cell.sigma;
        } else if (spec.sigma_overrides[r][c]) {
          sigma = &*spec.sigma_overrides[r][c];
        } else {
          throw UnsampleableCell(what + ": no sigma and no override");
        }
      }

      DetRng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(r + 1),
                             static_cast<std::uint64_t>(c)));
      const auto emit_sample = [&](double t4, double t7, double t2) {
        DurationSample s;
        s.subject_id = pad_id(spec.id_prefix, ++counter, width);
        s.label = label;
        s.set_task(4, t4);
        s.set_task(7, t7);
        s.set_task(2, t2);
        for (const FillerTask& f : spec.fillers) {
          const double mu = c == 0 ? f.mu_hc : f.mu_ad;
          const double sd = c == 0 ? f.sigma_hc : f.sigma_ad;
          double v;
          if (sd == 0.0) {
            v = quantize_ms(mu);
            if (v < 0.0) throw UnsampleableCell(what + ": negative filler value");
          } else {
            do {
              v = quantize_ms(rng.normal(mu, sd));
            } while (v < 0.0);
          }
          if (f.clamp) v = std::min(v, kPrescribedLimitSeconds);
          s.set_task(f.task, v);
        }
        ds.samples.push_back(std::move(s));
      };

      for (int i = 0; i < drawn; ++i) {
        std::array<double, 3> x;
        for (int dim = 0; dim < 3; ++dim) {
          if (!geometric_active(region, dim)) {
            x[dim] = kPrescribedLimitSeconds;
          } else {
            x[dim] = draw_coordinate(rng, dim, (*cell.mu)[dim], (*sigma)[dim], what);
          }
        }
        emit_sample(x[0], x[1], x[2]);
      }
      for (const PlantedSample* p : cell_plants) {
        emit_sample(quantize_ms(p->t4), quantize_ms(p->t7), quantize_ms(p->t2));
      }
    }
  }
  return ds;
}

std::vector<SubjectRecording> emit_pen_streams(const DurationDataset& ds, std::uint64_t seed) {
  std::vector<SubjectRecording> out;
  out.reserve(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const DurationSample& s = ds.samples[i];
    SubjectRecording rec;
    rec.subject_id = s.subject_id;
    rec.label = s.label;
    for (int task = 1; task <= kTaskCount; ++task) {
      if (!s.has_task(task)) continue;
      const double seconds = s.task(task);
      const std::int64_t d_ms = std::llround(seconds * 1000.0);
      if (static_cast<double>(d_ms) / 1000.0 != seconds) {
        throw std::invalid_argument("duration of " + s.subject_id + " task " +
                                    std::to_string(task) + " is not 1 ms-quantized");
      }
      DetRng rng(derive_seed(seed, i, static_cast<std::uint64_t>(task)));

      // How long the pen stays on paper vs the first-to-last span. Tasks cut
      // off at the limit overshoot it so the clamp is exercised.
      const bool at_limit = kClampedTask[task - 1] && d_ms == 15000;
      std::int64_t span, on_paper;
      if (task == 3) {
        on_paper = d_ms;
        const std::int64_t gap = d_ms >= 2000 ? std::min<std::int64_t>(500, d_ms / 4) : 0;
        span = d_ms + gap;
      } else {
        span = at_limit ? 15000 + 500 + static_cast<std::int64_t>(rng.next_below(1501)) : d_ms;
        const std::int64_t gap = span >= 2000 ? std::min<std::int64_t>(500, span / 4) : 0;
        on_paper = span - gap;
      }
      const std::int64_t gap = span - on_paper;

      TaskRecording& tr = rec.tasks[task];
      tr.task_id = task;
      std::int64_t k = 0;
      const auto push = [&](std::int64_t t, double pressure) {
        PenSample p;
        p.t_ms = t;
        p.pressure = pressure;
        p.x = 10.0 + 2.0 * static_cast<double>(k);
        p.y = 100.0 - 1.5 * static_cast<double>(k % 8);
        p.azimuth = 40.0 + static_cast<double>((task * 7 + k) % 30);
        p.altitude = 55.0 + static_cast<double>(k % 10);
        ++k;
        tr.samples.push_back(p);
      };
      const auto down = [&](std::int64_t t) {
        push(t, 0.3 + 0.1 * static_cast<double>((i + task + static_cast<std::size_t>(k)) % 5));
      };

      const std::int64_t t0 = 500;
      push(t0 - 300, 0.0);
      if (span == 0) {
        down(t0);
      } else if (gap == 0) {
        down(t0);
        if (span >= 2) down(t0 + span / 2);
        down(t0 + span);
      } else {
        const std::int64_t a = (on_paper * 3) / 5;  // first run length
        down(t0);
        if (a >= 2) down(t0 + a / 2);
        down(t0 + a);
        push(t0 + a + gap / 2, 0.0);
        down(t0 + a + gap);
        if (span - (a + gap) >= 2) down(t0 + (a + gap + span) / 2);
        down(t0 + span);
      }
      push(t0 + span + 300, 0.0);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

RegionMixtureModel reference_mixture() {
  RegionMixtureModel m;
  m.region_counts = {13, 24, 7, 9};
  const auto set = [&](Region r, GroupLabel cl, std::int64_t pre, std::int64_t post,
                       std::array<double, 3> mu,
                       std::optional<std::array<double, 3>> sigma) {
    GmCell& cell = m.cell(r, cl);
    cell.count_pre = pre;
    cell.count_post = post;
    cell.mu = mu;
    cell.sigma = sigma;
  };
  set(Region::R1, GroupLabel::HC, 8, 8, {14.6, 14.1, 103.0}, {{0.16, 0.27, 27.0}});
  set(Region::R1, GroupLabel::EsAd, 5, 5, {13.5, 12.8, 88.0}, {{0.8, 0.7, 23.0}});
  set(Region::R2, GroupLabel::HC, 15, 15, {15.0, 15.0, 82.0}, {{0.0, 0.0, 12.0}});
  set(Region::R2, GroupLabel::EsAd, 9, 9, {15.0, 15.0, 117.0}, {{0.0, 0.0, 9.0}});
  set(Region::R3, GroupLabel::HC, 2, 2, {15.0, 14.5, 59.0}, {{0.0, 0.16, 1.7}});
  set(Region::R3, GroupLabel::EsAd, 5, 5, {15.0, 13.2, 144.0}, {{0.0, 1.1, 54.0}});
  set(Region::R4, GroupLabel::HC, 2, 1, {14.5, 15.0, 67.0}, std::nullopt);
  set(Region::R4, GroupLabel::EsAd, 7, 7, {13.3, 15.0, 113.0}, {{1.0, 0.0, 29.0}});
  return m;
}

CohortSpec reference_cohort_spec(std::uint64_t seed) {
  CohortSpec spec;
  spec.model = reference_mixture();
  spec.seed = seed;
  spec.counts.n = {{{8, 5}, {15, 9}, {2, 5}, {2, 7}}};
  spec.sigma_overrides[3][0] = {{0.5, 0.0, 15.0}};
  // A glacially slow region-3 writer and a region-4 subject who quit task 4
  // early: the outliers the exclusion rule is expected to catch.
  spec.plants.push_back(PlantedSample{Region::R3, GroupLabel::EsAd, 15.0, 12.5, 420.0});
  spec.plants.push_back(PlantedSample{Region::R4, GroupLabel::HC, 5.5, 15.0, 90.0});
  spec.fillers = {
      {1, 35.0, 8.0, 55.0, 18.0, false},
      {3, 25.0, 6.0, 45.0, 15.0, false},
      {5, 40.0, 10.0, 70.0, 20.0, false},
      {6, 11.0, 2.0, 13.5, 1.8, true},
  };
  return spec;
}

namespace {

using nlohmann::json;

json counts_to_json(const CellCounts& c) { return json(c.n); }

}  // namespace

std::string cohort_spec_json(const CohortSpec& spec) {
  json j;
  j["model"] = json::parse(gm_model_json(spec.model));
  j["counts"] = counts_to_json(spec.counts);
  json overrides = json::array();
  for (int r = 0; r < 4; ++r) {
    json row = json::array();
    for (int c = 0; c < 2; ++c) {
      row.push_back(spec.sigma_overrides[r][c] ? json(*spec.sigma_overrides[r][c])
                                               : json(nullptr));
    }
    overrides.push_back(row);
  }
  j["sigma_overrides"] = overrides;
  json plants = json::array();
  for (const PlantedSample& p : spec.plants) {
    plants.push_back({{"region", static_cast<int>(p.region)},
                      {"label", to_string(p.label)},
                      {"t4", p.t4},
                      {"t7", p.t7},
                      {"t2", p.t2}});
  }
  j["plants"] = plants;
  json fillers = json::array();
  for (const FillerTask& f : spec.fillers) {
    fillers.push_back({{"task", f.task},
                       {"mu_hc", f.mu_hc},
                       {"sigma_hc", f.sigma_hc},
                       {"mu_ad", f.mu_ad},
                       {"sigma_ad", f.sigma_ad},
                       {"clamp", f.clamp}});
  }
  j["fillers"] = fillers;
  j["id_prefix"] = spec.id_prefix;
  return j.dump(2) + "\n";
}

CohortSpec cohort_spec_from_json(const std::string& text) {
  const json j = json::parse(text);
  CohortSpec spec;
  spec.model = gm_model_from_json(j.at("model").dump());
  spec.counts.n = j.at("counts").get<std::array<std::array<int, 2>, 4>>();
  const json& overrides = j.at("sigma_overrides");
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 2; ++c) {
      if (!overrides.at(r).at(c).is_null()) {
        spec.sigma_overrides[r][c] = overrides.at(r).at(c).get<std::array<double, 3>>();
      }
    }
  }
  for (const json& p : j.at("plants")) {
    PlantedSample plant;
    const int region = p.at("region").get<int>();
    if (region < 1 || region > 4) throw std::invalid_argument("bad plant region");
    plant.region = static_cast<Region>(region);
    plant.label = label_from_string(p.at("label").get<std::string>());
    plant.t4 = p.at("t4").get<double>();
    plant.t7 = p.at("t7").get<double>();
    plant.t2 = p.at("t2").get<double>();
    spec.plants.push_back(plant);
  }
  for (const json& f : j.at("fillers")) {
    FillerTask filler;
    filler.task = f.at("task").get<int>();
    filler.mu_hc = f.at("mu_hc").get<double>();
    filler.sigma_hc = f.at("sigma_hc").get<double>();
    filler.mu_ad = f.at("mu_ad").get<double>();
    filler.sigma_ad = f.at("sigma_ad").get<double>();
    filler.clamp = f.at("clamp").get<bool>();
    spec.fillers.push_back(filler);
  }
  spec.id_prefix = j.at("id_prefix").get<std::string>();
  return spec;
}

}  // namespace rtc
