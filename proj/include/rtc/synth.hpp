#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rtc/gaussian_regions.hpp"
#include "rtc/ingest.hpp"

namespace rtc {

struct CellCounts {
  std::array<std::array<int, 2>, 4> n{};  // [region-1][0=HC, 1=ES-AD]

  int& at(Region r, GroupLabel label);
  int at(Region r, GroupLabel label) const;
  int total() const;
};

// A fixed (t4, t7, t2) triple appended to a cell after the random draws;
// counts towards the cell's sample count.
struct PlantedSample {
  Region region = Region::R1;
  GroupLabel label = GroupLabel::HC;
  double t4 = 0.0, t7 = 0.0, t2 = 0.0;
};

// Per-class normal parameters for a task outside {2, 4, 7}; lets a cohort
// carry all seven columns. `clamp` caps draws at the 15 s limit.
struct FillerTask {
  int task = 1;
  double mu_hc = 0.0, sigma_hc = 1.0;
  double mu_ad = 0.0, sigma_ad = 1.0;
  bool clamp = false;
};

struct CohortSpec {
  RegionMixtureModel model;  // generating mu/sigma/counts per cell
  CellCounts counts;
  // Draw scale for cells whose model sigma is absent (e.g. one survivor).
  std::array<std::array<std::optional<std::array<double, 3>>, 2>, 4> sigma_overrides;
  std::vector<PlantedSample> plants;
  std::vector<FillerTask> fillers;
  std::uint64_t seed = 0;
  std::string id_prefix = "syn";
};

// Draws a labelled duration dataset cell by cell. Every value is quantized
// to 1 ms; draws are rejected until the quantized value stays inside its
// region (t4/t7 in [0, 15) where the region demands "under the limit",
// exactly 15 where it demands the limit; t2 and fillers >= 0). Each
// (region, class) cell consumes an independent substream of the seed, so
// changing one cell's count leaves the other cells' values untouched.
// Throws UnsampleableCell when a populated cell lacks mu, or lacks both a
// sigma and an override.
DurationDataset sample_cohort(const CohortSpec& spec);

// Renders each sample as a pen-tablet recording whose extracted durations
// reproduce the dataset exactly under the clamped measurement (mode 4).
// Durations must be 1 ms-quantized. Tasks at the 15 s limit get a random
// overshoot so the raw span exceeds the limit; long tasks are split into two
// pen-down runs so the measurement modes stay distinguishable.
std::vector<SubjectRecording> emit_pen_streams(const DurationDataset& ds, std::uint64_t seed);

// Bundled HC / ES-AD mixture parameters (the shapes the classifiers are
// exercised against): 53 subjects across the four regions.
RegionMixtureModel reference_mixture();

inline constexpr std::uint64_t kReferenceSeed = 20240060;

// The standard 53-subject preset built on reference_mixture(): the published
// cell counts, filler parameters for tasks 1/3/5/6, a spread override for
// the one-survivor cell, and two planted atypical subjects (a slow-t2 ES-AD
// writer in region 3 and an early-abandon HC subject in region 4).
CohortSpec reference_cohort_spec(std::uint64_t seed = kReferenceSeed);

std::string cohort_spec_json(const CohortSpec& spec);
CohortSpec cohort_spec_from_json(const std::string& text);

}  // namespace rtc
