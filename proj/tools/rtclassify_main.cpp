#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rtc/gaussian_regions.hpp"
#include "rtc/ingest.hpp"
#include "rtc/model_selection.hpp"
#include "rtc/synth.hpp"
#include "rtc/threshold_rule.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rtc;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("short write to " + path);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  return parts;
}

std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> out;
  for (const std::string& part : split(s, ',')) out.push_back(parse_double(part));
  return out;
}

IndicatorVector parse_tasks(const std::string& s) {
  std::vector<int> tasks;
  for (const std::string& part : split(s, ',')) {
    std::size_t pos = 0;
    const int t = std::stoi(part, &pos);
    if (pos != part.size()) throw std::invalid_argument("bad task list '" + s + "'");
    tasks.push_back(t);
  }
  return IndicatorVector::from_tasks(tasks);
}

BinaryPolarity parse_pair(const std::string& s) {
  const auto pos = s.find(':');
  if (pos == std::string::npos) {
    throw std::invalid_argument("pair must look like NEG:POS, e.g. HC:ES-AD");
  }
  BinaryPolarity p;
  p.negative = label_from_string(s.substr(0, pos));
  p.positive = label_from_string(s.substr(pos + 1));
  return p;
}

DurationDataset load_pair(const std::string& path, const std::string& pair) {
  const BinaryPolarity p = parse_pair(pair);
  return pair_subset(parse_duration_csv(slurp(path)), p.negative, p.positive);
}

json confusion_json(const ConfusionMatrix& cm) {
  return {{"tp", cm.tp}, {"fp", cm.fp},         {"fn", cm.fn},
          {"tn", cm.tn}, {"errors", cm.errors()}, {"total", cm.total()}};
}

json ratio_or_null(std::int64_t num, std::int64_t den) {
  if (den == 0) return nullptr;
  return static_cast<double>(num) / static_cast<double>(den);
}

json metrics_json(const ConfusionMatrix& cm) {
  return {{"accuracy", ratio_or_null(cm.tp + cm.tn, cm.total())},
          {"sensitivity", ratio_or_null(cm.tp, cm.tp + cm.fn)},
          {"specificity", ratio_or_null(cm.tn, cm.tn + cm.fp)}};
}

json config_json(const SvmGridConfig& cfg) {
  return {{"tasks", cfg.indicator.tasks()}, {"c", cfg.c}, {"gamma", cfg.gamma}};
}

json pair_json(const BinaryPolarity& p) {
  return {{"negative", to_string(p.negative)}, {"positive", to_string(p.positive)}};
}

json region_errors_json(const std::vector<RegionErrorRecord>& errors) {
  json arr = json::array();
  for (const RegionErrorRecord& e : errors) {
    arr.push_back({{"subject", e.subject_id},
                   {"region", static_cast<int>(e.region)},
                   {"truth", to_string(e.truth)},
                   {"predicted", to_string(e.predicted)}});
  }
  return arr;
}

void flatten(const json& j, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      flatten(value, prefix.empty() ? key : prefix + "." + key, rows);
    }
  } else if (j.is_array()) {
    std::size_t i = 0;
    for (const json& value : j) flatten(value, prefix + "[" + std::to_string(i++) + "]", rows);
  } else if (j.is_string()) {
    rows.emplace_back(prefix, j.get<std::string>());
  } else {
    rows.emplace_back(prefix, j.dump());
  }
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

// --out always receives the full JSON document; --format shapes stdout only.
void emit(const json& j, const std::string& format, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (!out.empty()) spill(out, text);
  if (format == "json") {
    std::cout << text;
    return;
  }
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(j, "", rows);
  if (format == "md") {
    std::cout << "| field | value |\n|---|---|\n";
    for (const auto& [k, v] : rows) std::cout << "| " << k << " | " << v << " |\n";
  } else {
    std::cout << "field,value\n";
    for (const auto& [k, v] : rows) std::cout << csv_escape(k) << "," << csv_escape(v) << "\n";
  }
}

struct GridFlags {
  std::string data;
  std::string pair = "HC:ES-AD";
  std::string c_grid, gamma_grid;
  std::vector<std::string> tasks;
  bool scale_per_fold = false;
  int threads = 1;
  std::string out, format = "json";
};

void add_grid_flags(CLI::App* sub, GridFlags& f, bool with_axes) {
  sub->add_option("--data", f.data, "duration CSV")->required();
  sub->add_option("--pair", f.pair, "negative:positive class pair (default HC:ES-AD)");
  if (with_axes) {
    sub->add_option("--c-grid", f.c_grid, "comma-separated soft-margin values");
    sub->add_option("--gamma-grid", f.gamma_grid, "comma-separated kernel widths");
    sub->add_option("--tasks-grid", f.tasks, "task subsets, e.g. 2,4,7 1,2,3 (default: all 127)");
  }
  sub->add_flag("--scale-per-fold", f.scale_per_fold,
                "refit the [-1,1] scaling inside each training fold");
  sub->add_option("--threads", f.threads, "worker threads; 0 = all cores");
  sub->add_option("--out", f.out, "write the JSON report here");
  sub->add_option("--format", f.format, "stdout rendering")
      ->check(CLI::IsMember({"json", "md", "csv"}));
}

GridSpec build_grid(const GridFlags& f) {
  GridSpec grid = GridSpec::full();
  if (!f.c_grid.empty()) grid.c_values = parse_grid(f.c_grid);
  if (!f.gamma_grid.empty()) grid.gamma_values = parse_grid(f.gamma_grid);
  if (!f.tasks.empty()) {
    grid.indicators.clear();
    for (const std::string& t : f.tasks) grid.indicators.push_back(parse_tasks(t));
  }
  return grid;
}

CvOptions build_cv(const GridFlags& f) {
  CvOptions opts;
  opts.scale_per_fold = f.scale_per_fold;
  opts.threads = f.threads < 1 ? -1 : f.threads;
  return opts;
}

json grid_axes_json(const GridSpec& grid) {
  return {{"c", grid.c_values},
          {"gamma", grid.gamma_values},
          {"task_subsets", grid.indicators.size()}};
}

void run_gridsearch(const GridFlags& f, int mode, bool mode_set) {
  const DurationDataset ds = load_pair(f.data, f.pair);
  const GridSpec grid = build_grid(f);
  const CvOptions opts = build_cv(f);
  const GridSearchResult res = loocv_grid_search(ds, grid, opts);
  const ConfusionMatrix resub = train_as_test(ds, res.best, opts);

  json j;
  j["command"] = "gridsearch";
  j["pair"] = pair_json(*ds.polarity);
  if (mode_set) j["mode"] = mode;
  j["n"] = ds.size();
  j["scale_per_fold"] = f.scale_per_fold;
  j["grid"] = grid_axes_json(grid);
  j["best"] = config_json(res.best);
  j["best_index"] = res.best_index;
  j["loocv"] = {{"error_count", res.eval.error_count},
                {"evaluated", res.eval.evaluated},
                {"error_rate", res.eval.rate()},
                {"confusion", confusion_json(res.eval.confusion)},
                {"metrics", metrics_json(res.eval.confusion)}};
  j["resubstitution"] = {{"confusion", confusion_json(resub)},
                         {"metrics", metrics_json(resub)}};
  emit(j, f.format, f.out);
}

void run_ncv(const GridFlags& f) {
  const DurationDataset ds = load_pair(f.data, f.pair);
  const GridSpec grid = build_grid(f);
  const NestedCvResult res = nested_cv(ds, grid, build_cv(f));

  json folds = json::array();
  for (const auto& cfg : res.fold_configs) {
    folds.push_back(cfg ? config_json(*cfg) : json(nullptr));
  }
  json j;
  j["command"] = "ncv";
  j["pair"] = pair_json(*ds.polarity);
  j["n"] = res.n;
  j["scale_per_fold"] = f.scale_per_fold;
  j["grid"] = grid_axes_json(grid);
  j["errors"] = res.errors;
  j["accuracy"] = res.accuracy;
  j["confusion"] = confusion_json(res.confusion);
  j["metrics"] = metrics_json(res.confusion);
  j["modal"] = {{"config", res.modal_config ? config_json(*res.modal_config) : json(nullptr)},
                {"count", res.modal_count}};
  j["folds"] = folds;
  emit(j, f.format, f.out);
}

struct KfoldFlags {
  GridFlags base;
  int k = 10;
  std::size_t reps = 100;
  std::uint64_t seed = 0;
  std::string tasks = "1,2,3,4,5,6,7";
  double c = 1.0;
  double gamma = 1.0;
};

void run_kfold(const KfoldFlags& f) {
  const DurationDataset ds = load_pair(f.base.data, f.base.pair);
  SvmGridConfig cfg{parse_tasks(f.tasks), f.c, f.gamma};
  const KfoldResult res = repeated_kfold(ds, f.k, cfg, f.reps, f.seed, build_cv(f.base));

  json hist = json::array();
  for (const auto& [errors, reps] : res.histogram) {
    hist.push_back({{"errors", errors}, {"repetitions", reps}});
  }
  json j;
  j["command"] = "kfold";
  j["pair"] = pair_json(*ds.polarity);
  j["config"] = config_json(cfg);
  j["k"] = res.k;
  j["repetitions"] = res.repetitions;
  j["seed"] = res.seed;
  j["evaluated"] = res.evaluated;
  j["scale_per_fold"] = f.base.scale_per_fold;
  j["histogram"] = hist;
  emit(j, f.base.format, f.base.out);
}

struct GmFlags {
  std::string data;
  std::string atypical = "jackknife";
  double atypical_threshold = 4.0;
  bool truncated_normal = false;
  bool drop_t2 = false;
  std::string out, format = "json";
};

GmFitOptions build_gm_options(const GmFlags& f) {
  GmFitOptions opts;
  if (f.atypical == "jackknife") {
    opts.atypical_rule = AtypicalRule::Jackknife;
  } else if (f.atypical == "all-samples") {
    opts.atypical_rule = AtypicalRule::AllSamples;
  } else {
    opts.atypical_rule = AtypicalRule::None;
  }
  opts.atypical_threshold = f.atypical_threshold;
  opts.truncated_normal = f.truncated_normal;
  opts.use_t2_outside_region2 = !f.drop_t2;
  return opts;
}

std::vector<TripleSample> load_triples(const std::string& path) {
  const DurationDataset ds = parse_duration_csv(slurp(path));
  return to_triples(pair_subset(ds, GroupLabel::HC, GroupLabel::EsAd));
}

json eval_json(const RegionEvalResult& res) {
  return {{"confusion", confusion_json(res.confusion)},
          {"metrics", metrics_json(res.confusion)},
          {"errors", region_errors_json(res.errors)}};
}

void run_gm_fit(const GmFlags& f) {
  const auto triples = load_triples(f.data);
  const GmFitOptions opts = build_gm_options(f);
  const RegionMixtureModel model = fit_region_mixtures(triples, opts);

  json j;
  j["command"] = "gm-fit";
  j["n"] = triples.size();
  j["model"] = json::parse(gm_model_json(model));
  j["train"] = eval_json(gm_train_as_test(triples, opts));
  if (triples.size() >= 2) j["loocv"] = eval_json(gm_loocv(triples, opts));
  emit(j, f.format, f.out);
}

struct EvalFlags {
  std::string model, data, out, format = "json";
};

void run_gm_eval(const EvalFlags& f) {
  json doc = json::parse(slurp(f.model));
  if (doc.contains("model")) doc = doc.at("model");
  const RegionMixtureModel model = gm_model_from_json(doc.dump());

  const auto triples = load_triples(f.data);
  RegionEvalResult res;
  json preds = json::array();
  for (const TripleSample& s : triples) {
    const GroupLabel pred = gm_predict(model, s.coords());
    const bool truth_pos = s.label == GroupLabel::EsAd;
    const bool pred_pos = pred == GroupLabel::EsAd;
    res.confusion.add(truth_pos, pred_pos);
    if (truth_pos != pred_pos) {
      res.errors.push_back(RegionErrorRecord{s.subject_id, assign_region(s), s.label, pred});
    }
    preds.push_back({{"subject", s.subject_id}, {"predicted", to_string(pred)}});
  }

  json j;
  j["command"] = "gm-eval";
  j["n"] = triples.size();
  j["confusion"] = confusion_json(res.confusion);
  j["metrics"] = metrics_json(res.confusion);
  j["errors"] = region_errors_json(res.errors);
  j["predictions"] = preds;
  emit(j, f.format, f.out);
}

void run_adhoc_train(const std::string& data, const std::string& out,
                     const std::string& format) {
  const auto triples = load_triples(data);
  const ThresholdFit fit = threshold_train(triples);

  json j;
  j["command"] = "adhoc-train";
  j["n"] = triples.size();
  j["fit"] = json::parse(threshold_fit_json(fit));
  j["train"] = eval_json(threshold_evaluate(triples, fit.params));
  if (triples.size() >= 2) j["loocv"] = eval_json(threshold_loocv(triples));
  emit(j, format, out);
}

struct AdhocEvalFlags {
  std::string fit, data, out, format = "json";
  double p4 = 0.0, p7 = 0.0, p2 = 0.0;
  bool p4_set = false, p7_set = false, p2_set = false;
};

void run_adhoc_eval(const AdhocEvalFlags& f) {
  ThresholdParams params;
  if (!f.fit.empty()) {
    json doc = json::parse(slurp(f.fit));
    if (doc.contains("fit")) doc = doc.at("fit");
    const ThresholdFit parsed = threshold_fit_from_json(doc.dump());
    params = parsed.params;
  } else if (!(f.p4_set && f.p7_set && f.p2_set)) {
    throw std::invalid_argument("pass --fit FILE or all of --p4/--p7/--p2");
  }
  if (f.p4_set) params.p4 = f.p4;
  if (f.p7_set) params.p7 = f.p7;
  if (f.p2_set) params.p2 = f.p2;

  const auto triples = load_triples(f.data);
  const RegionEvalResult res = threshold_evaluate(triples, params);

  json j;
  j["command"] = "adhoc-eval";
  j["n"] = triples.size();
  j["params"] = {{"p4", params.p4}, {"p7", params.p7}, {"p2", params.p2}};
  j["confusion"] = confusion_json(res.confusion);
  j["metrics"] = metrics_json(res.confusion);
  j["errors"] = region_errors_json(res.errors);
  emit(j, f.format, f.out);
}

struct ExtractFlags {
  std::string in_dir;
  int mode = 4;
  double pressure_threshold = 0.0;
  std::string out, format = "json";
};

void run_extract(const ExtractFlags& f) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(f.in_dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw EmptyResult("no recording files in " + f.in_dir);

  std::vector<SubjectRecording> recs;
  recs.reserve(files.size());
  for (const fs::path& p : files) recs.push_back(parse_recording(slurp(p.string())));
  const DurationDataset ds =
      build_duration_dataset(recs, MeasurementMode(f.mode), f.pressure_threshold);
  const std::string csv = duration_csv(ds);

  if (f.out.empty()) {
    std::cout << csv;
    return;
  }
  spill(f.out, csv);
  json labels;
  for (GroupLabel l : kAllLabels) {
    const std::size_t c = ds.count_label(l);
    if (c > 0) labels[to_string(l)] = c;
  }
  json j;
  j["command"] = "extract";
  j["mode"] = f.mode;
  j["pressure_threshold"] = f.pressure_threshold;
  j["n"] = ds.size();
  j["labels"] = labels;
  emit(j, f.format, "");
}

struct SynthFlags {
  std::uint64_t seed = 0;
  std::string preset = "reference";
  std::string spec_path;
  std::string out;
  std::string streams_dir;
  std::string format = "json";
};

void run_synth(const SynthFlags& f) {
  CohortSpec spec;
  if (!f.spec_path.empty()) {
    spec = cohort_spec_from_json(slurp(f.spec_path));
  } else if (f.preset == "reference") {
    spec = reference_cohort_spec();
  } else {
    throw std::invalid_argument("unknown preset '" + f.preset + "'");
  }
  spec.seed = f.seed;

  const DurationDataset ds = sample_cohort(spec);
  const std::string csv = duration_csv(ds);

  if (!f.streams_dir.empty()) {
    fs::create_directories(f.streams_dir);
    for (const SubjectRecording& rec : emit_pen_streams(ds, spec.seed)) {
      spill((fs::path(f.streams_dir) / (rec.subject_id + ".csv")).string(),
            recording_csv(rec));
    }
  }
  if (f.out.empty()) {
    std::cout << csv;
    return;
  }
  spill(f.out, csv);

  std::array<std::size_t, 4> regions{};
  for (const DurationSample& s : ds.samples) {
    if (s.has_task(4) && s.has_task(7)) {
      regions[static_cast<int>(assign_region(s.task(4), s.task(7))) - 1] += 1;
    }
  }
  json j;
  j["command"] = "synth";
  j["seed"] = spec.seed;
  j["n"] = ds.size();
  j["labels"] = {{"HC", ds.count_label(GroupLabel::HC)},
                 {"ES-AD", ds.count_label(GroupLabel::EsAd)}};
  j["regions"] = regions;
  emit(j, f.format, "");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"task-duration extraction and HC / ES-AD classifiers for pen-tablet data"};
  app.require_subcommand(1);

  ExtractFlags ef;
  CLI::App* extract = app.add_subcommand("extract", "pen recordings -> duration CSV");
  extract->add_option("--in", ef.in_dir, "directory of recording files")->required();
  extract->add_option("--mode", ef.mode, "measurement mode 1..5")->check(CLI::Range(1, 5));
  extract->add_option("--pressure-threshold", ef.pressure_threshold,
                      "pen-down pressure cutoff");
  extract->add_option("--out", ef.out, "write the CSV here (default: stdout)");
  extract->add_option("--format", ef.format, "summary rendering when --out is set")
      ->check(CLI::IsMember({"json", "md", "csv"}));

  GridFlags gf;
  int gs_mode = 0;
  CLI::App* gridsearch =
      app.add_subcommand("gridsearch", "leave-one-out SVM grid search");
  add_grid_flags(gridsearch, gf, true);
  CLI::Option* gs_mode_opt =
      gridsearch->add_option("--mode", gs_mode, "measurement mode the CSV came from")
          ->check(CLI::Range(1, 5));

  GridFlags nf;
  CLI::App* ncv = app.add_subcommand("ncv", "nested cross-validation of the SVM grid");
  add_grid_flags(ncv, nf, true);

  KfoldFlags kf;
  CLI::App* kfold = app.add_subcommand("kfold", "repeated k-fold CV of one configuration");
  add_grid_flags(kfold, kf.base, false);
  kfold->add_option("--k", kf.k, "fold count")->required();
  kfold->add_option("--reps", kf.reps, "repetitions (default 100)");
  kfold->add_option("--seed", kf.seed, "shuffle seed")->required();
  kfold->add_option("--tasks", kf.tasks, "task subset (default all seven)");
  kfold->add_option("--c", kf.c, "soft-margin parameter");
  kfold->add_option("--gamma", kf.gamma, "kernel width");

  GmFlags gmf;
  CLI::App* gm_fit = app.add_subcommand("gm-fit", "region-split Gaussian mixture fit");
  gm_fit->add_option("--data", gmf.data, "duration CSV")->required();
  gm_fit->add_option("--atypical", gmf.atypical, "exclusion rule")
      ->check(CLI::IsMember({"jackknife", "all-samples", "none"}));
  gm_fit->add_option("--atypical-threshold", gmf.atypical_threshold,
                     "exclusion cutoff in standard deviations");
  gm_fit->add_flag("--truncated-normal", gmf.truncated_normal,
                   "renormalize clamped coordinates over [0, 15]");
  gm_fit->add_flag("--drop-t2-outside-r2", gmf.drop_t2,
                   "use t2 only where both coordinates sit at the limit");
  gm_fit->add_option("--out", gmf.out, "write the JSON report here");
  gm_fit->add_option("--format", gmf.format, "stdout rendering")
      ->check(CLI::IsMember({"json", "md", "csv"}));

  EvalFlags gef;
  CLI::App* gm_eval = app.add_subcommand("gm-eval", "classify a CSV with a fitted mixture");
  gm_eval->add_option("--model", gef.model, "mixture JSON (bare or a gm-fit report)")
      ->required();
  gm_eval->add_option("--data", gef.data, "duration CSV")->required();
  gm_eval->add_option("--out", gef.out, "write the JSON report here");
  gm_eval->add_option("--format", gef.format, "stdout rendering")
      ->check(CLI::IsMember({"json", "md", "csv"}));

  std::string at_data, at_out, at_format = "json";
  CLI::App* adhoc_train = app.add_subcommand("adhoc-train", "fit the three-threshold rule");
  adhoc_train->add_option("--data", at_data, "duration CSV")->required();
  adhoc_train->add_option("--out", at_out, "write the JSON report here");
  adhoc_train->add_option("--format", at_format, "stdout rendering")
      ->check(CLI::IsMember({"json", "md", "csv"}));

  AdhocEvalFlags aef;
  CLI::App* adhoc_eval =
      app.add_subcommand("adhoc-eval", "classify a CSV with fixed thresholds");
  adhoc_eval->add_option("--fit", aef.fit, "threshold JSON (bare or an adhoc-train report)");
  CLI::Option* p4o = adhoc_eval->add_option("--p4", aef.p4, "t4 cutoff");
  CLI::Option* p7o = adhoc_eval->add_option("--p7", aef.p7, "t7 cutoff");
  CLI::Option* p2o = adhoc_eval->add_option("--p2", aef.p2, "t2 cutoff");
  adhoc_eval->add_option("--data", aef.data, "duration CSV")->required();
  adhoc_eval->add_option("--out", aef.out, "write the JSON report here");
  adhoc_eval->add_option("--format", aef.format, "stdout rendering")
      ->check(CLI::IsMember({"json", "md", "csv"}));

  SynthFlags sf;
  CLI::App* synth = app.add_subcommand("synth", "draw a synthetic cohort");
  synth->add_option("--seed", sf.seed, "generation seed")->required();
  synth->add_option("--preset", sf.preset, "built-in cohort spec (reference)");
  synth->add_option("--spec", sf.spec_path, "cohort spec JSON (overrides --preset)");
  synth->add_option("--out", sf.out, "write the duration CSV here (default: stdout)");
  synth->add_option("--streams-dir", sf.streams_dir,
                    "also write one pen-recording CSV per subject");
  synth->add_option("--format", sf.format, "summary rendering when --out is set")
      ->check(CLI::IsMember({"json", "md", "csv"}));

  try {
    app.parse(argc, argv);
    if (*extract) run_extract(ef);
    if (*gridsearch) run_gridsearch(gf, gs_mode, gs_mode_opt->count() > 0);
    if (*ncv) run_ncv(nf);
    if (*kfold) run_kfold(kf);
    if (*gm_fit) run_gm_fit(gmf);
    if (*gm_eval) {
      run_gm_eval(gef);
    }
    if (*adhoc_train) run_adhoc_train(at_data, at_out, at_format);
    if (*adhoc_eval) {
      aef.p4_set = p4o->count() > 0;
      aef.p7_set = p7o->count() > 0;
      aef.p2_set = p2o->count() > 0;
      run_adhoc_eval(aef);
    }
    if (*synth) run_synth(sf);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
