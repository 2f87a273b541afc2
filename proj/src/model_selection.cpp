#include "rtc/model_selection.hpp"
#include <mutex>

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "rtc/rng.hpp"

namespace rtc {

namespace {

int resolve_threads(int t) {
  if (t >= 1) return t;
  const unsigned h = std::thread::hardware_concurrency();
  return h ? static_cast<int>(h) : 1;
}

// Runs fn(0..count-1) on up to `threads` workers; the first exception wins
// and is rethrown on the caller after all workers join.
template <typename F>
void parallel_for(std::size_t count, int threads, F&& fn) {
  const int workers = std::min<std::size_t>(static_cast<std::size_t>(resolve_threads(threads)),
                                            count == 0 ? 1 : count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          std::scoped_lock lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true);
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// Selected dense view of a binary dataset, ready for the solver.
struct Prepared {
  bool feasible = false;
  std::vector<std::vector<double>> x;  // scaled unless per-fold scaling is on
  std::vector<int> y;
};

Prepared prepare_indicator(const DurationDataset& ds, const IndicatorVector& ind,
                           bool scale_per_fold) {
  Prepared prep;
  DurationDataset sel;
  try {
    sel = select_features(ds, ind).dataset;
  } catch (const EmptyResult&) {
    return prep;
  }
  std::size_t pos = 0, neg = 0;
  for (int y : binary_labels(sel)) (y > 0 ? pos : neg) += 1;
  // Each class needs two samples so every leave-one-out training set still
  // holds both classes.
  if (pos < 2 || neg < 2) return prep;
  if (!scale_per_fold) {
    try {
      sel = apply_scaler(sel, fit_scaler(sel));
    } catch (const DegenerateFeature&) {
      return prep;
    }
  }
  prep.x = dense_features(sel, ind);
  prep.y = binary_labels(sel);
  prep.feasible = true;
  return prep;
}

// Column-wise [-1,1] scaling fitted on the rows listed in `train`.
// Returns false when a column is constant on the training rows.
bool scale_from_rows(const std::vector<std::vector<double>>& x,
                     const std::vector<std::size_t>& train,
                     std::vector<std::vector<double>>& out) {
  const std::size_t d = x[0].size();
  std::vector<double> lo(d), hi(d);
  for (std::size_t c = 0; c < d; ++c) {
    lo[c] = hi[c] = x[train[0]][c];
  }
  for (std::size_t r : train) {
    for (std::size_t c = 0; c < d; ++c) {
      lo[c] = std::min(lo[c], x[r][c]);
      hi[c] = std::max(hi[c], x[r][c]);
    }
  }
  for (std::size_t c = 0; c < d; ++c) {
    if (lo[c] == hi[c]) return false;
  }
  out = x;
  for (auto& row : out) {
    for (std::size_t c = 0; c < d; ++c) {
      row[c] = 2.0 * (row[c] - lo[c]) / (hi[c] - lo[c]) - 1.0;
    }
  }
  return true;
}

std::vector<std::size_t> all_but(std::size_t n, std::size_t skip) {
  std::vector<std::size_t> idx;
  idx.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (i != skip) idx.push_back(i);
  }
  return idx;
}

std::vector<int> labels_at(const std::vector<int>& y, const std::vector<std::size_t>& idx) {
  std::vector<int> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(y[i]);
  return out;
}

// LOOCV of the (c, gamma) ladder for one indicator; fills results in
// (c-major, gamma-minor) order starting at `out`.
void eval_indicator(const DurationDataset& ds, const IndicatorVector& ind,
                    const std::vector<double>& c_values, const std::vector<double>& gammas,
                    const CvOptions& opts, ConfigEvaluation* out) {
  const std::size_t cells = c_values.size() * gammas.size();
  const Prepared prep = prepare_indicator(ds, ind, opts.scale_per_fold);
  if (!prep.feasible) {
    for (std::size_t i = 0; i < cells; ++i) out[i] = ConfigEvaluation{};
    return;
  }
  const std::size_t n = prep.y.size();
  for (std::size_t i = 0; i < cells; ++i) {
    out[i] = ConfigEvaluation{};
    out[i].feasible = true;
    out[i].evaluated = n;
  }
  const auto slot = [&](std::size_t ci, std::size_t gi) -> ConfigEvaluation& {
    return out[ci * gammas.size() + gi];
  };

  if (!opts.scale_per_fold) {
    for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
      const GramMatrix gram(prep.x, RbfKernel{gammas[gi]});
      for (std::size_t ci = 0; ci < c_values.size(); ++ci) {
        ConfigEvaluation& ev = slot(ci, gi);
        for (std::size_t q = 0; q < n; ++q) {
          const auto active = all_but(n, q);
          const auto labels = labels_at(prep.y, active);
          const DualSolution sol =
              solve_csvc_dual(gram, active, labels, c_values[ci], opts.train);
          const double dec = decision_from_gram(gram, active, labels, sol, q);
          ev.confusion.add(prep.y[q] > 0, dec >= 0.0);
        }
        ev.error_count = ev.confusion.errors();
      }
    }
    return;
  }

  // Per-fold scaling: the scaler, and with it the Gram, changes per fold.
  for (std::size_t q = 0; q < n; ++q) {
    const auto active = all_but(n, q);
    std::vector<std::vector<double>> xf;
    if (!scale_from_rows(prep.x, active, xf)) {
      for (std::size_t i = 0; i < cells; ++i) out[i] = ConfigEvaluation{};
      return;
    }
    const auto labels = labels_at(prep.y, active);
    for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
      const GramMatrix gram(xf, RbfKernel{gammas[gi]});
      for (std::size_t ci = 0; ci < c_values.size(); ++ci) {
        const DualSolution sol =
            solve_csvc_dual(gram, active, labels, c_values[ci], opts.train);
        const double dec = decision_from_gram(gram, active, labels, sol, q);
        slot(ci, gi).confusion.add(prep.y[q] > 0, dec >= 0.0);
      }
    }
  }
  for (std::size_t i = 0; i < cells; ++i) out[i].error_count = out[i].confusion.errors();
}

}  // namespace

GridSpec GridSpec::full() {
  GridSpec g;
  g.indicators = all_indicator_vectors();
  g.c_values.assign(kDefaultLadder.begin(), kDefaultLadder.end());
  g.gamma_values.assign(kDefaultLadder.begin(), kDefaultLadder.end());
  return g;
}

std::vector<SvmGridConfig> enumerate_configs(const GridSpec& grid) {
  if (grid.indicators.empty() || grid.c_values.empty() || grid.gamma_values.empty()) {
    throw EmptyGrid("grid has an empty axis");
  }
  for (double c : grid.c_values) {
    if (!(c > 0.0)) throw std::invalid_argument("grid c values must be > 0");
  }
  for (double g : grid.gamma_values) {
    if (!(g > 0.0)) throw std::invalid_argument("grid gamma values must be > 0");
  }
  std::vector<SvmGridConfig> out;
  out.reserve(grid.indicators.size() * grid.c_values.size() * grid.gamma_values.size());
  for (const IndicatorVector& ind : grid.indicators) {
    for (double c : grid.c_values) {
      for (double gamma : grid.gamma_values) {
        out.push_back(SvmGridConfig{ind, c, gamma});
      }
    }
  }
  return out;
}

std::vector<ConfigEvaluation> evaluate_grid_loocv(const DurationDataset& ds,
                                                  const GridSpec& grid,
                                                  const CvOptions& opts) {
  enumerate_configs(grid);  // validates the axes
  binary_labels(ds);        // validates the polarity
  const std::size_t per_ind = grid.c_values.size() * grid.gamma_values.size();
  std::vector<ConfigEvaluation> results(grid.indicators.size() * per_ind);
  parallel_for(grid.indicators.size(), opts.threads, [&](std::size_t ii) {
    eval_indicator(ds, grid.indicators[ii], grid.c_values, grid.gamma_values, opts,
                   results.data() + ii * per_ind);
  });
  return results;
}

namespace {

// Shared "pick the best cell" scan; `by_rate` breaks denominators in,
// otherwise raw error counts are compared. First strict improvement wins.
std::optional<std::size_t> best_feasible(const std::vector<ConfigEvaluation>& evals,
                                         bool by_rate) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < evals.size(); ++i) {
    if (!evals[i].feasible) continue;
    if (!best) {
      best = i;
      continue;
    }
    if (by_rate ? evals[i].rate() < evals[*best].rate()
                : evals[i].error_count < evals[*best].error_count) {
      best = i;
    }
  }
  return best;
}

}  // namespace

GridSearchResult loocv_grid_search(const DurationDataset& ds, const GridSpec& grid,
                                   const CvOptions& opts) {
  const auto configs = enumerate_configs(grid);
  const auto evals = evaluate_grid_loocv(ds, grid, opts);
  const auto best = best_feasible(evals, /*by_rate=*/true);
  if (!best) throw EmptyResult("no feasible configuration in the grid");
  return GridSearchResult{configs[*best], *best, evals[*best]};
}

ConfusionMatrix train_as_test(const DurationDataset& ds, const SvmGridConfig& config,
                              const CvOptions& opts) {
  DurationDataset sel = select_features(ds, config.indicator).dataset;
  sel = apply_scaler(sel, fit_scaler(sel));
  const auto x = dense_features(sel, config.indicator);
  const auto y = binary_labels(sel);
  const SvmModel model = train_csvc(x, y, config.c, RbfKernel{config.gamma}, opts.train);
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < x.size(); ++i) {
    cm.add(y[i] > 0, predict(model, x[i]).label > 0);
  }
  return cm;
}

NestedCvResult nested_cv(const DurationDataset& ds, const GridSpec& grid,
                         const CvOptions& opts) {
  const auto configs = enumerate_configs(grid);
  binary_labels(ds);
  const std::size_t n = ds.size();
  if (n < 3) throw BadFoldCount("nested CV needs at least 3 samples");

  NestedCvResult res;
  res.n = n;
  res.fold_configs.assign(n, std::nullopt);
  std::vector<std::optional<std::size_t>> fold_index(n);
  std::vector<ConfusionMatrix> fold_cm(n);

  CvOptions inner = opts;
  inner.threads = 1;  // the outer folds carry the parallelism

  parallel_for(n, opts.threads, [&](std::size_t q) {
    DurationDataset rest;
    rest.polarity = ds.polarity;
    for (std::size_t i = 0; i < n; ++i) {
      if (i != q) rest.samples.push_back(ds.samples[i]);
    }
    const DurationSample& held = ds.samples[q];
    const bool truth_pos = held.label == ds.polarity->positive;

    const auto evals = evaluate_grid_loocv(rest, grid, inner);
    const auto best = best_feasible(evals, /*by_rate=*/false);
    if (!best) {
      fold_cm[q].add(truth_pos, !truth_pos);  // unclassifiable: scored as error
      return;
    }
    const SvmGridConfig& cfg = configs[*best];
    fold_index[q] = *best;

    bool held_complete = true;
    for (int t : cfg.indicator.tasks()) {
      if (!held.has_task(t)) held_complete = false;
    }
    if (!held_complete) {
      fold_cm[q].add(truth_pos, !truth_pos);
      return;
    }
    DurationDataset sel = select_features(rest, cfg.indicator).dataset;
    const ScalerParams scaler = fit_scaler(sel);
    sel = apply_scaler(sel, scaler);
    const SvmModel model = train_csvc(dense_features(sel, cfg.indicator), binary_labels(sel),
                                      cfg.c, RbfKernel{cfg.gamma}, opts.train);
    DurationDataset held_ds;
    held_ds.samples.push_back(held);
    held_ds = select_features(held_ds, cfg.indicator).dataset;
    const auto held_x = dense_features(apply_scaler(held_ds, scaler), cfg.indicator);
    fold_cm[q].add(truth_pos, predict(model, held_x[0]).label > 0);
  });

  for (std::size_t q = 0; q < n; ++q) {
    res.confusion += fold_cm[q];
    if (fold_index[q]) res.fold_configs[q] = configs[*fold_index[q]];
  }
  res.errors = res.confusion.errors();
  res.accuracy = static_cast<double>(n - res.errors) / static_cast<double>(n);

  std::map<std::size_t, std::size_t> votes;
  for (const auto& idx : fold_index) {
    if (idx) votes[*idx] += 1;
  }
  for (const auto& [idx, count] : votes) {
    if (count > res.modal_count) {  // map order makes ties resolve to the earliest config
      res.modal_count = count;
      res.modal_config = configs[idx];
    }
  }
  return res;
}

KfoldResult repeated_kfold(const DurationDataset& ds, int k, const SvmGridConfig& config,
                           std::size_t repetitions, std::uint64_t seed,
                           const CvOptions& opts) {
  binary_labels(ds);
  const DurationDataset sel = select_features(ds, config.indicator).dataset;
  const std::size_t n = sel.size();
  if (k < 2 || static_cast<std::size_t>(k) > n) {
    throw BadFoldCount("k must be in [2, " + std::to_string(n) + "], got " + std::to_string(k));
  }
  const auto y = binary_labels(sel);

  std::vector<std::vector<double>> x;
  std::optional<GramMatrix> shared_gram;
  if (!opts.scale_per_fold) {
    const DurationDataset scaled = apply_scaler(sel, fit_scaler(sel));
    x = dense_features(scaled, config.indicator);
    shared_gram.emplace(x, RbfKernel{config.gamma});
  } else {
    x = dense_features(sel, config.indicator);
  }

  std::vector<std::int64_t> rep_errors(repetitions, 0);
  parallel_for(repetitions, opts.threads, [&](std::size_t rep) {
    DetRng rng(derive_seed(seed, rep));
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    rng.shuffle(perm);

    std::int64_t errors = 0;
    std::size_t start = 0;
    for (int f = 0; f < k; ++f) {
      const std::size_t size = n / k + (static_cast<std::size_t>(f) < n % k ? 1 : 0);
      std::vector<std::size_t> test(perm.begin() + start, perm.begin() + start + size);
      std::vector<std::size_t> train;
      train.reserve(n - size);
      for (std::size_t i = 0; i < n; ++i) {
        if (i < start || i >= start + size) train.push_back(perm[i]);
      }
      start += size;

      auto train_labels = labels_at(y, train);
      const bool has_pos = std::count(train_labels.begin(), train_labels.end(), +1) > 0;
      const bool has_neg = std::count(train_labels.begin(), train_labels.end(), -1) > 0;
      if (!has_pos || !has_neg) {
        // Degenerate split: the only label ever seen is the prediction.
        const int only = has_pos ? +1 : -1;
        for (std::size_t q : test) {
          if (y[q] != only) ++errors;
        }
        continue;
      }
      if (!opts.scale_per_fold) {
        const DualSolution sol =
            solve_csvc_dual(*shared_gram, train, train_labels, config.c, opts.train);
        for (std::size_t q : test) {
          const double dec = decision_from_gram(*shared_gram, train, train_labels, sol, q);
          if ((dec >= 0.0) != (y[q] > 0)) ++errors;
        }
      } else {
        std::vector<std::vector<double>> xf;
        if (!scale_from_rows(x, train, xf)) {
          throw DegenerateFeature("constant feature in a training split");
        }
        const GramMatrix gram(xf, RbfKernel{config.gamma});
        const DualSolution sol = solve_csvc_dual(gram, train, train_labels, config.c, opts.train);
        for (std::size_t q : test) {
          const double dec = decision_from_gram(gram, train, train_labels, sol, q);
          if ((dec >= 0.0) != (y[q] > 0)) ++errors;
        }
      }
    }
    rep_errors[rep] = errors;
  });

  KfoldResult res;
  res.k = k;
  res.repetitions = repetitions;
  res.seed = seed;
  res.evaluated = n;
  for (std::int64_t e : rep_errors) res.histogram[e] += 1;
  return res;
}

}  // namespace rtc
