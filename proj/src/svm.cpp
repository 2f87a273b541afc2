#include "rtc/svm.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

namespace rtc {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

void validate_kernel(const KernelSpec& kernel) {
  if (const auto* rbf = std::get_if<RbfKernel>(&kernel)) {
    if (!(rbf->gamma > 0.0)) throw std::invalid_argument("rbf gamma must be > 0");
  } else if (const auto* poly = std::get_if<PolynomialKernel>(&kernel)) {
    if (poly->degree < 1) throw std::invalid_argument("polynomial degree must be >= 1");
    if (!(poly->gamma > 0.0)) throw std::invalid_argument("polynomial gamma must be > 0");
  }
}

double kernel_eval(const KernelSpec& kernel, std::span<const double> a,
                   std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("kernel arguments have dimensions " + std::to_string(a.size()) +
                            " and " + std::to_string(b.size()));
  }
  if (const auto* rbf = std::get_if<RbfKernel>(&kernel)) {
    return std::exp(-rbf->gamma * squared_distance(a, b));
  }
  if (std::holds_alternative<LinearKernel>(kernel)) {
    return dot(a, b);
  }
  const auto& poly = std::get<PolynomialKernel>(kernel);
  return std::pow(poly.gamma * dot(a, b) + poly.coef0, poly.degree);
}

GramMatrix::GramMatrix(const std::vector<std::vector<double>>& points,
                       const KernelSpec& kernel)
    : n_(points.size()), k_(points.size() * points.size()) {
  validate_kernel(kernel);
  for (std::size_t i = 1; i < n_; ++i) {
    if (points[i].size() != points[0].size()) {
      throw DimensionMismatch("point " + std::to_string(i) + " has dimension " +
                              std::to_string(points[i].size()) + ", expected " +
                              std::to_string(points[0].size()));
    }
  }
  for (std::size_t i = 0; i < n_; ++i) {
    k_[i * n_ + i] = kernel_eval(kernel, points[i], points[i]);
    for (std::size_t j = i + 1; j < n_; ++j) {
      const double v = kernel_eval(kernel, points[i], points[j]);
      k_[i * n_ + j] = v;
      k_[j * n_ + i] = v;
    }
  }
}

DualSolution solve_csvc_dual(const GramMatrix& gram, std::span<const std::size_t> active,
                             std::span<const int> labels, double c,
                             const SvmTrainOptions& opts) {
  const std::size_t m = active.size();
  if (labels.size() != m) throw std::invalid_argument("labels/active size mismatch");
  if (!(c > 0.0)) throw std::invalid_argument("c must be > 0");
  bool has_pos = false, has_neg = false;
  for (int y : labels) {
    if (y == +1) {
      has_pos = true;
    } else if (y == -1) {
      has_neg = true;
    } else {
      throw std::invalid_argument("labels must be -1 or +1");
    }
  }
  if (!has_pos || !has_neg) throw SingleClass("training set contains a single class");

  DualSolution sol;
  sol.alpha.assign(m, 0.0);
  // G_i = y_i * sum_j alpha_j y_j K_ij - 1 (gradient of the dual objective).
  std::vector<double> g(m, -1.0);
  const auto kij = [&](std::size_t i, std::size_t j) { return gram.at(active[i], active[j]); };

  for (;;) {
    // Maximal violating pair: i maximizes -y*G over the set still allowed to
    // grow along +y, j minimizes it over the set allowed to shrink.
    double up_best = -std::numeric_limits<double>::infinity();
    double low_best = std::numeric_limits<double>::infinity();
    std::size_t i = m, j = m;
    for (std::size_t s = 0; s < m; ++s) {
      const double v = -labels[s] * g[s];
      const bool in_up = labels[s] == +1 ? sol.alpha[s] < c : sol.alpha[s] > 0.0;
      const bool in_low = labels[s] == +1 ? sol.alpha[s] > 0.0 : sol.alpha[s] < c;
      if (in_up && v > up_best) {
        up_best = v;
        i = s;
      }
      if (in_low && v < low_best) {
        low_best = v;
        j = s;
      }
    }
    if (i == m || j == m || up_best - low_best <= opts.tolerance) {
      // Converged; bias from the free support vectors when any exist.
      double free_sum = 0.0;
      std::size_t free_count = 0;
      for (std::size_t s = 0; s < m; ++s) {
        if (sol.alpha[s] > 0.0 && sol.alpha[s] < c) {
          free_sum += -labels[s] * g[s];
          ++free_count;
        }
      }
      sol.bias = free_count > 0 ? free_sum / static_cast<double>(free_count)
                                : (up_best + low_best) / 2.0;
      return sol;
    }
    if (sol.pair_updates >= opts.max_pair_updates) {
      throw SolverNonConvergence("dual solver exceeded " +
                                 std::to_string(opts.max_pair_updates) + " pair updates");
    }
    ++sol.pair_updates;

    const double old_i = sol.alpha[i];
    const double old_j = sol.alpha[j];
    double quad = kij(i, i) + kij(j, j) - 2.0 * labels[i] * labels[j] * kij(i, j);
    if (quad <= 0.0) quad = 1e-12;
    if (labels[i] != labels[j]) {
      const double delta = (-g[i] - g[j]) / quad;
      const double diff = old_i - old_j;
      sol.alpha[i] += delta;
      sol.alpha[j] += delta;
      if (diff > 0.0) {
        if (sol.alpha[j] < 0.0) {
          sol.alpha[j] = 0.0;
          sol.alpha[i] = diff;
        }
      } else {
        if (sol.alpha[i] < 0.0) {
          sol.alpha[i] = 0.0;
          sol.alpha[j] = -diff;
        }
      }
      if (diff > 0.0) {
        if (sol.alpha[i] > c) {
          sol.alpha[i] = c;
          sol.alpha[j] = c - diff;
        }
      } else {
        if (sol.alpha[j] > c) {
          sol.alpha[j] = c;
          sol.alpha[i] = c + diff;
        }
      }
    } else {
      const double delta = (g[i] - g[j]) / quad;
      const double sum = old_i + old_j;
      sol.alpha[i] -= delta;
      sol.alpha[j] += delta;
      if (sum > c) {
        if (sol.alpha[i] > c) {
          sol.alpha[i] = c;
          sol.alpha[j] = sum - c;
        }
        if (sol.alpha[j] > c) {
          sol.alpha[j] = c;
          sol.alpha[i] = sum - c;
        }
      } else {
        if (sol.alpha[j] < 0.0) {
          sol.alpha[j] = 0.0;
          sol.alpha[i] = sum;
        }
        if (sol.alpha[i] < 0.0) {
          sol.alpha[i] = 0.0;
          sol.alpha[j] = sum;
        }
      }
    }
    const double di = labels[i] * (sol.alpha[i] - old_i);
    const double dj = labels[j] * (sol.alpha[j] - old_j);
    for (std::size_t s = 0; s < m; ++s) {
      g[s] += labels[s] * (di * kij(s, i) + dj * kij(s, j));
    }
  }
}

double decision_from_gram(const GramMatrix& gram, std::span<const std::size_t> active,
                          std::span<const int> labels, const DualSolution& sol,
                          std::size_t q) {
  double v = sol.bias;
  for (std::size_t s = 0; s < active.size(); ++s) {
    if (sol.alpha[s] != 0.0) v += sol.alpha[s] * labels[s] * gram.at(active[s], q);
  }
  return v;
}

double dual_objective(const GramMatrix& gram, std::span<const std::size_t> active,
                      std::span<const int> labels, std::span<const double> alpha) {
  double quad = 0.0, lin = 0.0;
  for (std::size_t i = 0; i < active.size(); ++i) {
    if (alpha[i] == 0.0) continue;
    lin += alpha[i];
    for (std::size_t j = 0; j < active.size(); ++j) {
      if (alpha[j] == 0.0) continue;
      quad += alpha[i] * alpha[j] * labels[i] * labels[j] * gram.at(active[i], active[j]);
    }
  }
  return 0.5 * quad - lin;
}

SvmModel train_csvc(const std::vector<std::vector<double>>& points,
                    const std::vector<int>& labels, double c, const KernelSpec& kernel,
                    const SvmTrainOptions& opts) {
  if (points.empty()) throw EmptyResult("no training points");
  if (points.size() != labels.size()) {
    throw std::invalid_argument("points/labels size mismatch");
  }
  const GramMatrix gram(points, kernel);
  std::vector<std::size_t> active(points.size());
  for (std::size_t i = 0; i < active.size(); ++i) active[i] = i;
  const DualSolution sol = solve_csvc_dual(gram, active, labels, c, opts);

  SvmModel model;
  model.kernel = kernel;
  model.c = c;
  model.n_features = static_cast<int>(points[0].size());
  model.bias = sol.bias;
  model.n_train = points.size();
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (sol.alpha[i] > 0.0) {
      model.support_points.push_back(points[i]);
      model.dual_coeffs.push_back(sol.alpha[i] * labels[i]);
    }
  }
  return model;
}

Prediction predict(const SvmModel& model, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(model.n_features)) {
    throw DimensionMismatch("query has dimension " + std::to_string(x.size()) +
                            ", model expects " + std::to_string(model.n_features));
  }
  Prediction p;
  p.decision_value = model.bias;
  for (std::size_t i = 0; i < model.support_points.size(); ++i) {
    p.decision_value += model.dual_coeffs[i] * kernel_eval(model.kernel, model.support_points[i], x);
  }
  p.label = p.decision_value >= 0.0 ? +1 : -1;
  return p;
}

namespace {

using nlohmann::json;

json kernel_to_json(const KernelSpec& kernel) {
  if (const auto* rbf = std::get_if<RbfKernel>(&kernel)) {
    return {{"type", "rbf"}, {"gamma", rbf->gamma}};
  }
  if (std::holds_alternative<LinearKernel>(kernel)) {
    return {{"type", "linear"}};
  }
  const auto& poly = std::get<PolynomialKernel>(kernel);
  return {{"type", "polynomial"}, {"degree", poly.degree}, {"gamma", poly.gamma},
          {"coef0", poly.coef0}};
}

KernelSpec kernel_from_json(const json& j) {
  const std::string type = j.at("type");
  if (type == "rbf") return RbfKernel{j.at("gamma").get<double>()};
  if (type == "linear") return LinearKernel{};
  if (type == "polynomial") {
    return PolynomialKernel{j.at("degree").get<int>(), j.at("gamma").get<double>(),
                            j.at("coef0").get<double>()};
  }
  throw std::invalid_argument("unknown kernel type '" + type + "'");
}

json scaler_to_json(const ScalerParams& params) {
  json j = json::object();
  for (int t = 1; t <= kTaskCount; ++t) {
    if (params.per_task[t - 1]) {
      j[std::to_string(t)] = {{"min", params.per_task[t - 1]->min},
                              {"max", params.per_task[t - 1]->max}};
    }
  }
  return j;
}

ScalerParams scaler_from_json(const json& j) {
  ScalerParams params;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const int t = std::stoi(it.key());
    if (t < 1 || t > kTaskCount) throw std::invalid_argument("bad scaler task id");
    params.per_task[t - 1] = FeatureScale{it.value().at("min").get<double>(),
                                          it.value().at("max").get<double>()};
  }
  return params;
}

}  // namespace

std::string svm_model_json(const SvmModel& model) {
  json j;
  j["kernel"] = kernel_to_json(model.kernel);
  j["c"] = model.c;
  j["n_features"] = model.n_features;
  j["support_points"] = model.support_points;
  j["dual_coeffs"] = model.dual_coeffs;
  j["bias"] = model.bias;
  j["n_train"] = model.n_train;
  j["tasks"] = model.tasks ? json(model.tasks->tasks()) : json(nullptr);
  j["scaler"] = model.scaler ? scaler_to_json(*model.scaler) : json(nullptr);
  return j.dump(2) + "\n";
}

SvmModel svm_model_from_json(const std::string& text) {
  const json j = json::parse(text);
  SvmModel model;
  model.kernel = kernel_from_json(j.at("kernel"));
  model.c = j.at("c").get<double>();
  model.n_features = j.at("n_features").get<int>();
  model.support_points = j.at("support_points").get<std::vector<std::vector<double>>>();
  model.dual_coeffs = j.at("dual_coeffs").get<std::vector<double>>();
  model.bias = j.at("bias").get<double>();
  model.n_train = j.at("n_train").get<std::size_t>();
  if (!j.at("tasks").is_null()) {
    model.tasks = IndicatorVector::from_tasks(j.at("tasks").get<std::vector<int>>());
  }
  if (!j.at("scaler").is_null()) {
    model.scaler = scaler_from_json(j.at("scaler"));
  }
  return model;
}

}  // namespace rtc
