#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rtc/dataset.hpp"

namespace rtc {

struct RbfKernel {
  double gamma = 1.0;  // k(x,z) = exp(-gamma * |x-z|^2)
};
struct LinearKernel {};
struct PolynomialKernel {
  int degree = 3;
  double gamma = 1.0;
  double coef0 = 0.0;  // k(x,z) = (gamma * <x,z> + coef0)^degree
};

using KernelSpec = std::variant<RbfKernel, LinearKernel, PolynomialKernel>;

void validate_kernel(const KernelSpec& kernel);  // throws std::invalid_argument
double kernel_eval(const KernelSpec& kernel, std::span<const double> a,
                   std::span<const double> b);  // throws DimensionMismatch

struct SvmTrainOptions {
  double tolerance = 1e-3;  // stop when the worst KKT violation is below this
  std::uint64_t max_pair_updates = 10'000'000;
};

// Precomputed kernel matrix over a point set; the CV drivers solve many
// subproblems against one Gram.
class GramMatrix {
 public:
  GramMatrix() = default;
  GramMatrix(const std::vector<std::vector<double>>& points, const KernelSpec& kernel);

  std::size_t size() const { return n_; }
  double at(std::size_t i, std::size_t j) const { return k_[i * n_ + j]; }

 private:
  std::size_t n_ = 0;
  std::vector<double> k_;
};

struct DualSolution {
  std::vector<double> alpha;  // one per active point, in [0, c]
  double bias = 0.0;
  std::uint64_t pair_updates = 0;
};

// Maximal-violating-pair coordinate ascent on the C-SVC dual, restricted to
// the Gram rows/columns named by `active`. labels[i] in {-1,+1} corresponds
// to active[i]. Throws SingleClass / SolverNonConvergence.
DualSolution solve_csvc_dual(const GramMatrix& gram, std::span<const std::size_t> active,
                             std::span<const int> labels, double c,
                             const SvmTrainOptions& opts = {});

// Decision value of Gram point `q` under a dual solution on `active`.
double decision_from_gram(const GramMatrix& gram, std::span<const std::size_t> active,
                          std::span<const int> labels, const DualSolution& sol, std::size_t q);

struct SvmModel {
  KernelSpec kernel = RbfKernel{};
  double c = 1.0;
  int n_features = 0;
  std::vector<std::vector<double>> support_points;
  std::vector<double> dual_coeffs;  // alpha_i * y_i for each support point
  double bias = 0.0;
  std::size_t n_train = 0;

  // Optional provenance when trained through the duration pipeline.
  std::optional<IndicatorVector> tasks;
  std::optional<ScalerParams> scaler;
};

struct Prediction {
  int label = 0;  // -1 / +1; decision value 0 resolves to +1
  double decision_value = 0.0;
};

SvmModel train_csvc(const std::vector<std::vector<double>>& points,
                    const std::vector<int>& labels, double c, const KernelSpec& kernel,
                    const SvmTrainOptions& opts = {});

Prediction predict(const SvmModel& model, std::span<const double> x);

// Dual objective 1/2 a'Qa - e'a of a solution; used for optimality checks.
double dual_objective(const GramMatrix& gram, std::span<const std::size_t> active,
                      std::span<const int> labels, std::span<const double> alpha);

std::string svm_model_json(const SvmModel& model);
SvmModel svm_model_from_json(const std::string& text);

}  // namespace rtc
