#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "lsb/fitting.hpp"
#include "lsb/simulation.hpp"

namespace lsb {

/// LSB_THREADS environment override, else hardware concurrency.
int default_thread_count();

/// Run fn(0..n-1) across a worker pool; threads <= 0 selects the default.
/// The caller owns any cross-index state; exceptions propagate after join.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

/// Monte Carlo defaults: the replication engine relaxes the gradient
/// tolerance to 1e-6 on the normalized objective (the 1e-8 library default
/// sits at the central-difference noise floor for T >= 1000, which would
/// misclassify healthy fits as failures).
FitConfig mc_default_fit();

struct CoefficientSummary {
    double bias = 0.0;
    double rmse = 0.0;
    double rootT_rmse = 0.0;
    // Percentile bootstrap 95% intervals.
    double bias_lo = 0.0, bias_hi = 0.0;
    double rmse_lo = 0.0, rmse_hi = 0.0;
    double rootT_lo = 0.0, rootT_hi = 0.0;
};

struct McSummary {
    int sample_size = 0;
    LikelihoodKind estimator = LikelihoodKind::Exact;
    int used = 0;
    int failures = 0;  // non-converged or erroring fits, excluded above
    std::vector<CoefficientSummary> coefficients;
    Eigen::MatrixXd estimates;  // used x b, in replication order
};

struct ExperimentSpec {
    LsbModelSpec generator;  // carries the true coefficients
    bool run_exact = true;
    bool run_whittle = false;
    std::vector<int> sample_sizes;
    int replications = 200;
    int bootstrap = 1000;
    std::uint64_t seed = 1;
    FitConfig fit = mc_default_fit();
    std::optional<SimPath> sim_path;
    int threads = 0;
};

/// Simulate-fit replication study; one summary per (T, estimator), exact
/// first. Exact and Whittle estimators see the same draws.
std::vector<McSummary> run_experiment(const ExperimentSpec& spec);

struct TuneCell {
    double log_ratio = 0.0;      // log N / log T
    double step_fraction = 0.0;  // S / N
    int block_length = 0;
    int step = 0;
    bool feasible = false;
    double mean_rmse = 0.0;  // mean over coefficients of per-coefficient RMSE
};

/// Whittle block-tuning surface over N = T^a, S = s N, shared draws across
/// cells. Uses spec.sample_sizes.front() as the sample size.
std::vector<TuneCell> tune_blocks(const ExperimentSpec& spec,
                                  const std::vector<double>& exponents,
                                  const std::vector<double>& fractions);

/// Order-1 autoregressive design with logit((phi+1)/2) = beta10 + beta11 u
/// and log sigma^2 = beta20 (beta20 is on the variance scale).
LsbModelSpec lsbar1_design(double beta10, double beta11, double beta20);

struct SizePowerDesign {
    double beta10 = 0.61;
    double beta20 = 0.0;
};

struct SizePowerRow {
    int sample_size = 0;
    double beta11 = 0.0;
    int rejections = 0;
    int used = 0;
    int failures = 0;
    double rate = 0.0;
    double se = 0.0;  // binomial
};

/// Rejection rates of the stationarity test across (T, beta11) cells.
std::vector<SizePowerRow> size_power_study(const SizePowerDesign& design,
                                           const std::vector<int>& sample_sizes,
                                           const std::vector<double>& beta11_list,
                                           int replications, const FitConfig& fit,
                                           std::uint64_t seed, int threads = 0,
                                           double alpha = 0.05);

}  // namespace lsb
