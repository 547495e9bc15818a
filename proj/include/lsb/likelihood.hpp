#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "lsb/levinson.hpp"
#include "lsb/models.hpp"

namespace lsb {

struct ExactLikConfig {
    /// Predictor order cap d for non-Markov families (Fd, Exp); defaults to
    /// default_truncation(T). Ignored for WhiteNoise/Ar, which are Markov.
    std::optional<int> truncation;
    /// Use the O(T^3) innovations path on the dense model covariance.
    bool dense_oracle = false;
    int dense_limit = 4096;
};

/// d = min(T, ceil(10 T^0.4)).
int default_truncation(int T);

/// Normalized negative Gaussian log-likelihood
///   (1/2) log 2pi + (1/2T) sum_t [log s2_t + e_t^2 / s2_t]
/// with one-step predictors from the time-varying Levinson-Durbin
/// recursion (sequential up to the order cap, local at u = t/T beyond it).
double exact_nll(const LsbModelSpec& model, const Eigen::VectorXd& x,
                 const ExactLikConfig& cfg = {});

enum class TaperKind { CosineBell, Flat };

struct WhittleConfig {
    int block_length = 0;  // N, even
    int step = 0;          // S
    TaperKind taper = TaperKind::CosineBell;

    /// M = floor(1 + (T - N)/S).
    int block_count(int T) const;
    void check(int T) const;
};

/// N = nearest even integer to T^0.6, S = max(1, round(0.35 N)),
/// cosine-bell taper. Requires T >= 64.
WhittleConfig default_blocks(int T);

/// Discrete taper weights tau(s/N), rescaled so sum of squares is 1.
Eigen::VectorXd taper_weights(TaperKind kind, int N);

/// Local tapered periodogram of the length-N segment centered at [uT],
/// evaluated at the block Fourier frequencies 2 pi k / N, k = 0..N-1.
Eigen::VectorXd local_periodogram(const Eigen::VectorXd& x, double u, int N,
                                  const Eigen::VectorXd& taper);

/// Periodograms and block layout are data-only; precompute them once and
/// evaluate the Whittle objective for many coefficient vectors.
class WhittleEvaluator {
  public:
    WhittleEvaluator(const Eigen::VectorXd& x, WhittleConfig cfg);

    double nll(const LsbModelSpec& model) const;
    int block_count() const { return static_cast<int>(midpoints_.size()); }
    const std::vector<double>& midpoints() const { return midpoints_; }
    const WhittleConfig& config() const { return cfg_; }

  private:
    WhittleConfig cfg_;
    int sample_size_ = 0;
    std::vector<double> midpoints_;                // u_j
    std::vector<Eigen::VectorXd> periodograms_;    // I_N(u_j, .)
};

/// Block Whittle likelihood, Fourier-grid discretization of
///   (1/4pi)(1/M) sum_j int [log 4pi^2 f(u_j,l) + I_N(u_j,l)/f(u_j,l)] dl.
double whittle_nll(const LsbModelSpec& model, const Eigen::VectorXd& x,
                   const WhittleConfig& cfg);

}  // namespace lsb
