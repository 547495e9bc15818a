#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "lsb/models.hpp"

namespace lsb {

struct FisherInfo {
    Eigen::MatrixXd gamma;                    // b x b, symmetric PSD
    std::vector<std::pair<int, int>> blocks;  // per-curve (offset, length)
    /// Largest |entry| outside the per-curve diagonal blocks; the
    /// block-diagonal structure is verified, not assumed.
    double max_offblock = 0.0;
    int u_grid = 0;
    int lambda_grid = 0;
};

/// Fisher information (1/4pi) int int (grad log f)(grad log f)' dl du,
/// u by a 200-point trapezoid rule. The frequency integral is exact for
/// the white-noise, cepstral and long-memory families and a 1024-point
/// midpoint rule for the autoregressive one.
/// Throws RankError when the result is numerically singular.
FisherInfo fisher_info(const LsbModelSpec& model, int u_grid = 200, int lambda_grid = 1024);

/// SE_i = sqrt((Gamma^{-1})_{ii} / T), full-matrix inverse.
Eigen::VectorXd coefficient_ses(const FisherInfo& info, int T);

struct CurveBand {
    Eigen::VectorXd u;
    Eigen::VectorXd estimate;
    Eigen::VectorXd se;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
};

/// Delta-method pointwise band for curve j:
///   SE(theta_j(u)) = |h_j'(eta_j(u))| sqrt(w_j'(u) Gamma_j^{-1} w_j(u) / T)
/// with Gamma_j the j-th diagonal block; bounds are clipped to the link
/// range.
CurveBand curve_band(const LsbModelSpec& fitted, const FisherInfo& info, int j,
                     const Eigen::VectorXd& u_grid, double level, int T);

/// Standard normal quantile (delta-method bands, forecast intervals).
double normal_quantile(double p);

}  // namespace lsb
