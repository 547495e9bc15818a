#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "lsb/models.hpp"

namespace lsb {

/// Local covariance source: (u, h) -> c(u, h).
using CovFn = std::function<double(double, int)>;

/// State of the time-varying Levinson-Durbin recursion after the order-t
/// update: coeffs holds phi_{t,1..t} and pred_var the variance of the
/// innovation of the next observation.
struct PredictionState {
    int order = 0;
    Eigen::VectorXd coeffs;
    double pred_var = 0.0;
    std::vector<double> var_history;  // pred_var after order 0, 1, ...
};

/// Order-0 state: no coefficients, pred_var = c(1/T, 0).
PredictionState tv_ld_initial(const CovFn& cov, int T);

/// One order-t update with rescaled time frozen at u = t/T:
///   phi_{t,t} = [c(u,t) - sum_{j<t} phi_{t-1,j} c(u,t-j)] / pred_var
///   phi_{t,k} = phi_{t-1,k} - phi_{t,t} phi_{t-1,t-k}
///   pred_var <- pred_var (1 - phi_{t,t}^2)
/// Throws NotPositiveDefiniteError when pred_var would become nonpositive.
PredictionState tv_ld_step(const PredictionState& state, const CovFn& cov, int t, int T);

struct LocalPredictor {
    Eigen::VectorXd coeffs;  // may be shorter than the requested order when
                             // trailing coefficients are exactly zero (Ar)
    double pred_var = 0.0;
};

/// Classical Durbin-Levinson on one acvf row gamma(0..order).
LocalPredictor durbin_levinson(const Eigen::VectorXd& gamma, int order);

/// Stationary best-linear-predictor of the model frozen at u, at the given
/// order. Family shortcuts: Ar at order >= p returns the stepped-up
/// coefficients with pred_var sigma^2(u); Fd uses the closed-form
/// fractional-noise predictor.
LocalPredictor local_predictor(const LsbModelSpec& model, double u, int order);

struct Innovations {
    Eigen::VectorXd residuals;  // e_t = x_t - E[x_t | x_1..x_{t-1}]
    Eigen::VectorXd variances;  // v_t
};

/// Exact innovations from the Cholesky factor of a dense covariance.
Innovations innovations_exact(const Eigen::MatrixXd& sigma, const Eigen::VectorXd& x);

/// log det of an SPD matrix via Cholesky (throws NotPositiveDefiniteError).
double spd_log_det(const Eigen::MatrixXd& sigma);

/// The model covariance matrix with entries
/// c0(k,l) = int A(k/T, lambda) A(l/T, -lambda) e^{i lambda (k-l)} dlambda.
/// WhiteNoise is diagonal, Ar uses the exact moving-average cross series,
/// Exp/Fd a 4096-point midpoint frequency grid.
Eigen::MatrixXd build_dense_cov(const LsbModelSpec& model, int T, int dense_limit = 4096);

}  // namespace lsb
