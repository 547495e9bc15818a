#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "lsb/models.hpp"

namespace lsb {

using Objective = std::function<double(const Eigen::VectorXd&)>;

struct OptimConfig {
    double grad_step = 1e-6;  // relative central-difference step
    double grad_tol = 1e-8;   // on max |gradient|
    double step_tol = 1e-10;
    int max_iter = 500;
    double wolfe_c1 = 1e-4;
    double wolfe_c2 = 0.9;
    int restarts = 3;         // jittered restarts on non-convergence
    std::uint64_t seed = 0;   // drives the restart jitter only
    bool keep_trace = false;
};

struct OptimResult {
    Eigen::VectorXd beta;
    double value = std::numeric_limits<double>::infinity();
    double grad_norm = std::numeric_limits<double>::infinity();  // max |g|
    int iterations = 0;
    bool converged = false;  // true only when grad_norm <= grad_tol
    std::vector<double> trace;
};

/// Central-difference gradient with per-coordinate step
/// h_i = rel_step * max(1, |x_i|).
Eigen::VectorXd central_gradient(const Objective& f, const Eigen::VectorXd& x, double rel_step);

/// BFGS with inverse-Hessian updates and a strong-Wolfe line search.
/// Returns the best point found even when flagged non-converged.
/// Throws Error when the objective is not finite at beta0.
OptimResult minimize(const Objective& f, const Eigen::VectorXd& beta0,
                     const OptimConfig& cfg = {});

/// Moment-based starting point: intercepts from stationary fits of the
/// whole series (sample partial autocorrelations through the link for Ar,
/// a log-periodogram regression for the Fd exponent, log sample SD for the
/// scale), all non-constant coefficients zero.
Eigen::VectorXd default_start(const LsbModelSpec& model, const Eigen::VectorXd& x);

}  // namespace lsb
