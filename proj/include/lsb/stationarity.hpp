#pragma once

#include "lsb/fitting.hpp"

namespace lsb {

struct TestResult {
    double lambda = 0.0;   // 2T (L_restricted - L_full), clamped at 0
    int df = 0;            // b - J
    double p_value = 1.0;
    FitResult restricted;
    FitResult full;
    bool converged = false;  // both fits converged
};

/// Chi-squared survival function Q(df/2, x/2).
double chisq_sf(double x, int df);

/// Generalized likelihood-ratio test of weak stationarity: the restricted
/// fit pins every non-constant basis coefficient to zero, and its solution
/// seeds the full fit. Both fits use the same likelihood flavor.
TestResult test_stationarity(const LsbModelSpec& tmpl, const Eigen::VectorXd& x,
                             const FitConfig& cfg);

}  // namespace lsb
