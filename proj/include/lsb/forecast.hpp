#pragma once

#include <Eigen/Dense>
#include <optional>

#include "lsb/models.hpp"

namespace lsb {

struct Forecast {
    int horizon = 0;
    Eigen::VectorXd point;
    Eigen::VectorXd sd;     // non-decreasing in the horizon
    Eigen::VectorXd lower;  // level-(1-alpha) interval, centered at point
    Eigen::VectorXd upper;
};

/// h-step best-linear-predictor forecasts with the model frozen at u = 1
/// (curves carry no information beyond the observed span). Multi-step
/// predictions recurse on earlier forecasts; variances accumulate through
/// the moving-average expansion of the local predictor.
Forecast forecast(const LsbModelSpec& model, const Eigen::VectorXd& x, int h,
                  std::optional<int> lookback = {}, double level = 0.95);

}  // namespace lsb
