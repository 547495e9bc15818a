#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lsb/fitting.hpp"

namespace lsb {

/// NIC = L_T(beta_hat) + b/T (the objective is already normalized by T).
double nic(double nll, int b_total, int T);

struct NicCandidate {
    std::string label;
    LsbModelSpec tmpl;
};

struct NicEntry {
    std::string label;
    int b_total = 0;
    bool converged = false;
    double nll = std::numeric_limits<double>::quiet_NaN();
    double nic = std::numeric_limits<double>::quiet_NaN();
    double seconds = 0.0;
    std::optional<FitResult> fit;
};

struct NicTable {
    std::vector<NicEntry> entries;  // candidate order preserved
    int winner = -1;                // converged entry with the smallest NIC
};

/// Fit every candidate (independently, in parallel) and rank by NIC.
/// A diverging candidate is recorded as non-converged and cannot abort the
/// sweep; throws SelectionError when no candidate converged.
NicTable grid_search(const Eigen::VectorXd& x, const std::vector<NicCandidate>& grid,
                     const FitConfig& cfg, int threads = 0);

enum class WindowStat { Acf, Pacf, Periodogram };

struct WindowedRow {
    double midpoint_u = 0.0;  // segment midpoint / T
    int segment_start = 0;    // 1-based
    Eigen::VectorXd key;      // lags, or frequencies in radians
    Eigen::VectorXd value;
};

/// Per-segment sample statistics assigned to segment midpoints. With
/// window = T this reproduces the classical full-sample statistic.
std::vector<WindowedRow> windowed_stats(const Eigen::VectorXd& x, int window, int step,
                                        WindowStat kind, int max_lag, bool taper = false);

}  // namespace lsb
