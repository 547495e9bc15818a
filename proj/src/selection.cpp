#include "lsb/selection.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "lsb/likelihood.hpp"
#include "lsb/montecarlo.hpp"

namespace lsb {

namespace {
constexpr double kTwoPi = 6.283185307179586;
}

double nic(double nll, int b_total, int T) {
    return nll + static_cast<double>(b_total) / T;
}

NicTable grid_search(const Eigen::VectorXd& x, const std::vector<NicCandidate>& grid,
                     const FitConfig& cfg, int threads) {
    if (grid.empty()) throw SelectionError("empty candidate grid");
    const int T = static_cast<int>(x.size());
    NicTable table;
    table.entries.resize(grid.size());

    parallel_for(static_cast<int>(grid.size()), threads, [&](int i) {
        NicEntry entry;
        entry.label = grid[i].label;
        entry.b_total = grid[i].tmpl.coefficient_count();
        const auto begin = std::chrono::steady_clock::now();
        try {
            FitConfig c = cfg;
            // Deterministic per-candidate jitter stream, independent of the
            // execution order.
            c.optim.seed = cfg.optim.seed ^ (0x9E3779B97F4A7C15ULL * (i + 1));
            FitResult fit = fit_model(grid[i].tmpl, x, c);
            entry.converged = fit.optim.converged;
            entry.nll = fit.nll;
            entry.nic = nic(fit.nll, entry.b_total, T);
            entry.fit = std::move(fit);
        } catch (const Error&) {
            entry.converged = false;
        }
        entry.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
        table.entries[i] = std::move(entry);
    });

    for (std::size_t i = 0; i < table.entries.size(); ++i) {
        const NicEntry& e = table.entries[i];
        if (!e.converged || !std::isfinite(e.nic)) continue;
        if (table.winner < 0 || e.nic < table.entries[table.winner].nic) {
            table.winner = static_cast<int>(i);
        }
    }
    if (table.winner < 0) throw SelectionError("no candidate converged");
    return table;
}

std::vector<WindowedRow> windowed_stats(const Eigen::VectorXd& x, int window, int step,
                                        WindowStat kind, int max_lag, bool taper) {
    const int T = static_cast<int>(x.size());
    if (window < 2 || window > T) throw SpecError("window must satisfy 2 <= window <= T");
    if (step < 1) throw SpecError("step must be positive");
    if (kind != WindowStat::Periodogram && (max_lag < 1 || max_lag >= window)) {
        throw SpecError("max_lag must satisfy 1 <= max_lag < window");
    }

    std::vector<WindowedRow> rows;
    for (int start = 0; start + window <= T; start += step) {
        const Eigen::VectorXd seg = x.segment(start, window);
        const double mean = seg.mean();
        WindowedRow row;
        row.segment_start = start + 1;
        row.midpoint_u = (start + window / 2.0) / T;

        if (kind == WindowStat::Periodogram) {
            const int nfreq = window / 2 + 1;
            Eigen::VectorXd w;
            if (taper) {
                w = taper_weights(TaperKind::CosineBell, window);
            } else {
                w = Eigen::VectorXd::Constant(window, 1.0 / std::sqrt(double(window)));
            }
            row.key.resize(nfreq);
            row.value.resize(nfreq);
            for (int k = 0; k < nfreq; ++k) {
                const double lam = kTwoPi * k / window;
                double re = 0.0, im = 0.0;
                for (int s = 0; s < window; ++s) {
                    re += w(s) * (seg(s) - mean) * std::cos(lam * s);
                    im -= w(s) * (seg(s) - mean) * std::sin(lam * s);
                }
                row.key(k) = lam;
                row.value(k) = (re * re + im * im) / kTwoPi;
            }
        } else {
            Eigen::VectorXd gamma(max_lag + 1);
            for (int h = 0; h <= max_lag; ++h) {
                double s = 0.0;
                for (int t = h; t < window; ++t) s += (seg(t) - mean) * (seg(t - h) - mean);
                gamma(h) = s / window;
            }
            row.key.resize(max_lag);
            row.value.resize(max_lag);
            if (kind == WindowStat::Acf) {
                for (int h = 1; h <= max_lag; ++h) {
                    row.key(h - 1) = h;
                    row.value(h - 1) = gamma(0) > 0.0 ? gamma(h) / gamma(0) : 0.0;
                }
            } else {  // sample pacf by Durbin-Levinson on the sample acvf
                double v = gamma(0);
                Eigen::VectorXd phi = Eigen::VectorXd::Zero(max_lag);
                Eigen::VectorXd prev(max_lag);
                for (int t = 1; t <= max_lag; ++t) {
                    double acc = gamma(t);
                    for (int j = 1; j < t; ++j) acc -= phi(j - 1) * gamma(t - j);
                    const double pacf_t = v > 0.0 ? acc / v : 0.0;
                    prev.head(t - 1) = phi.head(t - 1);
                    for (int k = 1; k < t; ++k) {
                        phi(k - 1) = prev(k - 1) - pacf_t * prev(t - k - 1);
                    }
                    phi(t - 1) = pacf_t;
                    v *= 1.0 - pacf_t * pacf_t;
                    row.key(t - 1) = t;
                    row.value(t - 1) = pacf_t;
                }
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace lsb
