#include "lsb/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "lsb/stationarity.hpp"

namespace lsb {

namespace {

std::uint64_t mix_tag(std::uint64_t seed, std::uint64_t tag) {
    return derive_seed(seed ^ tag, 0);
}

struct BootstrapCi {
    double lo = 0.0, hi = 0.0;
};

/// Percentile bootstrap over replication-level values.
BootstrapCi bootstrap_ci(const std::function<double(const std::vector<int>&)>& stat, int n,
                         int resamples, std::uint64_t seed) {
    std::vector<double> stats(resamples);
    std::vector<int> idx(n);
    for (int b = 0; b < resamples; ++b) {
        const GaussianStream stream(derive_seed(seed, b));
        for (int i = 0; i < n; ++i) {
            idx[i] = std::min(n - 1, static_cast<int>(stream.uniform(i) * n));
        }
        stats[b] = stat(idx);
    }
    std::sort(stats.begin(), stats.end());
    auto pick = [&](double q) {
        const int i = std::clamp(static_cast<int>(q * (resamples - 1)), 0, resamples - 1);
        return stats[i];
    };
    return {pick(0.025), pick(0.975)};
}

McSummary summarize(const Eigen::MatrixXd& estimates, const Eigen::VectorXd& beta0, int T,
                    LikelihoodKind estimator, int failures, int resamples, std::uint64_t seed) {
    McSummary s;
    s.sample_size = T;
    s.estimator = estimator;
    s.used = static_cast<int>(estimates.rows());
    s.failures = failures;
    s.estimates = estimates;
    const int b = static_cast<int>(beta0.size());
    const double rootT = std::sqrt(static_cast<double>(T));
    for (int j = 0; j < b; ++j) {
        const Eigen::VectorXd err = estimates.col(j).array() - beta0(j);
        CoefficientSummary c;
        c.bias = err.mean();
        c.rmse = std::sqrt(err.squaredNorm() / err.size());
        c.rootT_rmse = rootT * c.rmse;
        const auto bias_stat = [&err](const std::vector<int>& idx) {
            double acc = 0.0;
            for (int i : idx) acc += err(i);
            return acc / idx.size();
        };
        const auto rmse_stat = [&err](const std::vector<int>& idx) {
            double acc = 0.0;
            for (int i : idx) acc += err(i) * err(i);
            return std::sqrt(acc / idx.size());
        };
        const BootstrapCi bias_ci =
            bootstrap_ci(bias_stat, s.used, resamples, derive_seed(seed, 2 * j));
        const BootstrapCi rmse_ci =
            bootstrap_ci(rmse_stat, s.used, resamples, derive_seed(seed, 2 * j + 1));
        c.bias_lo = bias_ci.lo;
        c.bias_hi = bias_ci.hi;
        c.rmse_lo = rmse_ci.lo;
        c.rmse_hi = rmse_ci.hi;
        c.rootT_lo = rootT * rmse_ci.lo;
        c.rootT_hi = rootT * rmse_ci.hi;
        s.coefficients.push_back(c);
    }
    return s;
}

Eigen::MatrixXd collect(const std::vector<Eigen::VectorXd>& rows, const std::vector<char>& ok,
                        int b) {
    int used = 0;
    for (char f : ok) used += f ? 1 : 0;
    Eigen::MatrixXd m(used, b);
    int r = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (ok[i]) m.row(r++) = rows[i].transpose();
    }
    return m;
}

}  // namespace

int default_thread_count() {
    if (const char* env = std::getenv("LSB_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    if (threads <= 0) threads = default_thread_count();
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) break;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

FitConfig mc_default_fit() {
    FitConfig cfg;
    cfg.optim.grad_tol = 1e-6;
    return cfg;
}

std::vector<McSummary> run_experiment(const ExperimentSpec& spec) {
    if (spec.replications < 2) throw SpecError("need at least two replications");
    if (spec.sample_sizes.empty()) throw SpecError("no sample sizes given");
    if (!spec.run_exact && !spec.run_whittle) throw SpecError("no estimator selected");

    const Eigen::VectorXd beta0 = spec.generator.pack();
    const int b = static_cast<int>(beta0.size());
    std::vector<McSummary> out;

    for (const int T : spec.sample_sizes) {
        const Simulator sim(spec.generator, T, spec.sim_path);
        const int R = spec.replications;
        std::vector<Eigen::VectorXd> exact_rows(R), whittle_rows(R);
        std::vector<char> exact_ok(R, 0), whittle_ok(R, 0);

        parallel_for(R, spec.threads, [&](int r) {
            const Eigen::VectorXd x = sim.draw(spec.seed, r);
            if (spec.run_exact) {
                FitConfig cfg = spec.fit;
                cfg.likelihood = LikelihoodKind::Exact;
                cfg.optim.seed = derive_seed(mix_tag(spec.seed, 0xE0ULL), r);
                try {
                    const FitResult fit = fit_model(spec.generator, x, cfg);
                    if (fit.optim.converged) {
                        exact_rows[r] = fit.model.pack();
                        exact_ok[r] = 1;
                    }
                } catch (const Error&) {
                }
            }
            if (spec.run_whittle) {
                FitConfig cfg = spec.fit;
                cfg.likelihood = LikelihoodKind::Whittle;
                cfg.optim.seed = derive_seed(mix_tag(spec.seed, 0xA0ULL), r);
                try {
                    const FitResult fit = fit_model(spec.generator, x, cfg);
                    if (fit.optim.converged) {
                        whittle_rows[r] = fit.model.pack();
                        whittle_ok[r] = 1;
                    }
                } catch (const Error&) {
                }
            }
        });

        if (spec.run_exact) {
            const Eigen::MatrixXd m = collect(exact_rows, exact_ok, b);
            out.push_back(summarize(m, beta0, T, LikelihoodKind::Exact,
                                    R - static_cast<int>(m.rows()), spec.bootstrap,
                                    mix_tag(spec.seed, 0xB001ULL)));
        }
        if (spec.run_whittle) {
            const Eigen::MatrixXd m = collect(whittle_rows, whittle_ok, b);
            out.push_back(summarize(m, beta0, T, LikelihoodKind::Whittle,
                                    R - static_cast<int>(m.rows()), spec.bootstrap,
                                    mix_tag(spec.seed, 0xB002ULL)));
        }
    }
    return out;
}

std::vector<TuneCell> tune_blocks(const ExperimentSpec& spec,
                                  const std::vector<double>& exponents,
                                  const std::vector<double>& fractions) {
    if (exponents.empty() || fractions.empty()) throw SpecError("empty tuning grid");
    const int T = spec.sample_sizes.at(0);
    const int R = spec.replications;
    const Eigen::VectorXd beta0 = spec.generator.pack();
    const int b = static_cast<int>(beta0.size());

    // One shared set of draws across every (N, S) cell.
    const Simulator sim(spec.generator, T, spec.sim_path);
    std::vector<Eigen::VectorXd> draws(R);
    parallel_for(R, spec.threads, [&](int r) { draws[r] = sim.draw(spec.seed, r); });

    std::vector<TuneCell> cells;
    for (const double a : exponents) {
        for (const double s : fractions) {
            TuneCell cell;
            cell.log_ratio = a;
            cell.step_fraction = s;
            const double n0 = std::pow(static_cast<double>(T), a);
            cell.block_length = 2 * std::max(1, static_cast<int>(std::floor(n0 / 2.0 + 0.5)));
            cell.step = std::max(1, static_cast<int>(std::floor(s * cell.block_length + 0.5)));

            WhittleConfig wcfg;
            wcfg.block_length = cell.block_length;
            wcfg.step = cell.step;
            wcfg.taper = TaperKind::CosineBell;
            try {
                wcfg.check(T);
            } catch (const Error&) {
                cell.feasible = false;
                cells.push_back(cell);
                continue;
            }
            cell.feasible = true;

            std::vector<Eigen::VectorXd> rows(R);
            std::vector<char> ok(R, 0);
            parallel_for(R, spec.threads, [&](int r) {
                FitConfig cfg = spec.fit;
                cfg.likelihood = LikelihoodKind::Whittle;
                cfg.whittle = wcfg;
                cfg.optim.seed = derive_seed(mix_tag(spec.seed, 0x75ULL), r);
                try {
                    const FitResult fit = fit_model(spec.generator, draws[r], cfg);
                    if (fit.optim.converged) {
                        rows[r] = fit.model.pack();
                        ok[r] = 1;
                    }
                } catch (const Error&) {
                }
            });
            const Eigen::MatrixXd m = collect(rows, ok, b);
            if (m.rows() == 0) {
                cell.feasible = false;
            } else {
                double acc = 0.0;
                for (int j = 0; j < b; ++j) {
                    const Eigen::VectorXd err = m.col(j).array() - beta0(j);
                    acc += std::sqrt(err.squaredNorm() / err.size());
                }
                cell.mean_rmse = acc / b;
            }
            cells.push_back(cell);
        }
    }
    return cells;
}

LsbModelSpec lsbar1_design(double beta10, double beta11, double beta20) {
    Eigen::VectorXd bp(2), bs(1);
    bp << beta10, beta11;
    bs << beta20 / 2.0;  // log sigma^2 = beta20  ->  log sigma = beta20 / 2
    std::vector<ParameterCurveSpec> pacf;
    pacf.emplace_back(BasisSet::raw_polynomial(2), LinkFunction(LinkKind::ShiftedLogitPacf), bp);
    return LsbModelSpec::ar(std::move(pacf),
                            ParameterCurveSpec(BasisSet::constant(),
                                               LinkFunction(LinkKind::Log), bs));
}

std::vector<SizePowerRow> size_power_study(const SizePowerDesign& design,
                                           const std::vector<int>& sample_sizes,
                                           const std::vector<double>& beta11_list,
                                           int replications, const FitConfig& fit,
                                           std::uint64_t seed, int threads, double alpha) {
    std::vector<SizePowerRow> rows;
    for (const int T : sample_sizes) {
        for (const double beta11 : beta11_list) {
            const LsbModelSpec truth = lsbar1_design(design.beta10, beta11, design.beta20);
            const Simulator sim(truth, T, SimPath::RecursiveAr);
            std::vector<char> rejected(replications, 0), usable(replications, 0);
            parallel_for(replications, threads, [&](int r) {
                const Eigen::VectorXd x = sim.draw(seed, r);
                FitConfig cfg = fit;
                cfg.optim.seed = derive_seed(mix_tag(seed, 0x5EULL), r);
                try {
                    const TestResult tr = test_stationarity(truth, x, cfg);
                    if (tr.converged) {
                        usable[r] = 1;
                        rejected[r] = tr.p_value < alpha ? 1 : 0;
                    }
                } catch (const Error&) {
                }
            });
            SizePowerRow row;
            row.sample_size = T;
            row.beta11 = beta11;
            for (int r = 0; r < replications; ++r) {
                row.used += usable[r];
                row.rejections += rejected[r];
            }
            row.failures = replications - row.used;
            row.rate = row.used > 0 ? static_cast<double>(row.rejections) / row.used : 0.0;
            row.se = row.used > 0 ? std::sqrt(row.rate * (1.0 - row.rate) / row.used) : 0.0;
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace lsb
