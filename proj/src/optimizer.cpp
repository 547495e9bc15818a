#include "lsb/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lsb {

namespace {

constexpr double kTwoPi = 6.283185307179586;

std::uint64_t splitmix_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double uniform01(std::uint64_t& state) {
    return ((splitmix_next(state) >> 11) + 0.5) * 0x1.0p-53;
}

struct LineSearchResult {
    double alpha = 0.0;
    double value = 0.0;
    bool ok = false;
};

/// Strong-Wolfe line search (bracket + zoom). The directional derivative
/// along p is estimated with a two-point difference, which costs two
/// objective calls instead of a full gradient.
class LineSearch {
  public:
    LineSearch(const Objective& f, const Eigen::VectorXd& x, const Eigen::VectorXd& p,
               double f0, double d0, double c1, double c2)
        : f_(f), x_(x), p_(p), f0_(f0), d0_(d0), c1_(c1), c2_(c2) {}

    LineSearchResult run(double alpha_init) {
        double alpha_prev = 0.0, f_prev = f0_;
        double alpha = alpha_init;
        for (int i = 0; i < 25; ++i) {
            const double fa = eval(alpha);
            if (!std::isfinite(fa)) {
                // Too far into an invalid region; pull back toward the
                // last good point.
                alpha = 0.5 * (alpha_prev + alpha);
                continue;
            }
            if (fa > f0_ + c1_ * alpha * d0_ || (i > 0 && fa >= f_prev)) {
                return zoom(alpha_prev, f_prev, alpha, fa);
            }
            const double da = slope(alpha);
            if (std::abs(da) <= -c2_ * d0_) {
                return {alpha, fa, true};
            }
            if (da >= 0.0) {
                return zoom(alpha, fa, alpha_prev, f_prev);
            }
            alpha_prev = alpha;
            f_prev = fa;
            alpha = std::min(2.0 * alpha, 1e4);
        }
        return {};
    }

  private:
    double eval(double a) { return f_(x_ + a * p_); }

    double slope(double a) {
        const double h = 1e-7 * (1.0 + std::abs(a));
        const double fp = eval(a + h);
        const double fm = eval(a - h);
        if (!std::isfinite(fp) || !std::isfinite(fm)) {
            return std::numeric_limits<double>::quiet_NaN();
        }
        return (fp - fm) / (2.0 * h);
    }

    LineSearchResult zoom(double lo, double flo, double hi, double fhi) {
        for (int i = 0; i < 30; ++i) {
            const double alpha = 0.5 * (lo + hi);
            const double fa = eval(alpha);
            if (!std::isfinite(fa) || fa > f0_ + c1_ * alpha * d0_ || fa >= flo) {
                hi = alpha;
                fhi = fa;
            } else {
                const double da = slope(alpha);
                if (std::isfinite(da) && std::abs(da) <= -c2_ * d0_) {
                    return {alpha, fa, true};
                }
                if (std::isfinite(da) && da * (hi - lo) >= 0.0) {
                    hi = lo;
                    fhi = flo;
                }
                lo = alpha;
                flo = fa;
            }
            if (std::abs(hi - lo) < 1e-14 * (1.0 + std::abs(lo))) break;
        }
        // Accept a plain sufficient-decrease point when the curvature
        // condition is unattainable at this resolution.
        if (std::isfinite(flo) && flo < f0_ && lo > 0.0) return {lo, flo, true};
        return {};
    }

    const Objective& f_;
    const Eigen::VectorXd& x_;
    const Eigen::VectorXd& p_;
    double f0_, d0_, c1_, c2_;
};

OptimResult bfgs_single_run(const Objective& f, Eigen::VectorXd x, double fx,
                            const OptimConfig& cfg) {
    const int n = static_cast<int>(x.size());
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd g = central_gradient(f, x, cfg.grad_step);

    OptimResult res;
    res.beta = x;
    res.value = fx;
    res.grad_norm = g.cwiseAbs().maxCoeff();
    if (cfg.keep_trace) res.trace.push_back(fx);

    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        res.iterations = iter;
        if (g.cwiseAbs().maxCoeff() <= cfg.grad_tol) {
            res.converged = true;
            break;
        }
        Eigen::VectorXd p = -(H * g);
        double d0 = p.dot(g);
        if (!(d0 < 0.0)) {
            H.setIdentity();
            p = -g;
            d0 = p.dot(g);
            if (!(d0 < 0.0)) break;  // zero gradient within rounding
        }
        LineSearch ls(f, x, p, fx, d0, cfg.wolfe_c1, cfg.wolfe_c2);
        LineSearchResult step = ls.run(1.0);
        if (!step.ok) {
            // Retry once as steepest descent with a conservative scale.
            H.setIdentity();
            p = -g;
            d0 = p.dot(g);
            LineSearch ls2(f, x, p, fx, d0, cfg.wolfe_c1, cfg.wolfe_c2);
            step = ls2.run(1.0 / std::max(1.0, g.norm()));
            if (!step.ok) break;
        }

        const Eigen::VectorXd s = step.alpha * p;
        const Eigen::VectorXd x_new = x + s;
        const Eigen::VectorXd g_new = central_gradient(f, x_new, cfg.grad_step);
        const Eigen::VectorXd y = g_new - g;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
            H = (I - rho * s * y.transpose()) * H * (I - rho * y * s.transpose()) +
                rho * s * s.transpose();
        }
        x = x_new;
        fx = step.value;
        g = g_new;
        res.beta = x;
        res.value = fx;
        res.grad_norm = g.cwiseAbs().maxCoeff();
        if (cfg.keep_trace) res.trace.push_back(fx);
        res.iterations = iter + 1;
        if (s.norm() <= cfg.step_tol * (1.0 + x.norm())) {
            res.converged = res.grad_norm <= cfg.grad_tol;
            break;
        }
    }
    if (!res.converged) res.converged = res.grad_norm <= cfg.grad_tol;
    return res;
}

}  // namespace

Eigen::VectorXd central_gradient(const Objective& f, const Eigen::VectorXd& x, double rel_step) {
    const int n = static_cast<int>(x.size());
    Eigen::VectorXd g(n);
    Eigen::VectorXd xp = x;
    for (int i = 0; i < n; ++i) {
        double h = rel_step * std::max(1.0, std::abs(x(i)));
        double fp = 0.0, fm = 0.0;
        for (int attempt = 0; attempt < 4; ++attempt) {
            xp(i) = x(i) + h;
            fp = f(xp);
            xp(i) = x(i) - h;
            fm = f(xp);
            if (std::isfinite(fp) && std::isfinite(fm)) break;
            h *= 0.1;  // boundary of the finite region; tighten the stencil
        }
        xp(i) = x(i);
        g(i) = std::isfinite(fp) && std::isfinite(fm) ? (fp - fm) / (2.0 * h) : 0.0;
    }
    return g;
}

OptimResult minimize(const Objective& f, const Eigen::VectorXd& beta0, const OptimConfig& cfg) {
    const double f0 = f(beta0);
    if (!std::isfinite(f0)) {
        throw Error("objective is not finite at the starting point");
    }
    OptimResult best = bfgs_single_run(f, beta0, f0, cfg);
    std::uint64_t rng = cfg.seed ^ 0x5bf03635ab5cf035ULL;
    for (int r = 0; r < cfg.restarts && !best.converged; ++r) {
        Eigen::VectorXd jittered = best.beta;
        for (int i = 0; i < jittered.size(); ++i) {
            jittered(i) += (uniform01(rng) - 0.5) * 2e-3 * (1.0 + std::abs(jittered(i)));
        }
        const double fj = f(jittered);
        if (!std::isfinite(fj)) continue;
        OptimResult retry = bfgs_single_run(f, jittered, fj, cfg);
        retry.iterations += best.iterations;
        if (retry.value < best.value || (retry.converged && !best.converged &&
                                         retry.value <= best.value + 1e-10)) {
            best = retry;
        }
    }
    return best;
}

Eigen::VectorXd default_start(const LsbModelSpec& model, const Eigen::VectorXd& x) {
    const int T = static_cast<int>(x.size());
    const int p = model.order();

    const double mean = x.mean();
    double var = 0.0;
    for (int t = 0; t < T; ++t) var += (x(t) - mean) * (x(t) - mean);
    var = std::max(var / T, 1e-12);
    const double log_sd = 0.5 * std::log(var);

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(model.coefficient_count());
    auto set_intercept = [&](int j, double value) {
        beta(model.curve_slice(j).first) = value;
    };

    switch (model.family()) {
        case Family::WhiteNoise:
            set_intercept(0, log_sd);
            break;
        case Family::Ar: {
            // Sample partial autocorrelations by Durbin-Levinson on the
            // biased sample acvf.
            Eigen::VectorXd gamma = Eigen::VectorXd::Zero(p + 1);
            for (int h = 0; h <= p; ++h) {
                double s = 0.0;
                for (int t = h; t < T; ++t) s += (x(t) - mean) * (x(t - h) - mean);
                gamma(h) = s / T;
            }
            const LinkFunction link(LinkKind::ShiftedLogitPacf);
            double v = gamma(0);
            Eigen::VectorXd phi = Eigen::VectorXd::Zero(p);
            Eigen::VectorXd prev(p);
            for (int t = 1; t <= p; ++t) {
                double accv = gamma(t);
                for (int j = 1; j < t; ++j) accv -= phi(j - 1) * gamma(t - j);
                double pacf_t = v > 0.0 ? accv / v : 0.0;
                pacf_t = std::clamp(pacf_t, -0.98, 0.98);
                prev.head(t - 1) = phi.head(t - 1);
                for (int k = 1; k < t; ++k) phi(k - 1) = prev(k - 1) - pacf_t * prev(t - k - 1);
                phi(t - 1) = pacf_t;
                v *= 1.0 - pacf_t * pacf_t;
                set_intercept(t - 1, link.forward(pacf_t));
            }
            set_intercept(p, log_sd);
            break;
        }
        case Family::Exp:
            set_intercept(p, log_sd);
            break;
        case Family::Fd: {
            // Log-periodogram regression for the long-memory exponent.
            const int m = std::max(4, static_cast<int>(std::floor(std::sqrt(T))));
            double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
            int used = 0;
            for (int k = 1; k <= m && k < T / 2; ++k) {
                const double lam = kTwoPi * k / T;
                double re = 0.0, im = 0.0;
                for (int t = 0; t < T; ++t) {
                    re += (x(t) - mean) * std::cos(lam * t);
                    im -= (x(t) - mean) * std::sin(lam * t);
                }
                const double I = (re * re + im * im) / (kTwoPi * T);
                if (I <= 0.0) continue;
                const double reg_x = std::log(2.0 * std::sin(lam / 2.0));
                const double reg_y = std::log(I);
                sx += reg_x;
                sy += reg_y;
                sxx += reg_x * reg_x;
                sxy += reg_x * reg_y;
                ++used;
            }
            double delta_hat = 0.0;
            if (used >= 2) {
                const double slope = (used * sxy - sx * sy) / (used * sxx - sx * sx);
                delta_hat = std::clamp(-slope / 2.0, -0.45, 0.45);
            }
            set_intercept(0, LinkFunction(LinkKind::ShiftedLogitFd).forward(delta_hat));
            set_intercept(1, log_sd);
            break;
        }
    }
    return beta;
}

}  // namespace lsb
