#include "lsb/levinson.hpp"

#include <cmath>
#include <complex>

namespace lsb {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

/// Moving-average expansion psi of 1/phi(z) for AR coefficients a,
/// truncated once the tail is negligible at double precision.
std::vector<double> ma_expansion(const Eigen::VectorXd& a, int max_len = 16384) {
    const int p = static_cast<int>(a.size());
    std::vector<double> psi;
    psi.reserve(64);
    psi.push_back(1.0);
    if (p == 0) return psi;
    double tail = 1.0;
    for (int j = 1; j < max_len; ++j) {
        double s = 0.0;
        for (int k = 1; k <= std::min(j, p); ++k) s += a(k - 1) * psi[j - k];
        psi.push_back(s);
        tail = 0.0;
        for (int k = 0; k < std::min<int>(p, static_cast<int>(psi.size())); ++k) {
            tail += std::abs(psi[psi.size() - 1 - k]);
        }
        if (j >= p && tail < 1e-17) break;
    }
    return psi;
}

}  // namespace

PredictionState tv_ld_initial(const CovFn& cov, int T) {
    PredictionState s;
    s.order = 0;
    s.pred_var = cov(1.0 / T, 0);
    if (!(s.pred_var > 0.0)) {
        throw NotPositiveDefiniteError("initial prediction variance is not positive");
    }
    s.var_history.push_back(s.pred_var);
    return s;
}

PredictionState tv_ld_step(const PredictionState& state, const CovFn& cov, int t, int T) {
    if (t != state.order + 1) {
        throw SpecError("tv_ld_step expects the order-(t-1) state");
    }
    const double u = static_cast<double>(t) / T;
    double acc = cov(u, t);
    for (int j = 1; j < t; ++j) acc -= state.coeffs(j - 1) * cov(u, t - j);
    const double phi_tt = acc / state.pred_var;

    PredictionState next;
    next.order = t;
    next.coeffs.resize(t);
    for (int k = 1; k < t; ++k) {
        next.coeffs(k - 1) = state.coeffs(k - 1) - phi_tt * state.coeffs(t - k - 1);
    }
    next.coeffs(t - 1) = phi_tt;
    next.pred_var = state.pred_var * (1.0 - phi_tt * phi_tt);
    if (!(next.pred_var > 0.0)) {
        throw NotPositiveDefiniteError("prediction variance became nonpositive at order " +
                                       std::to_string(t));
    }
    next.var_history = state.var_history;
    next.var_history.push_back(next.pred_var);
    return next;
}

LocalPredictor durbin_levinson(const Eigen::VectorXd& gamma, int order) {
    if (gamma.size() < order + 1) throw SpecError("acvf row too short for requested order");
    double v = gamma(0);
    if (!(v > 0.0)) throw NotPositiveDefiniteError("gamma(0) must be positive");
    Eigen::VectorXd phi = Eigen::VectorXd::Zero(order);
    Eigen::VectorXd prev(order);
    for (int t = 1; t <= order; ++t) {
        double acc = gamma(t);
        for (int j = 1; j < t; ++j) acc -= phi(j - 1) * gamma(t - j);
        const double phi_tt = acc / v;
        prev.head(t - 1) = phi.head(t - 1);
        for (int k = 1; k < t; ++k) phi(k - 1) = prev(k - 1) - phi_tt * prev(t - k - 1);
        phi(t - 1) = phi_tt;
        v *= 1.0 - phi_tt * phi_tt;
        if (!(v > 0.0)) {
            throw NotPositiveDefiniteError("acvf row is not positive definite at order " +
                                           std::to_string(t));
        }
    }
    return {phi, v};
}

LocalPredictor local_predictor(const LsbModelSpec& model, double u, int order) {
    switch (model.family()) {
        case Family::WhiteNoise: {
            const double s = model.sigma(u);
            return {Eigen::VectorXd(), s * s};
        }
        case Family::Ar: {
            const int p = model.order();
            if (order >= p) {
                const double s = model.sigma(u);
                return {pacf_to_ar(model.pacf(u)), s * s};
            }
            return durbin_levinson(local_acvf_row(model, u, order), order);
        }
        case Family::Fd: {
            // Closed-form fractional-noise predictor:
            //   phi_{n,1} = n d / (n - d),
            //   phi_{n,j+1} = phi_{n,j} (n-j)(j-d) / [(j+1)(n-d-j)],
            // with pred_var = gamma(0) prod_k (1 - (d/(k-d))^2).
            const double d = model.lrd(u);
            const double s = model.sigma(u);
            const int n = order;
            Eigen::VectorXd phi(n);
            if (n > 0) {
                phi(0) = n * d / (n - d);
                for (int j = 1; j < n; ++j) {
                    phi(j) = phi(j - 1) * (n - j) * (j - d) / ((j + 1.0) * (n - d - j));
                }
            }
            double v = s * s *
                       std::exp(std::lgamma(1.0 - 2.0 * d) - 2.0 * std::lgamma(1.0 - d));
            for (int k = 1; k <= n; ++k) {
                const double pk = d / (k - d);
                v *= 1.0 - pk * pk;
            }
            return {phi, v};
        }
        case Family::Exp:
            return durbin_levinson(local_acvf_row(model, u, order), order);
    }
    return {};
}

Innovations innovations_exact(const Eigen::MatrixXd& sigma, const Eigen::VectorXd& x) {
    if (sigma.rows() != sigma.cols() || sigma.rows() != x.size()) {
        throw SpecError("covariance and data dimensions disagree");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) {
        throw NotPositiveDefiniteError("dense covariance is not positive definite");
    }
    const Eigen::MatrixXd L = llt.matrixL();
    const Eigen::VectorXd z = L.triangularView<Eigen::Lower>().solve(x);
    Innovations out;
    out.residuals = z.cwiseProduct(L.diagonal());
    out.variances = L.diagonal().cwiseAbs2();
    return out;
}

double spd_log_det(const Eigen::MatrixXd& sigma) {
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) {
        throw NotPositiveDefiniteError("matrix is not positive definite");
    }
    return 2.0 * Eigen::MatrixXd(llt.matrixL()).diagonal().array().log().sum();
}

Eigen::MatrixXd build_dense_cov(const LsbModelSpec& model, int T, int dense_limit) {
    if (T < 1) throw SpecError("T must be positive");
    if (T > dense_limit) {
        throw SizeError("dense covariance limited to T <= " + std::to_string(dense_limit));
    }
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(T, T);
    switch (model.family()) {
        case Family::WhiteNoise: {
            for (int k = 0; k < T; ++k) {
                const double s = model.sigma(static_cast<double>(k + 1) / T);
                sigma(k, k) = s * s;
            }
            return sigma;
        }
        case Family::Ar: {
            // c0(k,l) = sigma_k sigma_l sum_j psi_j(u_k) psi_{j+l-k}(u_l):
            // exact up to machine-precision truncation of the MA series.
            std::vector<std::vector<double>> psi(T);
            std::vector<double> sig(T);
            for (int k = 0; k < T; ++k) {
                const double u = static_cast<double>(k + 1) / T;
                psi[k] = ma_expansion(pacf_to_ar(model.pacf(u)));
                sig[k] = model.sigma(u);
            }
            for (int k = 0; k < T; ++k) {
                for (int l = k; l < T; ++l) {
                    const int lag = l - k;
                    const int nk = static_cast<int>(psi[k].size());
                    const int nl = static_cast<int>(psi[l].size());
                    const int n = std::min(nk, nl - lag);
                    double s = 0.0;
                    for (int j = 0; j < n; ++j) s += psi[k][j] * psi[l][j + lag];
                    sigma(k, l) = sigma(l, k) = sig[k] * sig[l] * s;
                }
            }
            return sigma;
        }
        case Family::Exp:
        case Family::Fd: {
            // Midpoint frequency grid; the Gram form keeps the result
            // numerically PSD. The midpoint grid never touches lambda = 0,
            // which dodges the long-memory pole.
            const int G = 4096;
            const double dl = kTwoPi / G;
            Eigen::MatrixXcd B(T, G);
            SpectralField field(model);
            for (int k = 0; k < T; ++k) {
                const double u = static_cast<double>(k + 1) / T;
                const LocalModel& lm = field.local(u);
                for (int g = 0; g < G; ++g) {
                    const double lam = -kPi + (g + 0.5) * dl;
                    B(k, g) = lm.transfer(lam) * std::polar(1.0, lam * (k + 1));
                }
            }
            sigma = dl * (B * B.adjoint()).real();
            sigma = ((sigma + sigma.transpose()) / 2.0).eval();
            return sigma;
        }
    }
    return sigma;
}

}  // namespace lsb
