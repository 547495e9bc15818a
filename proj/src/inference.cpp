#include "lsb/inference.hpp"

#include <boost/math/distributions/normal.hpp>
#include <cmath>

namespace lsb {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// J x J frequency integrals int D_j(u,l) D_j'(u,l) dl of the per-curve
/// log-SDF derivatives, scale curve last. Exact values where the integrand
/// is a trigonometric or log-sine polynomial:
///   int dl = 2pi, int cos(jl) cos(kl) dl = pi delta_jk,
///   int log(2 sin|l|/2) dl = 0, int log^2(2 sin|l|/2) dl = pi^3/6.
Eigen::MatrixXd frequency_integrals(const LocalModel& lm, int lambda_grid) {
    const int J = static_cast<int>(lm.theta.size()) + 1;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(J, J);
    const double s2 = lm.sigma * lm.sigma;
    switch (lm.family) {
        case Family::WhiteNoise:
            m(0, 0) = 8.0 * kPi / s2;
            return m;
        case Family::Exp: {
            for (int j = 0; j + 1 < J; ++j) m(j, j) = 4.0 * kPi;
            m(J - 1, J - 1) = 8.0 * kPi / s2;
            return m;
        }
        case Family::Fd: {
            m(0, 0) = 4.0 * kPi * kPi * kPi / 6.0;
            m(1, 1) = 8.0 * kPi / s2;
            return m;
        }
        case Family::Ar: {
            const double dl = 2.0 * kPi / lambda_grid;
            for (int g = 0; g < lambda_grid; ++g) {
                const double lam = -kPi + (g + 0.5) * dl;
                const Eigen::VectorXd d = lm.dlog_sdf(lam);
                m.noalias() += d * d.transpose();
            }
            m *= dl;
            return m;
        }
    }
    return m;
}

}  // namespace

FisherInfo fisher_info(const LsbModelSpec& model, int u_grid, int lambda_grid) {
    if (u_grid < 2 || lambda_grid < 2) throw SpecError("quadrature grids too small");
    const int b = model.coefficient_count();
    const int J = model.curve_count();

    FisherInfo info;
    info.u_grid = u_grid;
    info.lambda_grid = lambda_grid;
    info.gamma = Eigen::MatrixXd::Zero(b, b);
    for (int j = 0; j < J; ++j) info.blocks.push_back(model.curve_slice(j));

    const double du = 1.0 / (u_grid - 1);
    SpectralField field(model);
    std::vector<Eigen::VectorXd> v(J);  // h'_j(eta_j(u)) w_j(u)
    for (int i = 0; i < u_grid; ++i) {
        const double u = static_cast<double>(i) * du;
        const double wu = (i == 0 || i == u_grid - 1) ? 0.5 * du : du;
        const LocalModel& lm = field.local(u);
        const Eigen::MatrixXd freq = frequency_integrals(lm, lambda_grid);
        for (int j = 0; j < J; ++j) v[j] = field.hprime_at(u, j) * field.basis_at(u, j);
        for (int j = 0; j < J; ++j) {
            for (int k = 0; k < J; ++k) {
                if (freq(j, k) == 0.0) continue;
                info.gamma.block(info.blocks[j].first, info.blocks[k].first,
                                 info.blocks[j].second, info.blocks[k].second)
                    .noalias() += (wu * freq(j, k) / (4.0 * kPi)) * v[j] * v[k].transpose();
            }
        }
    }
    info.gamma = ((info.gamma + info.gamma.transpose()) / 2.0).eval();

    for (int j = 0; j < J; ++j) {
        for (int k = 0; k < J; ++k) {
            if (j == k) continue;
            const double n = info.gamma
                                 .block(info.blocks[j].first, info.blocks[k].first,
                                        info.blocks[j].second, info.blocks[k].second)
                                 .cwiseAbs()
                                 .maxCoeff();
            info.max_offblock = std::max(info.max_offblock, n);
        }
    }

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(info.gamma);
    const double emax = es.eigenvalues().cwiseAbs().maxCoeff();
    const double emin = es.eigenvalues().minCoeff();
    if (!(emin > 1e-12 * std::max(1.0, emax))) {
        std::string dir = "(";
        const Eigen::VectorXd null_dir = es.eigenvectors().col(0);
        for (int i = 0; i < b; ++i) {
            dir += std::to_string(null_dir(i)) + (i + 1 < b ? "," : ")");
        }
        throw RankError("Fisher information is singular; null direction " + dir);
    }
    return info;
}

Eigen::VectorXd coefficient_ses(const FisherInfo& info, int T) {
    const int b = static_cast<int>(info.gamma.rows());
    Eigen::LLT<Eigen::MatrixXd> llt(info.gamma);
    if (llt.info() != Eigen::Success) {
        throw RankError("Fisher information is not positive definite");
    }
    const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(b, b));
    return (inv.diagonal() / static_cast<double>(T)).cwiseSqrt();
}

CurveBand curve_band(const LsbModelSpec& fitted, const FisherInfo& info, int j,
                     const Eigen::VectorXd& u_grid, double level, int T) {
    if (j < 0 || j >= fitted.curve_count()) throw SpecError("curve index out of range");
    if (!(level > 0.0 && level < 1.0)) throw SpecError("level must lie in (0,1)");
    const auto [off, len] = info.blocks.at(j);
    Eigen::LLT<Eigen::MatrixXd> llt(info.gamma.block(off, off, len, len));
    if (llt.info() != Eigen::Success) {
        throw RankError("Fisher block is not positive definite");
    }
    const double z = normal_quantile(0.5 + level / 2.0);
    const ParameterCurveSpec& curve = fitted.curve(j);

    CurveBand band;
    band.u = u_grid;
    const int n = static_cast<int>(u_grid.size());
    band.estimate.resize(n);
    band.se.resize(n);
    band.lower.resize(n);
    band.upper.resize(n);
    for (int i = 0; i < n; ++i) {
        const double u = u_grid(i);
        const Eigen::VectorXd w = curve.basis().eval(u);
        const double quad = w.dot(llt.solve(w));
        const double eta = w.dot(curve.coefficients());
        const double est = curve.link().inverse(eta);
        const double se = std::abs(curve.link().inverse_deriv(eta)) * std::sqrt(quad / T);
        band.estimate(i) = est;
        band.se(i) = se;
        band.lower(i) = std::max(est - z * se, curve.link().range_min());
        band.upper(i) = std::min(est + z * se, curve.link().range_max());
    }
    return band;
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("normal quantile needs p in (0,1)");
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

}  // namespace lsb
