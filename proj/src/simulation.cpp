#include "lsb/simulation.hpp"

#include <boost/math/distributions/normal.hpp>
#include <cmath>

#include "lsb/levinson.hpp"

namespace lsb {

namespace {

std::uint64_t splitmix_finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replication) {
    return splitmix_finalize(master + (replication + 1) * 0x9E3779B97F4A7C15ULL);
}

double GaussianStream::uniform(std::uint64_t i) const {
    const std::uint64_t z = splitmix_finalize(seed_ + (i + 1) * 0x9E3779B97F4A7C15ULL);
    return ((z >> 11) + 0.5) * 0x1.0p-53;  // strictly inside (0,1)
}

double GaussianStream::normal(std::uint64_t i) const {
    static const boost::math::normal_distribution<double> dist;
    return boost::math::quantile(dist, uniform(i));
}

Simulator::Simulator(const LsbModelSpec& model, int length, std::optional<SimPath> path,
                     int dense_limit)
    : model_(model), length_(length) {
    if (length_ < 1) throw SpecError("simulation length must be positive");
    const bool markov = model.family() == Family::WhiteNoise || model.family() == Family::Ar;
    path_ = path.value_or(markov ? SimPath::RecursiveAr : SimPath::DenseGaussian);
    if (path_ == SimPath::RecursiveAr && !markov) {
        throw SpecError("the recursive path only applies to white-noise and ar models");
    }
    if (path_ == SimPath::DenseGaussian) {
        Eigen::LLT<Eigen::MatrixXd> llt(build_dense_cov(model_, length_, dense_limit));
        if (llt.info() != Eigen::Success) {
            throw NotPositiveDefiniteError("model covariance is not positive definite");
        }
        chol_ = llt.matrixL();
    }
}

Eigen::VectorXd Simulator::draw(std::uint64_t seed, int replication) const {
    const GaussianStream stream(derive_seed(seed, static_cast<std::uint64_t>(replication)));
    const int T = length_;
    Eigen::VectorXd x(T);

    if (path_ == SimPath::DenseGaussian) {
        Eigen::VectorXd z(T);
        for (int i = 0; i < T; ++i) z(i) = stream.normal(i);
        x = chol_.triangularView<Eigen::Lower>() * z;
        return x;
    }

    const int p = model_.order();
    // Startup from the sequential time-varying prediction recursion so the
    // initial segment carries the right marginal law up to O(1/T).
    struct RowCov {
        const LsbModelSpec* model;
        int hmax;
        double u = -1.0;
        Eigen::VectorXd row;
        double operator()(double uu, int h) {
            if (uu != u) {
                row = local_acvf_row(*model, uu, hmax);
                u = uu;
            }
            return row(h);
        }
    } rows{&model_, std::max(p, 1)};
    const CovFn cov = [&rows](double u, int h) { return rows(u, h); };

    PredictionState st = tv_ld_initial(cov, T);
    x(0) = std::sqrt(st.pred_var) * stream.normal(0);
    for (int t = 1; t < std::min(p + 1, T); ++t) {
        st = tv_ld_step(st, cov, t, T);
        double pred = 0.0;
        for (int k = 1; k <= t; ++k) pred += st.coeffs(k - 1) * x(t - k);
        x(t) = pred + std::sqrt(st.pred_var) * stream.normal(t);
    }
    for (int t = p + 1; t < T; ++t) {
        const double u = static_cast<double>(t + 1) / T;  // generating X_{t+1} (1-based)
        double pred = 0.0;
        if (p > 0) {
            const Eigen::VectorXd a = pacf_to_ar(model_.pacf(u));
            for (int k = 1; k <= p; ++k) pred += a(k - 1) * x(t - k);
        }
        x(t) = pred + model_.sigma(u) * stream.normal(t);
    }
    return x;
}

Eigen::VectorXd simulate(const LsbModelSpec& model, const SimConfig& cfg) {
    return Simulator(model, cfg.length, cfg.path, cfg.dense_limit)
        .draw(cfg.seed, cfg.replication);
}

}  // namespace lsb
