#include "lsb/likelihood.hpp"

#include <cmath>
#include <complex>

namespace lsb {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kHalfLog2Pi = 0.9189385332046727;  // log(2 pi)/2

/// Rows of c(u, 0..hmax) fetched once per rescaled-time point.
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
};

int round_half_up(double x) { return static_cast<int>(std::floor(x + 0.5)); }

}  // namespace

int default_truncation(int T) {
    const int d = static_cast<int>(std::ceil(10.0 * std::pow(static_cast<double>(T), 0.4)));
    return std::min(T, d);
}

double exact_nll(const LsbModelSpec& model, const Eigen::VectorXd& x, const ExactLikConfig& cfg) {
    const int T = static_cast<int>(x.size());
    const int p = model.order();
    if (T < std::max(2 * p + 2, 16)) {
        throw SpecError("series too short for the exact likelihood");
    }

    if (cfg.dense_oracle) {
        const Innovations innov =
            innovations_exact(build_dense_cov(model, T, cfg.dense_limit), x);
        const double acc = (innov.variances.array().log() +
                            innov.residuals.array().square() / innov.variances.array())
                               .sum();
        return kHalfLog2Pi + acc / (2.0 * T);
    }

    int cap = 0;
    switch (model.family()) {
        case Family::WhiteNoise: cap = 0; break;
        case Family::Ar: cap = p; break;
        case Family::Exp:
        case Family::Fd: cap = cfg.truncation.value_or(default_truncation(T)); break;
    }
    cap = std::min(cap, T - 1);
    if (cap < 0 || (cfg.truncation && *cfg.truncation < 0)) {
        throw SpecError("truncation must be nonnegative");
    }

    RowCov rows{&model, std::max(cap, 1)};
    const CovFn cov = [&rows](double u, int h) { return rows(u, h); };

    PredictionState st = tv_ld_initial(cov, T);
    double acc = std::log(st.pred_var) + x(0) * x(0) / st.pred_var;
    for (int t = 1; t < T; ++t) {
        double pred = 0.0;
        double v = 0.0;
        if (t <= cap) {
            st = tv_ld_step(st, cov, t, T);
            for (int k = 1; k <= t; ++k) pred += st.coeffs(k - 1) * x(t - k);
            v = st.pred_var;
        } else {
            const LocalPredictor lp = local_predictor(model, static_cast<double>(t) / T, cap);
            const int len = static_cast<int>(lp.coeffs.size());
            for (int k = 1; k <= len; ++k) pred += lp.coeffs(k - 1) * x(t - k);
            v = lp.pred_var;
        }
        const double e = x(t) - pred;
        acc += std::log(v) + e * e / v;
    }
    return kHalfLog2Pi + acc / (2.0 * T);
}

int WhittleConfig::block_count(int T) const {
    if (step < 1 || block_length < 1) return 0;
    return static_cast<int>(std::floor(1.0 + static_cast<double>(T - block_length) / step));
}

void WhittleConfig::check(int T) const {
    if (block_length % 2 != 0 || block_length < 2 || block_length > T) {
        throw SpecError("block length N must be even with 2 <= N <= T");
    }
    if (step < 1 || step > block_length) {
        throw SpecError("step S must satisfy 1 <= S <= N");
    }
    if (block_count(T) < 1) {
        throw SpecError("configuration yields no complete blocks");
    }
}

WhittleConfig default_blocks(int T) {
    if (T < 64) throw SpecError("default blocks require T >= 64");
    const double n0 = std::pow(static_cast<double>(T), 0.6);
    WhittleConfig cfg;
    cfg.block_length = 2 * std::max(1, round_half_up(n0 / 2.0));
    cfg.step = std::max(1, round_half_up(0.35 * cfg.block_length));
    cfg.taper = TaperKind::CosineBell;
    return cfg;
}

Eigen::VectorXd taper_weights(TaperKind kind, int N) {
    Eigen::VectorXd w(N);
    switch (kind) {
        case TaperKind::Flat:
            w.setConstant(1.0 / std::sqrt(static_cast<double>(N)));
            return w;
        case TaperKind::CosineBell:
            for (int s = 0; s < N; ++s) {
                w(s) = 0.5 * (1.0 - std::cos(kTwoPi * s / N));
            }
            // The printed cosine bell does not satisfy the unit-energy
            // constraint; rescale the discrete weights.
            w /= w.norm();
            return w;
    }
    return w;
}

Eigen::VectorXd local_periodogram(const Eigen::VectorXd& x, double u, int N,
                                  const Eigen::VectorXd& taper) {
    const int T = static_cast<int>(x.size());
    if (taper.size() != N) throw SpecError("taper length must equal N");
    const int center = round_half_up(u * T);           // [uT], 1-based
    const int start = center - N / 2 + 1;              // 1-based segment start
    if (start < 1 || start + N - 1 > T) {
        throw BlockPlacementError("periodogram segment [" + std::to_string(start) + ", " +
                                  std::to_string(start + N - 1) + "] outside 1.." +
                                  std::to_string(T));
    }
    Eigen::VectorXd tapered(N);
    for (int s = 0; s < N; ++s) tapered(s) = taper(s) * x(start - 1 + s);

    Eigen::VectorXd out(N);
    for (int k = 0; k < N; ++k) {
        const double w = kTwoPi * k / N;
        double re = 0.0, im = 0.0;
        for (int s = 0; s < N; ++s) {
            re += tapered(s) * std::cos(w * s);
            im -= tapered(s) * std::sin(w * s);
        }
        out(k) = (re * re + im * im) / kTwoPi;
    }
    return out;
}

WhittleEvaluator::WhittleEvaluator(const Eigen::VectorXd& x, WhittleConfig cfg) : cfg_(cfg) {
    sample_size_ = static_cast<int>(x.size());
    cfg_.check(sample_size_);
    const int N = cfg_.block_length;
    const Eigen::VectorXd w = taper_weights(cfg_.taper, N);
    const int M = cfg_.block_count(sample_size_);
    for (int j = 1; j <= M; ++j) {
        const int tj = cfg_.step * (j - 1) + N / 2;
        const double uj = static_cast<double>(tj) / sample_size_;
        // Blocks that would run past the sample are dropped rather than
        // reflected; block_count should already exclude them.
        if (tj - N / 2 + 1 < 1 || tj + N / 2 > sample_size_) continue;
        midpoints_.push_back(uj);
        periodograms_.push_back(local_periodogram(x, uj, N, w));
    }
    if (midpoints_.empty()) throw SpecError("no valid blocks");
}

double WhittleEvaluator::nll(const LsbModelSpec& model) const {
    const int N = cfg_.block_length;
    const int M = block_count();
    const bool substitute_dc = model.family() == Family::Fd;
    SpectralField field(model);
    double total = 0.0;
    for (int j = 0; j < M; ++j) {
        const LocalModel& lm = field.local(midpoints_[j]);
        const Eigen::VectorXd& I = periodograms_[j];
        for (int k = 0; k < N; ++k) {
            // Wrap to (-pi, pi]; the k = 0 term of a long-memory model is
            // evaluated at the half Fourier frequency to sidestep the pole.
            double lam = kTwoPi * k / N;
            if (lam > kPi) lam -= kTwoPi;
            if (k == 0 && substitute_dc) lam = kPi / N;
            const double f = lm.sdf(lam);
            total += std::log(4.0 * kPi * kPi * f) + I(k) / f;
        }
    }
    return total / (2.0 * static_cast<double>(N) * M);
}

double whittle_nll(const LsbModelSpec& model, const Eigen::VectorXd& x,
                   const WhittleConfig& cfg) {
    return WhittleEvaluator(x, cfg).nll(model);
}

}  // namespace lsb
