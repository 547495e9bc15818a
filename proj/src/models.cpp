#include "lsb/models.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <utility>

namespace lsb {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

void check_u(double u) {
    if (!(u >= 0.0 && u <= 1.0)) {
        throw DomainError("model evaluation requires u in [0,1]");
    }
}

/// Levinson-Durbin step-up shared by pacf_to_ar and the Jacobian path.
/// jac, when non-null, receives d a / d pacf (p x p).
Eigen::VectorXd stepup(const Eigen::VectorXd& pacf, Eigen::MatrixXd* jac) {
    const int p = static_cast<int>(pacf.size());
    for (int k = 0; k < p; ++k) {
        if (!(pacf(k) > -1.0 && pacf(k) < 1.0)) {
            throw DomainError("partial autocorrelations must lie in (-1,1)");
        }
    }
    Eigen::VectorXd a = Eigen::VectorXd::Zero(p);
    if (jac) *jac = Eigen::MatrixXd::Zero(p, p);
    Eigen::VectorXd prev(p);
    Eigen::MatrixXd prev_jac;
    for (int k = 1; k <= p; ++k) {
        const double phi_kk = pacf(k - 1);
        prev.head(k - 1) = a.head(k - 1);
        if (jac) prev_jac = *jac;
        for (int j = 1; j < k; ++j) {
            a(j - 1) = prev(j - 1) - phi_kk * prev(k - j - 1);
            if (jac) {
                jac->row(j - 1) = prev_jac.row(j - 1) - phi_kk * prev_jac.row(k - j - 1);
                (*jac)(j - 1, k - 1) -= prev(k - j - 1);
            }
        }
        a(k - 1) = phi_kk;
        if (jac) {
            jac->row(k - 1).setZero();
            (*jac)(k - 1, k - 1) = 1.0;
        }
    }
    return a;
}

/// Solve the (p+1)-dimensional Yule-Walker system for gamma(0..p) given
/// AR coefficients and innovation variance, then extend by the recursion.
Eigen::VectorXd ar_acvf(const Eigen::VectorXd& a, double innov_var, int hmax) {
    const int p = static_cast<int>(a.size());
    Eigen::VectorXd gamma(hmax + 1);
    if (p == 0) {
        gamma.setZero();
        gamma(0) = innov_var;
        return gamma;
    }
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p + 1, p + 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(p + 1);
    rhs(0) = innov_var;
    for (int k = 0; k <= p; ++k) {
        m(k, k) += 1.0;
        for (int j = 1; j <= p; ++j) m(k, std::abs(k - j)) -= a(j - 1);
    }
    const Eigen::VectorXd head = m.fullPivLu().solve(rhs);
    const int ncopy = std::min(hmax, p) + 1;
    gamma.head(ncopy) = head.head(ncopy);
    for (int h = p + 1; h <= hmax; ++h) {
        double s = 0.0;
        for (int j = 1; j <= p; ++j) s += a(j - 1) * gamma(h - j);
        gamma(h) = s;
    }
    return gamma;
}

/// Fractionally differenced acvf: gamma(0) = s2 G(1-2d)/G(1-d)^2 and the
/// ratio recurrence gamma(h+1) = gamma(h) (h+d)/(h+1-d). The recurrence
/// yields exact zeros at d = 0, so no separate limit branch is needed.
Eigen::VectorXd fd_acvf(double delta, double s2, int hmax) {
    Eigen::VectorXd gamma(hmax + 1);
    gamma(0) = s2 * std::exp(std::lgamma(1.0 - 2.0 * delta) - 2.0 * std::lgamma(1.0 - delta));
    for (int h = 0; h < hmax; ++h) {
        gamma(h + 1) = gamma(h) * (h + delta) / (h + 1.0 - delta);
    }
    return gamma;
}

/// Project the SDF at u onto cos(h lambda) for h = 0..hmax with a midpoint
/// grid (used for the Exp family, which has no closed-form acvf).
Eigen::VectorXd acvf_by_projection(const LocalModel& local, int hmax, int grid) {
    const double dl = kTwoPi / grid;
    Eigen::VectorXd f(grid);
    Eigen::VectorXd lam(grid);
    for (int g = 0; g < grid; ++g) {
        lam(g) = -kPi + (g + 0.5) * dl;
        f(g) = local.sdf(lam(g));
    }
    Eigen::VectorXd gamma(hmax + 1);
    for (int h = 0; h <= hmax; ++h) {
        double s = 0.0;
        for (int g = 0; g < grid; ++g) s += f(g) * std::cos(h * lam(g));
        gamma(h) = s * dl;
    }
    return gamma;
}

}  // namespace

std::string family_name(Family f) {
    switch (f) {
        case Family::WhiteNoise: return "white_noise";
        case Family::Ar: return "ar";
        case Family::Exp: return "exp";
        case Family::Fd: return "fd";
    }
    return "?";
}

LsbModelSpec::LsbModelSpec(Family family, int order, std::vector<ParameterCurveSpec> curves)
    : family_(family), order_(order), curves_(std::move(curves)) {
    const int J = static_cast<int>(curves_.size());
    int expected = 0;
    switch (family_) {
        case Family::WhiteNoise: expected = 1; break;
        case Family::Ar: expected = order_ + 1; break;
        case Family::Exp: expected = order_ + 1; break;
        case Family::Fd: expected = 2; break;
    }
    if (family_ == Family::WhiteNoise || family_ == Family::Fd) {
        if (order_ != 0) throw SpecError("order must be 0 for this family");
    } else if (order_ < 1) {
        throw SpecError("autoregressive/exponential order must be >= 1");
    }
    if (J != expected) {
        throw SpecError("family " + family_name(family_) + " needs " +
                        std::to_string(expected) + " curves, got " + std::to_string(J));
    }
    for (int j = 0; j < J; ++j) {
        const LinkKind got = curves_[j].link().kind();
        LinkKind want = LinkKind::Log;
        if (family_ == Family::Ar && j < order_) want = LinkKind::ShiftedLogitPacf;
        if (family_ == Family::Fd && j == 0) want = LinkKind::ShiftedLogitFd;
        if (got != want) {
            throw SpecError("curve " + std::to_string(j) + " has the wrong link kind for family " +
                            family_name(family_));
        }
    }
}

LsbModelSpec LsbModelSpec::white_noise(ParameterCurveSpec scale) {
    return LsbModelSpec(Family::WhiteNoise, 0, {std::move(scale)});
}

LsbModelSpec LsbModelSpec::ar(std::vector<ParameterCurveSpec> pacf, ParameterCurveSpec scale) {
    const int p = static_cast<int>(pacf.size());
    pacf.push_back(std::move(scale));
    return LsbModelSpec(Family::Ar, p, std::move(pacf));
}

LsbModelSpec LsbModelSpec::exponential(std::vector<ParameterCurveSpec> cepstral,
                                       ParameterCurveSpec scale) {
    const int p = static_cast<int>(cepstral.size());
    cepstral.push_back(std::move(scale));
    return LsbModelSpec(Family::Exp, p, std::move(cepstral));
}

LsbModelSpec LsbModelSpec::fd(ParameterCurveSpec lrd, ParameterCurveSpec scale) {
    std::vector<ParameterCurveSpec> curves;
    curves.push_back(std::move(lrd));
    curves.push_back(std::move(scale));
    return LsbModelSpec(Family::Fd, 0, std::move(curves));
}

int LsbModelSpec::coefficient_count() const {
    int b = 0;
    for (const auto& c : curves_) b += c.size();
    return b;
}

std::pair<int, int> LsbModelSpec::curve_slice(int j) const {
    int off = 0;
    for (int i = 0; i < j; ++i) off += curves_[i].size();
    return {off, curves_[j].size()};
}

Eigen::VectorXd LsbModelSpec::pack() const {
    Eigen::VectorXd beta(coefficient_count());
    int off = 0;
    for (const auto& c : curves_) {
        beta.segment(off, c.size()) = c.coefficients();
        off += c.size();
    }
    return beta;
}

LsbModelSpec LsbModelSpec::with_coefficients(const Eigen::VectorXd& beta) const {
    if (beta.size() != coefficient_count()) {
        throw SpecError("flat coefficient vector has the wrong length");
    }
    std::vector<ParameterCurveSpec> curves;
    curves.reserve(curves_.size());
    int off = 0;
    for (const auto& c : curves_) {
        curves.push_back(c.with_coefficients(beta.segment(off, c.size())));
        off += c.size();
    }
    return LsbModelSpec(family_, order_, std::move(curves));
}

double LsbModelSpec::lrd(double u) const {
    if (family_ != Family::Fd) throw SpecError("lrd curve only exists for the fd family");
    return curves_[0].value(u);
}

Eigen::VectorXd LsbModelSpec::pacf(double u) const {
    if (family_ != Family::Ar) throw SpecError("pacf curves only exist for the ar family");
    Eigen::VectorXd v(order_);
    for (int j = 0; j < order_; ++j) v(j) = curves_[j].value(u);
    return v;
}

Eigen::VectorXd LsbModelSpec::cepstral(double u) const {
    if (family_ != Family::Exp) throw SpecError("cepstral curves only exist for the exp family");
    Eigen::VectorXd v(order_);
    for (int j = 0; j < order_; ++j) v(j) = curves_[j].value(u);
    return v;
}

Eigen::VectorXd pacf_to_ar(const Eigen::VectorXd& pacf) { return stepup(pacf, nullptr); }

std::complex<double> LocalModel::transfer(double lambda) const {
    const double amp = sigma / std::sqrt(kTwoPi);
    switch (family) {
        case Family::WhiteNoise:
            return {amp, 0.0};
        case Family::Ar: {
            std::complex<double> phi(1.0, 0.0);
            for (int j = 0; j < ar_coef.size(); ++j) {
                phi -= ar_coef(j) * std::polar(1.0, -(j + 1.0) * lambda);
            }
            return amp / phi;
        }
        case Family::Exp: {
            double s = 0.0;
            for (int j = 0; j < theta.size(); ++j) s += theta(j) * std::cos((j + 1.0) * lambda);
            return {amp * std::exp(s), 0.0};
        }
        case Family::Fd: {
            const double delta = theta(0);
            if (lambda == 0.0) {
                if (delta > 0.0) throw PoleError("fd transfer has a pole at lambda = 0");
                return {delta == 0.0 ? amp : 0.0, 0.0};
            }
            // (1 - e^{-i lambda})^{-delta}, principal branch:
            // modulus 2|sin(lambda/2)|, argument sign(lambda)(pi - |lambda|)/2.
            const double r = 2.0 * std::abs(std::sin(lambda / 2.0));
            const double ang = (lambda > 0.0 ? 1.0 : -1.0) * (kPi - std::abs(lambda)) / 2.0;
            return amp * std::polar(std::pow(r, -delta), -delta * ang);
        }
    }
    return {0.0, 0.0};
}

double LocalModel::sdf(double lambda) const {
    const double base = sigma * sigma / kTwoPi;
    switch (family) {
        case Family::WhiteNoise:
            return base;
        case Family::Ar: {
            std::complex<double> phi(1.0, 0.0);
            for (int j = 0; j < ar_coef.size(); ++j) {
                phi -= ar_coef(j) * std::polar(1.0, -(j + 1.0) * lambda);
            }
            return base / std::norm(phi);
        }
        case Family::Exp: {
            double s = 0.0;
            for (int j = 0; j < theta.size(); ++j) s += theta(j) * std::cos((j + 1.0) * lambda);
            return base * std::exp(2.0 * s);
        }
        case Family::Fd: {
            const double delta = theta(0);
            if (lambda == 0.0) {
                if (delta > 0.0) throw PoleError("fd sdf has a pole at lambda = 0");
                return delta == 0.0 ? base : 0.0;
            }
            return base * std::pow(2.0 * std::abs(std::sin(lambda / 2.0)), -2.0 * delta);
        }
    }
    return 0.0;
}

const Eigen::MatrixXd& LocalModel::ar_jacobian() const {
    if (!ar_jac_ready_) {
        Eigen::MatrixXd jac;
        stepup(theta, &jac);
        ar_jac_ = jac;
        ar_jac_ready_ = true;
    }
    return ar_jac_;
}

Eigen::VectorXd LocalModel::dlog_sdf(double lambda) const {
    const int J = static_cast<int>(theta.size()) + 1;
    Eigen::VectorXd d(J);
    d(J - 1) = 2.0 / sigma;
    switch (family) {
        case Family::WhiteNoise:
            break;
        case Family::Ar: {
            const int p = static_cast<int>(ar_coef.size());
            std::complex<double> phi(1.0, 0.0);
            for (int j = 0; j < p; ++j) phi -= ar_coef(j) * std::polar(1.0, -(j + 1.0) * lambda);
            const double n = std::norm(phi);
            Eigen::VectorXd da(p);
            for (int j = 0; j < p; ++j) {
                da(j) = 2.0 * (std::polar(1.0, -(j + 1.0) * lambda) * std::conj(phi)).real() / n;
            }
            d.head(p) = ar_jacobian().transpose() * da;
            break;
        }
        case Family::Exp:
            for (int j = 0; j + 1 < J; ++j) d(j) = 2.0 * std::cos((j + 1.0) * lambda);
            break;
        case Family::Fd:
            if (lambda == 0.0) throw PoleError("fd log-sdf gradient undefined at lambda = 0");
            d(0) = -2.0 * std::log(2.0 * std::abs(std::sin(lambda / 2.0)));
            break;
    }
    return d;
}

LocalModel local_model_at(const LsbModelSpec& model, double u) {
    check_u(u);
    LocalModel lm;
    lm.family = model.family();
    lm.sigma = model.sigma(u);
    switch (model.family()) {
        case Family::WhiteNoise:
            lm.theta.resize(0);
            break;
        case Family::Ar:
            lm.theta = model.pacf(u);
            lm.ar_coef = stepup(lm.theta, nullptr);
            break;
        case Family::Exp:
            lm.theta = model.cepstral(u);
            break;
        case Family::Fd:
            lm.theta.resize(1);
            lm.theta(0) = model.lrd(u);
            break;
    }
    return lm;
}

void SpectralField::refresh(double u) const {
    if (cache_valid_ && cache_u_ == u) return;
    cache_local_ = local_model_at(*model_, u);
    const int J = model_->curve_count();
    cache_hprime_.resize(J);
    cache_w_.resize(J);
    for (int j = 0; j < J; ++j) {
        cache_w_[j] = model_->curve(j).basis().eval(u);
        cache_hprime_[j] =
            model_->curve(j).link().inverse_deriv(cache_w_[j].dot(model_->curve(j).coefficients()));
    }
    cache_u_ = u;
    cache_valid_ = true;
}

const LocalModel& SpectralField::local(double u) const {
    refresh(u);
    return cache_local_;
}

const Eigen::VectorXd& SpectralField::basis_at(double u, int j) const {
    refresh(u);
    return cache_w_.at(j);
}

double SpectralField::hprime_at(double u, int j) const {
    refresh(u);
    return cache_hprime_.at(j);
}

std::complex<double> SpectralField::transfer(double u, double lambda) const {
    return local(u).transfer(lambda);
}

double SpectralField::sdf(double u, double lambda) const { return local(u).sdf(lambda); }

Eigen::VectorXd SpectralField::grad_log_sdf(double u, double lambda) const {
    refresh(u);
    const Eigen::VectorXd d = cache_local_.dlog_sdf(lambda);
    Eigen::VectorXd g(model_->coefficient_count());
    int off = 0;
    for (int j = 0; j < model_->curve_count(); ++j) {
        const int len = model_->curve(j).size();
        g.segment(off, len) = d(j) * cache_hprime_[j] * cache_w_[j];
        off += len;
    }
    return g;
}

std::complex<double> transfer(const LsbModelSpec& model, double u, double lambda) {
    return local_model_at(model, u).transfer(lambda);
}

double sdf(const LsbModelSpec& model, double u, double lambda) {
    return local_model_at(model, u).sdf(lambda);
}

Eigen::VectorXd local_acvf_row(const LsbModelSpec& model, double u, int hmax) {
    check_u(u);
    const LocalModel lm = local_model_at(model, u);
    const double s2 = lm.sigma * lm.sigma;
    switch (model.family()) {
        case Family::WhiteNoise: {
            Eigen::VectorXd gamma = Eigen::VectorXd::Zero(hmax + 1);
            gamma(0) = s2;
            return gamma;
        }
        case Family::Ar:
            return ar_acvf(lm.ar_coef, s2, hmax);
        case Family::Fd:
            return fd_acvf(lm.theta(0), s2, hmax);
        case Family::Exp:
            return acvf_by_projection(lm, hmax, 4096);
    }
    return Eigen::VectorXd();
}

double local_acvf(const LsbModelSpec& model, double u, int h) {
    if (h < 0) throw DomainError("acvf lag must be nonnegative");
    return local_acvf_row(model, u, h)(h);
}

double acvf_quadrature_oracle(const LsbModelSpec& model, double u, int h, int grid_size) {
    if (grid_size < 4096 || (grid_size & (grid_size - 1)) != 0) {
        throw SpecError("oracle grid size must be a power of two >= 4096");
    }
    const LocalModel lm = local_model_at(model, u);
    const double dl = kTwoPi / grid_size;
    double s = 0.0;
    for (int g = 0; g < grid_size; ++g) {
        const double lam = -kPi + (g + 0.5) * dl;
        s += lm.sdf(lam) * std::cos(h * lam);
    }
    return s * dl;
}

ValidityReport validate(const LsbModelSpec& model) {
    constexpr int kGrid = 512;
    constexpr double kWellConditioned = 1e-8;
    ValidityReport report;

    ConditionReport scale{"scale_positive", true, std::numeric_limits<double>::infinity()};
    ConditionReport pacf_range{"pacf_in_unit_interval", true,
                               std::numeric_limits<double>::infinity()};
    ConditionReport roots{"ar_roots_outside_unit_circle", true,
                          std::numeric_limits<double>::infinity()};
    ConditionReport lrd_range{"lrd_in_half_interval", true,
                              std::numeric_limits<double>::infinity()};

    for (int i = 0; i < kGrid; ++i) {
        const double u = static_cast<double>(i) / (kGrid - 1);
        const double sig = model.sigma(u);
        scale.margin = std::min(scale.margin, sig);
        if (!(sig > 0.0)) scale.pass = false;

        if (model.family() == Family::Ar) {
            const Eigen::VectorXd pacf = model.pacf(u);
            for (int k = 0; k < pacf.size(); ++k) {
                pacf_range.margin = std::min(pacf_range.margin, 1.0 - std::abs(pacf(k)));
                if (std::abs(pacf(k)) > 1.0) pacf_range.pass = false;
            }
            // Inverse roots are the companion-matrix eigenvalues; causality
            // needs them inside the unit circle. Saturated links can round
            // a pacf value to exactly +-1, so nudge inside before stepping up.
            const double lim = std::nextafter(1.0, 0.0);
            const Eigen::VectorXd a = stepup(pacf.cwiseMin(lim).cwiseMax(-lim), nullptr);
            const int p = static_cast<int>(a.size());
            double max_mod = 0.0;
            if (p == 1) {
                max_mod = std::abs(a(0));
            } else {
                Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(p, p);
                comp.row(0) = a.transpose();
                comp.block(1, 0, p - 1, p - 1).setIdentity();
                max_mod = comp.eigenvalues().cwiseAbs().maxCoeff();
            }
            roots.margin = std::min(roots.margin, 1.0 - max_mod);
            if (max_mod > 1.0 + 1e-12) roots.pass = false;
        }
        if (model.family() == Family::Fd) {
            const double d = model.lrd(u);
            lrd_range.margin = std::min(lrd_range.margin, 0.5 - std::abs(d));
            if (std::abs(d) >= 0.5) lrd_range.pass = false;
        }
    }

    report.conditions.push_back(scale);
    if (model.family() == Family::Ar) {
        report.conditions.push_back(pacf_range);
        report.conditions.push_back(roots);
    }
    if (model.family() == Family::Fd) report.conditions.push_back(lrd_range);
    for (const auto& c : report.conditions) {
        report.pass = report.pass && c.pass;
        report.well_conditioned = report.well_conditioned && (c.margin >= kWellConditioned);
    }
    return report;
}

LsbModelSpec paper_ar2_preset() {
    const BasisSet basis = BasisSet::legendre_symmetric(3);
    Eigen::VectorXd b1(3), b2(3), b3(1);
    b1 << 0.61, 1.71, -1.27;
    b2 << -3.52, 5.50, -3.00;
    b3 << 0.0;
    std::vector<ParameterCurveSpec> pacf;
    pacf.emplace_back(basis, LinkFunction(LinkKind::ShiftedLogitPacf), b1);
    pacf.emplace_back(basis, LinkFunction(LinkKind::ShiftedLogitPacf), b2);
    return LsbModelSpec::ar(std::move(pacf),
                            ParameterCurveSpec(BasisSet::constant(),
                                               LinkFunction(LinkKind::Log), b3));
}

}  // namespace lsb
