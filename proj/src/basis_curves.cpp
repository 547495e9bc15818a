#include "lsb/basis_curves.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace lsb {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_u(double u) {
    if (!(u >= 0.0 && u <= 1.0)) {
        throw DomainError("basis evaluation requires u in [0,1], got u=" + std::to_string(u));
    }
}

double positive_part_cubed(double x) { return x > 0.0 ? x * x * x : 0.0; }

}  // namespace

BasisSet::BasisSet(BasisKind kind, int size, std::vector<double> knots)
    : kind_(kind), size_(size), knots_(std::move(knots)) {
    if (size_ < 1) throw SpecError("basis size must be positive");
    if (kind_ == BasisKind::Constant && size_ != 1) {
        throw SpecError("constant basis has size 1");
    }
    if (kind_ == BasisKind::NaturalCubicBSpline) {
        if (size_ < 2) throw SpecError("natural cubic spline basis needs size >= 2");
        if (static_cast<int>(knots_.size()) != size_ - 2) {
            throw SpecError("natural cubic spline basis of size b needs b-2 interior knots");
        }
        double prev = 0.0;
        for (double k : knots_) {
            if (!(k > prev && k < 1.0)) {
                throw SpecError("spline knots must be strictly increasing and interior to (0,1)");
            }
            prev = k;
        }
        // Exact column means over [0,1]; columns are centered so the
        // prepended constant stays a distinguished intercept.
        const int m = static_cast<int>(knots_.size());
        centers_.assign(m + 1, 0.0);
        centers_[0] = 0.5;  // linear column
        if (m > 0) {
            std::vector<double> zeta;  // all knots including the boundary
            zeta.push_back(0.0);
            zeta.insert(zeta.end(), knots_.begin(), knots_.end());
            zeta.push_back(1.0);
            const double zlast = zeta[m];  // second-to-last knot, zeta_{K-1}
            for (int k = 0; k < m; ++k) {
                const double a = zeta[k];
                centers_[k + 1] = (std::pow(1.0 - a, 3) - std::pow(1.0 - zlast, 3)) / 4.0;
            }
        }
    } else if (!knots_.empty()) {
        throw SpecError("knots are only valid for the spline basis kind");
    }
}

BasisSet BasisSet::constant() { return BasisSet(BasisKind::Constant, 1, {}); }

BasisSet BasisSet::raw_polynomial(int size) {
    return BasisSet(BasisKind::RawPolynomial, size, {});
}

BasisSet BasisSet::orthogonal_polynomial(int size) {
    return BasisSet(BasisKind::OrthogonalPolynomial, size, {});
}

BasisSet BasisSet::legendre_symmetric(int size) {
    return BasisSet(BasisKind::LegendreSymmetric, size, {});
}

BasisSet BasisSet::fourier(int size) { return BasisSet(BasisKind::Fourier, size, {}); }

BasisSet BasisSet::natural_cubic_spline(int size) {
    if (size < 2) throw SpecError("natural cubic spline basis needs size >= 2");
    const int m = size - 2;
    std::vector<double> knots(m);
    for (int i = 0; i < m; ++i) knots[i] = static_cast<double>(i + 1) / (m + 1);
    return BasisSet(BasisKind::NaturalCubicBSpline, size, std::move(knots));
}

BasisSet BasisSet::natural_cubic_spline(std::vector<double> interior_knots) {
    const int size = static_cast<int>(interior_knots.size()) + 2;
    return BasisSet(BasisKind::NaturalCubicBSpline, size, std::move(interior_knots));
}

BasisSet BasisSet::make(BasisKind kind, int size, std::vector<double> knots) {
    if (kind == BasisKind::NaturalCubicBSpline && knots.empty() && size >= 2) {
        return natural_cubic_spline(size);
    }
    return BasisSet(kind, size, std::move(knots));
}

Eigen::VectorXd BasisSet::eval(double u) const {
    check_u(u);
    Eigen::VectorXd w(size_);
    w(0) = 1.0;
    switch (kind_) {
        case BasisKind::Constant:
            break;
        case BasisKind::RawPolynomial: {
            double p = 1.0;
            for (int k = 1; k < size_; ++k) {
                p *= u;
                w(k) = p;
            }
            break;
        }
        case BasisKind::OrthogonalPolynomial: {
            // Shifted Legendre P*_k(u) = P_k(2u-1), scaled to unit L2 norm
            // on [0,1] (||P*_k||^2 = 1/(2k+1)); leading term kept at 1.
            const double x = 2.0 * u - 1.0;
            double pm1 = 1.0, p = x;
            for (int k = 1; k < size_; ++k) {
                w(k) = std::sqrt(2.0 * k + 1.0) * p;
                const double pn = ((2.0 * k + 1.0) * x * p - k * pm1) / (k + 1.0);
                pm1 = p;
                p = pn;
            }
            break;
        }
        case BasisKind::LegendreSymmetric: {
            // Monic Legendre forms evaluated in the variable u itself:
            // 1, u, u^2 - 1/3, u^3 - (3/5)u, ...
            double pm1 = 1.0, p = u;
            for (int k = 1; k < size_; ++k) {
                w(k) = p;
                const double kk = static_cast<double>(k);
                const double pn = u * p - kk * kk / ((2.0 * kk + 1.0) * (2.0 * kk - 1.0)) * pm1;
                pm1 = p;
                p = pn;
            }
            break;
        }
        case BasisKind::Fourier: {
            const double rt2 = std::sqrt(2.0);
            for (int k = 1; k < size_; ++k) {
                const int harmonic = (k + 1) / 2;
                const double arg = 2.0 * kPi * harmonic * u;
                w(k) = rt2 * ((k % 2 == 1) ? std::cos(arg) : std::sin(arg));
            }
            break;
        }
        case BasisKind::NaturalCubicBSpline: {
            // Truncated-power natural cubic spline basis (linear beyond the
            // boundary knots, C2 everywhere), columns centered to zero mean.
            w(1) = u - centers_[0];
            const int m = static_cast<int>(knots_.size());
            if (m > 0) {
                std::vector<double> zeta;
                zeta.reserve(m + 2);
                zeta.push_back(0.0);
                zeta.insert(zeta.end(), knots_.begin(), knots_.end());
                zeta.push_back(1.0);
                const double zK = 1.0;
                const double zKm1 = zeta[m];
                auto d = [&](double a) {
                    return (positive_part_cubed(u - a) - positive_part_cubed(u - zK)) / (zK - a);
                };
                const double d_last = d(zKm1);
                for (int k = 0; k < m; ++k) {
                    w(k + 2) = d(zeta[k]) - d_last - centers_[k + 1];
                }
            }
            break;
        }
    }
    return w;
}

double LinkFunction::forward(double theta) const {
    if (!in_range(theta)) {
        throw DomainError("link argument outside range");
    }
    switch (kind_) {
        case LinkKind::Log:
            return std::log(theta);
        case LinkKind::ShiftedLogitPacf: {
            const double p = (theta + 1.0) / 2.0;
            return std::log(p / (1.0 - p));
        }
        case LinkKind::ShiftedLogitFd: {
            const double p = theta + 0.5;
            return std::log(p / (1.0 - p));
        }
    }
    return 0.0;  // unreachable
}

double LinkFunction::inverse(double eta) const {
    switch (kind_) {
        case LinkKind::Log:
            return std::exp(eta);
        case LinkKind::ShiftedLogitPacf:
            // 2 invlogit(eta) - 1 == tanh(eta/2), stable for large |eta|
            return std::tanh(eta / 2.0);
        case LinkKind::ShiftedLogitFd:
            return 0.5 * std::tanh(eta / 2.0);
    }
    return 0.0;
}

double LinkFunction::inverse_deriv(double eta) const {
    switch (kind_) {
        case LinkKind::Log:
            return std::exp(eta);
        case LinkKind::ShiftedLogitPacf: {
            const double c = std::cosh(eta / 2.0);
            return 0.5 / (c * c);
        }
        case LinkKind::ShiftedLogitFd: {
            const double c = std::cosh(eta / 2.0);
            return 0.25 / (c * c);
        }
    }
    return 0.0;
}

double LinkFunction::range_min() const {
    switch (kind_) {
        case LinkKind::Log:
            return 0.0;
        case LinkKind::ShiftedLogitPacf:
            return -1.0;
        case LinkKind::ShiftedLogitFd:
            return -0.5;
    }
    return 0.0;
}

double LinkFunction::range_max() const {
    switch (kind_) {
        case LinkKind::Log:
            return std::numeric_limits<double>::infinity();
        case LinkKind::ShiftedLogitPacf:
            return 1.0;
        case LinkKind::ShiftedLogitFd:
            return 0.5;
    }
    return 0.0;
}

bool LinkFunction::in_range(double theta) const {
    return theta > range_min() && theta < range_max();
}

ParameterCurveSpec::ParameterCurveSpec(BasisSet basis, LinkFunction link,
                                       Eigen::VectorXd coefficients)
    : basis_(std::move(basis)), link_(link), coefficients_(std::move(coefficients)) {
    if (coefficients_.size() != basis_.size()) {
        throw SpecError("coefficient length must equal basis size");
    }
}

double ParameterCurveSpec::linear_predictor(double u) const {
    return basis_.eval(u).dot(coefficients_);
}

double ParameterCurveSpec::value(double u) const {
    return link_.inverse(linear_predictor(u));
}

double ParameterCurveSpec::value_deriv_eta(double u) const {
    return link_.inverse_deriv(linear_predictor(u));
}

Eigen::VectorXd ParameterCurveSpec::gradient(double u) const {
    const Eigen::VectorXd w = basis_.eval(u);
    return link_.inverse_deriv(w.dot(coefficients_)) * w;
}

ParameterCurveSpec ParameterCurveSpec::with_coefficients(Eigen::VectorXd beta) const {
    return ParameterCurveSpec(basis_, link_, std::move(beta));
}

}  // namespace lsb
