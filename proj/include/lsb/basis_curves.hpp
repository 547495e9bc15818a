#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lsb/errors.hpp"

namespace lsb {

/// Families of smooth basis systems on rescaled time u in [0,1].
/// Every system starts with the constant function w_0(u) = 1; the
/// stationarity test relies on that distinguished intercept column.
enum class BasisKind {
    Constant,
    RawPolynomial,         // 1, u, u^2, ...
    OrthogonalPolynomial,  // shifted Legendre, unit L2([0,1]) norm, w_0 = 1
    LegendreSymmetric,     // monic Legendre forms in u: 1, u, u^2 - 1/3, ...
    Fourier,               // 1, sqrt2 cos 2pi u, sqrt2 sin 2pi u, ...
    NaturalCubicBSpline,   // constant + centered natural cubic spline columns
};

class BasisSet {
  public:
    static BasisSet constant();
    static BasisSet raw_polynomial(int size);
    static BasisSet orthogonal_polynomial(int size);
    static BasisSet legendre_symmetric(int size);
    static BasisSet fourier(int size);
    /// Natural cubic spline with size-2 equally spaced interior knots.
    static BasisSet natural_cubic_spline(int size);
    /// Natural cubic spline with explicit interior knots (strictly
    /// increasing, strictly inside (0,1)); size = knots.size() + 2.
    static BasisSet natural_cubic_spline(std::vector<double> interior_knots);
    static BasisSet make(BasisKind kind, int size, std::vector<double> knots = {});

    BasisKind kind() const { return kind_; }
    int size() const { return size_; }
    const std::vector<double>& knots() const { return knots_; }

    /// w(u), a vector of `size` values with component 0 equal to 1.
    /// Throws DomainError when u is outside [0,1].
    Eigen::VectorXd eval(double u) const;

  private:
    BasisSet(BasisKind kind, int size, std::vector<double> knots);

    BasisKind kind_;
    int size_;
    std::vector<double> knots_;    // interior knots, spline kind only
    std::vector<double> centers_;  // spline column means over [0,1]
};

/// Spec-level operation name for BasisSet::eval.
inline Eigen::VectorXd eval_basis(const BasisSet& basis, double u) {
    return basis.eval(u);
}

/// Link functions g mapping a constrained parameter range to the real line.
enum class LinkKind {
    Log,               // g(x) = log x,              range (0, inf)
    ShiftedLogitPacf,  // g(x) = logit((x+1)/2),     range (-1, 1)
    ShiftedLogitFd,    // g(x) = logit(x + 1/2),     range (-1/2, 1/2)
};

class LinkFunction {
  public:
    explicit LinkFunction(LinkKind kind) : kind_(kind) {}

    LinkKind kind() const { return kind_; }

    double forward(double theta) const;        // g(theta)
    double inverse(double eta) const;          // h(eta) = g^{-1}(eta)
    double inverse_deriv(double eta) const;    // h'(eta), analytic

    double range_min() const;
    double range_max() const;
    /// True when theta lies strictly inside the link range.
    bool in_range(double theta) const;

  private:
    LinkKind kind_;
};

/// One time-varying parameter curve theta(u) = h(w'(u) beta).
class ParameterCurveSpec {
  public:
    ParameterCurveSpec(BasisSet basis, LinkFunction link, Eigen::VectorXd coefficients);

    const BasisSet& basis() const { return basis_; }
    const LinkFunction& link() const { return link_; }
    const Eigen::VectorXd& coefficients() const { return coefficients_; }
    int size() const { return basis_.size(); }

    /// eta(u) = w'(u) beta.
    double linear_predictor(double u) const;
    /// theta(u) = h(eta(u)).
    double value(double u) const;
    /// h'(eta(u)), the delta-method factor.
    double value_deriv_eta(double u) const;
    /// d theta(u) / d beta = h'(eta(u)) w(u).
    Eigen::VectorXd gradient(double u) const;

    ParameterCurveSpec with_coefficients(Eigen::VectorXd beta) const;

  private:
    BasisSet basis_;
    LinkFunction link_;
    Eigen::VectorXd coefficients_;
};

/// Spec-level operation names.
inline double eval_curve(const ParameterCurveSpec& spec, double u) {
    return spec.value(u);
}
inline Eigen::VectorXd curve_gradient(const ParameterCurveSpec& spec, double u) {
    return spec.gradient(u);
}

}  // namespace lsb
