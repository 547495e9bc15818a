#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "lsb/basis_curves.hpp"
#include "lsb/errors.hpp"

namespace lsb {

/// Model families. Curve layout:
///   WhiteNoise: {scale}
///   Ar(p):      {pacf_1, ..., pacf_p, scale}
///   Exp(p):     {cepstral_1, ..., cepstral_p, scale}
///   Fd:         {lrd, scale}
/// Scale and cepstral curves use the Log link, partial autocorrelation
/// curves the (-1,1) shifted logit, and the long-range-dependence curve
/// the (-1/2,1/2) shifted logit.
enum class Family { WhiteNoise, Ar, Exp, Fd };

std::string family_name(Family f);

class LsbModelSpec {
  public:
    LsbModelSpec(Family family, int order, std::vector<ParameterCurveSpec> curves);

    static LsbModelSpec white_noise(ParameterCurveSpec scale);
    static LsbModelSpec ar(std::vector<ParameterCurveSpec> pacf, ParameterCurveSpec scale);
    static LsbModelSpec exponential(std::vector<ParameterCurveSpec> cepstral,
                                    ParameterCurveSpec scale);
    static LsbModelSpec fd(ParameterCurveSpec lrd, ParameterCurveSpec scale);

    Family family() const { return family_; }
    int order() const { return order_; }                 // p (0 for WhiteNoise/Fd)
    int curve_count() const { return static_cast<int>(curves_.size()); }  // J
    const std::vector<ParameterCurveSpec>& curves() const { return curves_; }
    const ParameterCurveSpec& curve(int j) const { return curves_.at(j); }
    const ParameterCurveSpec& scale_curve() const { return curves_.back(); }

    /// Total coefficient count b.
    int coefficient_count() const;
    /// (offset, length) of curve j inside the flat coefficient vector.
    std::pair<int, int> curve_slice(int j) const;
    /// Flat coefficient vector beta (curve coefficients concatenated).
    Eigen::VectorXd pack() const;
    /// Same structure with coefficients replaced by the flat vector.
    LsbModelSpec with_coefficients(const Eigen::VectorXd& beta) const;

    double sigma(double u) const { return scale_curve().value(u); }
    /// Long-range-dependence exponent delta(u); Fd family only.
    double lrd(double u) const;
    /// Partial autocorrelation curve values at u (Ar family, length p).
    Eigen::VectorXd pacf(double u) const;
    /// Cepstral curve values at u (Exp family, length p).
    Eigen::VectorXd cepstral(double u) const;

  private:
    Family family_;
    int order_;
    std::vector<ParameterCurveSpec> curves_;
};

/// Levinson-Durbin step-up: map partial autocorrelations (each in (-1,1))
/// to the order-p autoregressive coefficients. The result is always causal.
Eigen::VectorXd pacf_to_ar(const Eigen::VectorXd& pacf);

/// Model structure frozen at one rescaled time u; cheap to evaluate over a
/// frequency grid. theta holds the non-scale curve values at u.
struct LocalModel {
    Family family = Family::WhiteNoise;
    double sigma = 1.0;
    Eigen::VectorXd theta;    // pacf | cepstral | {delta}; empty for WhiteNoise
    Eigen::VectorXd ar_coef;  // stepped-up AR coefficients (Ar family only)

    std::complex<double> transfer(double lambda) const;
    double sdf(double lambda) const;
    /// d log f / d theta_j at lambda, one entry per curve (scale last,
    /// d log f / d sigma = 2/sigma).
    Eigen::VectorXd dlog_sdf(double lambda) const;

    /// d ar_coef / d pacf, filled on first use (not shareable across threads).
    const Eigen::MatrixXd& ar_jacobian() const;

  private:
    mutable Eigen::MatrixXd ar_jac_;
    mutable bool ar_jac_ready_ = false;
};

/// Time-varying spectral field f(u, lambda; beta) = |A(u, lambda; beta)|^2
/// with per-u caching for repeated grid sweeps.
class SpectralField {
  public:
    explicit SpectralField(const LsbModelSpec& model) : model_(&model) {}

    const LsbModelSpec& model() const { return *model_; }
    /// Curve values frozen at u (cached for the most recently used u).
    const LocalModel& local(double u) const;
    /// Basis vector w_j(u) of curve j, from the same cache.
    const Eigen::VectorXd& basis_at(double u, int j) const;
    /// h'_j(eta_j(u)).
    double hprime_at(double u, int j) const;

    std::complex<double> transfer(double u, double lambda) const;
    double sdf(double u, double lambda) const;
    /// d log f / d beta at (u, lambda), length b, assembled by the chain
    /// rule through the links and bases.
    Eigen::VectorXd grad_log_sdf(double u, double lambda) const;

  private:
    void refresh(double u) const;

    const LsbModelSpec* model_;
    mutable bool cache_valid_ = false;
    mutable double cache_u_ = -1.0;
    mutable LocalModel cache_local_;
    mutable std::vector<double> cache_hprime_;
    mutable std::vector<Eigen::VectorXd> cache_w_;
};

LocalModel local_model_at(const LsbModelSpec& model, double u);

std::complex<double> transfer(const LsbModelSpec& model, double u, double lambda);
double sdf(const LsbModelSpec& model, double u, double lambda);

/// Local autocovariance c(u, h) = int f(u, lambda) e^{i h lambda} dlambda,
/// via the family closed form (quadrature for the Exp family).
double local_acvf(const LsbModelSpec& model, double u, int h);
/// Lags 0..hmax at once; this is the likelihood hot path.
Eigen::VectorXd local_acvf_row(const LsbModelSpec& model, double u, int hmax);

/// Reference midpoint-rule evaluation of the covariance integral.
/// grid_size must be a power of two >= 4096.
double acvf_quadrature_oracle(const LsbModelSpec& model, double u, int h, int grid_size);

struct ConditionReport {
    std::string name;
    bool pass = true;
    double margin = 0.0;  // distance to the boundary of the valid region
};

struct ValidityReport {
    bool pass = true;
    /// Smallest margins are informative even when all conditions pass.
    std::vector<ConditionReport> conditions;
    bool well_conditioned = true;  // every margin >= 1e-8
};

/// Check causality / parameter-range / positive-scale conditions on a
/// 512-point u grid and report the minimum margins.
ValidityReport validate(const LsbModelSpec& model);

/// The order-2 autoregressive example model: two partial autocorrelation
/// curves on the (1, u, u^2 - 1/3) basis with coefficients
/// (0.61, 1.71, -1.27) and (-3.52, 5.50, -3.00), unit innovation scale.
LsbModelSpec paper_ar2_preset();

}  // namespace lsb
