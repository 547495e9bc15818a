#include "lsb/stationarity.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

namespace lsb {

double chisq_sf(double x, int df) {
    if (x < 0.0) throw DomainError("chi-squared statistic must be nonnegative");
    if (df < 1) throw DomainError("degrees of freedom must be positive");
    return boost::math::gamma_q(df / 2.0, x / 2.0);
}

TestResult test_stationarity(const LsbModelSpec& tmpl, const Eigen::VectorXd& x,
                             const FitConfig& cfg) {
    const int b = tmpl.coefficient_count();
    const int J = tmpl.curve_count();
    if (b <= J) throw SpecError("stationarity test needs at least one non-constant coefficient");
    const int T = static_cast<int>(x.size());

    // The restricted model (slopes pinned to zero) evaluates identically to
    // the constant-basis submodel, so fit that directly over J intercepts.
    const LsbModelSpec sub = stationary_submodel(tmpl);
    FitConfig rcfg = cfg;
    rcfg.start.reset();
    TestResult result;
    result.restricted = fit_model(sub, x, rcfg);

    FitConfig fcfg = cfg;
    fcfg.start = embed_intercepts(tmpl, result.restricted.model.pack());
    result.full = fit_model(tmpl, x, fcfg);

    const double lambda = 2.0 * T * (result.restricted.nll - result.full.nll);
    if (lambda < -1e-6) {
        throw Error("optimization failure: restricted fit beat the full fit by " +
                    std::to_string(-lambda));
    }
    result.lambda = std::max(lambda, 0.0);
    result.df = b - J;
    result.p_value = chisq_sf(result.lambda, result.df);
    result.converged = result.restricted.optim.converged && result.full.optim.converged;
    return result;
}

}  // namespace lsb
