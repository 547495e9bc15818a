#include "lsb/forecast.hpp"

#include <cmath>

#include "lsb/inference.hpp"
#include "lsb/levinson.hpp"
#include "lsb/likelihood.hpp"

namespace lsb {

Forecast forecast(const LsbModelSpec& model, const Eigen::VectorXd& x, int h,
                  std::optional<int> lookback, double level) {
    if (h < 1) throw SpecError("forecast horizon must be >= 1");
    if (!(level > 0.0 && level < 1.0)) throw SpecError("level must lie in (0,1)");
    const int T = static_cast<int>(x.size());
    if (T < 1) throw SpecError("forecast requires data");

    const bool markov = model.family() == Family::WhiteNoise || model.family() == Family::Ar;
    int s = lookback.value_or(markov ? model.order() : default_truncation(T));
    s = std::min(s, T);
    if (s < 0) throw SpecError("lookback must be nonnegative");

    const LocalPredictor lp = local_predictor(model, 1.0, s);
    const int len = static_cast<int>(lp.coeffs.size());

    Forecast out;
    out.horizon = h;
    out.point.resize(h);
    out.sd.resize(h);
    out.lower.resize(h);
    out.upper.resize(h);

    // Point forecasts: recent observations, then earlier forecasts.
    for (int i = 1; i <= h; ++i) {
        double pred = 0.0;
        for (int k = 1; k <= len; ++k) {
            const int idx = T + i - k;  // 1-based time index of the regressor
            const double value = idx >= T + 1 ? out.point(idx - T - 1) : x(idx - 1);
            pred += lp.coeffs(k - 1) * value;
        }
        out.point(i - 1) = pred;
    }

    // Prediction variance through the MA expansion of the frozen predictor.
    Eigen::VectorXd psi = Eigen::VectorXd::Zero(h);
    psi(0) = 1.0;
    for (int m = 1; m < h; ++m) {
        double acc = 0.0;
        for (int k = 1; k <= std::min(m, len); ++k) acc += lp.coeffs(k - 1) * psi(m - k);
        psi(m) = acc;
    }
    const double z = normal_quantile(0.5 + level / 2.0);
    double cum = 0.0;
    for (int i = 0; i < h; ++i) {
        cum += psi(i) * psi(i);
        out.sd(i) = std::sqrt(lp.pred_var * cum);
        out.lower(i) = out.point(i) - z * out.sd(i);
        out.upper(i) = out.point(i) + z * out.sd(i);
    }
    return out;
}

}  // namespace lsb
