#include "lsb/fitting.hpp"

#include <cmath>
#include <memory>

namespace lsb {

Objective make_objective(const LsbModelSpec& tmpl, const Eigen::VectorXd& x,
                         const FitConfig& cfg) {
    const double inf = std::numeric_limits<double>::infinity();
    if (cfg.likelihood == LikelihoodKind::Exact) {
        const ExactLikConfig ecfg = cfg.exact;
        return [tmpl, x, ecfg, inf](const Eigen::VectorXd& beta) {
            try {
                const double v = exact_nll(tmpl.with_coefficients(beta), x, ecfg);
                return std::isfinite(v) ? v : inf;
            } catch (const Error&) {
                return inf;
            }
        };
    }
    const WhittleConfig wcfg =
        cfg.whittle ? *cfg.whittle : default_blocks(static_cast<int>(x.size()));
    auto evaluator = std::make_shared<WhittleEvaluator>(x, wcfg);
    return [tmpl, evaluator, inf](const Eigen::VectorXd& beta) {
        try {
            const double v = evaluator->nll(tmpl.with_coefficients(beta));
            return std::isfinite(v) ? v : inf;
        } catch (const Error&) {
            return inf;
        }
    };
}

double evaluate_nll(const LsbModelSpec& model, const Eigen::VectorXd& x, const FitConfig& cfg) {
    if (cfg.likelihood == LikelihoodKind::Exact) {
        return exact_nll(model, x, cfg.exact);
    }
    const WhittleConfig wcfg =
        cfg.whittle ? *cfg.whittle : default_blocks(static_cast<int>(x.size()));
    return whittle_nll(model, x, wcfg);
}

FitResult fit_model(const LsbModelSpec& tmpl, const Eigen::VectorXd& x, const FitConfig& cfg) {
    const Objective objective = make_objective(tmpl, x, cfg);
    const Eigen::VectorXd beta0 = cfg.start ? *cfg.start : default_start(tmpl, x);
    if (beta0.size() != tmpl.coefficient_count()) {
        throw SpecError("starting vector has the wrong length");
    }
    const OptimResult opt = minimize(objective, beta0, cfg.optim);
    FitResult out{tmpl.with_coefficients(opt.beta), cfg.likelihood, opt.value, opt,
                  static_cast<int>(x.size())};
    return out;
}

LsbModelSpec stationary_submodel(const LsbModelSpec& tmpl) {
    std::vector<ParameterCurveSpec> curves;
    curves.reserve(tmpl.curve_count());
    for (const auto& c : tmpl.curves()) {
        Eigen::VectorXd b(1);
        b << c.coefficients()(0);
        curves.emplace_back(BasisSet::constant(), c.link(), b);
    }
    return LsbModelSpec(tmpl.family(), tmpl.order(), std::move(curves));
}

Eigen::VectorXd embed_intercepts(const LsbModelSpec& tmpl, const Eigen::VectorXd& intercepts) {
    if (intercepts.size() != tmpl.curve_count()) {
        throw SpecError("need one intercept per curve");
    }
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(tmpl.coefficient_count());
    for (int j = 0; j < tmpl.curve_count(); ++j) {
        beta(tmpl.curve_slice(j).first) = intercepts(j);
    }
    return beta;
}

}  // namespace lsb
