#pragma once

#include <optional>

#include "lsb/likelihood.hpp"
#include "lsb/optimizer.hpp"

namespace lsb {

enum class LikelihoodKind { Exact, Whittle };

struct FitConfig {
    LikelihoodKind likelihood = LikelihoodKind::Exact;
    ExactLikConfig exact;
    /// Defaults to default_blocks(T) when unset.
    std::optional<WhittleConfig> whittle;
    OptimConfig optim;
    /// Starting coefficients; default_start(model, x) when unset.
    std::optional<Eigen::VectorXd> start;
};

struct FitResult {
    LsbModelSpec model;  // template with estimated coefficients
    LikelihoodKind likelihood = LikelihoodKind::Exact;
    double nll = 0.0;    // normalized objective at the estimate
    OptimResult optim;
    int sample_size = 0;
};

/// The selected objective as a function of the flat coefficient vector.
/// Invalid or numerically degenerate coefficients evaluate to +infinity so
/// the line search backs off.
Objective make_objective(const LsbModelSpec& tmpl, const Eigen::VectorXd& x,
                         const FitConfig& cfg);

/// Evaluate the configured likelihood at the template's own coefficients.
double evaluate_nll(const LsbModelSpec& model, const Eigen::VectorXd& x, const FitConfig& cfg);

/// Minimize the configured likelihood over all coefficients.
FitResult fit_model(const LsbModelSpec& tmpl, const Eigen::VectorXd& x, const FitConfig& cfg);

/// Same model with every curve collapsed to its constant basis column;
/// the coefficient vector shrinks to the J intercepts.
LsbModelSpec stationary_submodel(const LsbModelSpec& tmpl);

/// Embed intercept-only coefficients into the full template layout
/// (intercepts in place, every other coefficient zero).
Eigen::VectorXd embed_intercepts(const LsbModelSpec& tmpl, const Eigen::VectorXd& intercepts);

}  // namespace lsb
