#include "occtime/model.hpp"

#include <cmath>
#include <stdexcept>

namespace occtime {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

ModelParams validate(const ModelParams& raw) {
    require(std::isfinite(raw.r) && std::isfinite(raw.mu) && std::isfinite(raw.sigma) &&
                std::isfinite(raw.c) && std::isfinite(raw.lambda) && std::isfinite(raw.L),
            "parameters must be finite");
    require(raw.sigma > 0.0, "sigma must be positive");
    require(raw.c > 0.0, "c must be positive");
    require(raw.lambda > 0.0, "lambda must be positive");
    require(raw.L > 0.0, "L must be positive");
    require(raw.r >= 0.0, "r must be non-negative");
    require(raw.r > 0.0, "safe level undefined: r must be positive");
    require(raw.mu > raw.r, "mu must exceed r");
    return raw;
}

MarketConstants constants(const ModelParams& params) {
    MarketConstants k;
    const double sharpe = (params.mu - params.r) / params.sigma;
    k.delta = 0.5 * sharpe * sharpe;
    const double b = params.r - params.lambda + k.delta;
    const double disc = std::sqrt(b * b + 4.0 * k.delta * params.lambda);
    // Take the root without cancellation first, then recover the other from
    // the product B1 * B2 = -lambda / delta.
    if (b >= 0.0) {
        k.B1 = (b + disc) / (2.0 * k.delta);
        k.B2 = -params.lambda / (k.delta * k.B1);
    } else {
        k.B2 = (b - disc) / (2.0 * k.delta);
        k.B1 = -params.lambda / (k.delta * k.B2);
    }
    k.p = k.B1 / (k.B1 - 1.0);
    k.safe_level = params.safe_level();
    return k;
}

double characteristic(const ModelParams& params, double delta, double B) {
    return delta * B * B - (params.r - params.lambda + delta) * B - params.lambda;
}

}  // namespace occtime
