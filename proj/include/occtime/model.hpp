#pragma once

#include <string>

namespace occtime {

/// Market and mortality inputs. All rates are annualized continuous rates.
struct ModelParams {
    double r = 0.0;       // riskless rate
    double mu = 0.0;      // risky drift
    double sigma = 0.0;   // risky volatility
    double c = 0.0;       // net consumption rate
    double lambda = 0.0;  // mortality hazard rate
    double L = 0.0;       // ruin cutoff depth (wealth units)

    double safe_level() const { return c / r; }
    /// (mu - r) / sigma^2, the Merton-style leverage factor in every feedback rule.
    double leverage() const { return (mu - r) / (sigma * sigma); }
};

/// Quantities derived from ModelParams that every closed-form expression uses.
struct MarketConstants {
    double delta = 0.0;  // half squared Sharpe ratio
    double B1 = 0.0;     // positive root of delta B^2 - (r - lambda + delta) B - lambda = 0
    double B2 = 0.0;     // negative root
    double p = 0.0;      // B1 / (B1 - 1)
    double safe_level = 0.0;
};

/// Returns params unchanged when every model assumption holds; otherwise throws
/// std::invalid_argument naming the first violated constraint.
ModelParams validate(const ModelParams& raw);

MarketConstants constants(const ModelParams& params);

/// Residual of the characteristic quadratic at B.
double characteristic(const ModelParams& params, double delta, double B);

/// The canonical parameter set used throughout tests and the README.
inline ModelParams canonical_params() { return {0.02, 0.06, 0.20, 1.0, 0.04, 10.0}; }

}  // namespace occtime
