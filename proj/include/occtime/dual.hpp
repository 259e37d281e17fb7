#pragma once

#include <optional>

#include "occtime/fbp.hpp"

namespace occtime {

/// Which one-sided limit to take at w = 0, where m'' and the optimal
/// allocation jump. `below` is w -> 0-, `above` is w -> 0+.
enum class Side { below, above };

/// Primal quantities at one wealth level.
struct ValuePoint {
    double w = 0.0;
    double y = 0.0;   // dual variable, -m'(w)
    double m = 0.0;   // minimum expected occupation time in years (a = 0)
    double m1 = 0.0;  // m'(w)
    double m2 = 0.0;  // m''(w)
    double m3 = 0.0;  // m'''(w)
    double pi_star = 0.0;
    double pi_ruin = 0.0;
};

/// Coefficient of the positive-wealth branch m(w) = beta (c/r - w)^p.
double beta_L(const FbpSolution& sol);

/// y = I(w) solving mhat'(y) = w, for w in [-L, c/r].
double invert(const FbpSolution& sol, double w);

/// M_L(w, a) = m(w) + a on the whole real line; throws for a < 0.
double value(const FbpSolution& sol, double w, double a = 0.0);

/// Optimal risky allocation on (-L, c/r). At w == 0 a side must be given.
double pi_star(const FbpSolution& sol, double w, std::optional<Side> side = std::nullopt);

/// Allocation minimizing the probability of lifetime ruin; zero at and above c/r.
double pi_ruin(const MarketConstants& k, const ModelParams& params, double w);

/// Full primal point on [-L, c/r]. Needs a side at w == 0 for m2, m3 and pi_star.
ValuePoint evaluate(const FbpSolution& sol, double w, std::optional<Side> side = std::nullopt);

}  // namespace occtime
