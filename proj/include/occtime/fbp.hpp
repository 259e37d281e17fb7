#pragma once

#include <optional>

#include "occtime/model.hpp"
#include "occtime/roots.hpp"

namespace occtime {

/// Which closed-form piece of mhat to use at the free boundary y0, where the
/// second derivative is double-valued. `inner` is [0, y0], `outer` is (y0, yL].
enum class Region { inner, outer };

/// Closed-form solution of the dual free-boundary problem on [0, yL].
struct FbpSolution {
    ModelParams params;
    MarketConstants k;
    double rho = 0.0;  // y0 / yL
    double y0 = 0.0;
    double yL = 0.0;
    double D1 = 0.0;  // coefficient of y^B1 on [0, y0]
    double d1 = 0.0;  // coefficients of y^B1, y^B2 on (y0, yL]
    double d2 = 0.0;
};

struct MhatDerivs {
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;
};

/// Right-hand side of the boundary-ratio equation; strictly increasing on (0, 1]
/// with value exactly 1 at rho = 1.
double ratio_rhs(const MarketConstants& k, double rho);

/// Solves ratio_rhs(rho) = c / (c + r L) for rho in (0, 1).
double solve_ratio(const MarketConstants& k, const ModelParams& params, const BracketOptions& opt = {});

/// Builds the full solution from the boundary ratio. Throws RootError when the
/// value-matching denominator is not positive.
FbpSolution solve_boundaries(double rho, const MarketConstants& k, const ModelParams& params);

/// validate + constants + solve_ratio + solve_boundaries.
FbpSolution solve_fbp(const ModelParams& params);

/// mhat on [0, yL]; throws std::domain_error outside.
double mhat(const FbpSolution& sol, double y);
/// Evaluates one region's formula regardless of where y lies.
double mhat_region(const FbpSolution& sol, double y, Region region);

/// First three derivatives of mhat on (0, yL]. At y == y0 a region must be given.
MhatDerivs mhat_derivs(const FbpSolution& sol, double y, std::optional<Region> side = std::nullopt);
MhatDerivs mhat_derivs_region(const FbpSolution& sol, double y, Region region);

/// min((c/r) y, 1/lambda - L y): the tangent envelope of mhat.
double upper_envelope(const FbpSolution& sol, double y);

/// lambda mhat - (lambda - r) y mhat' - delta y^2 mhat'' - c y - 1{y > y0}.
double dual_ode_residual(const FbpSolution& sol, double y, std::optional<Region> side = std::nullopt);

}  // namespace occtime
