#pragma once

#include "occtime/fbp.hpp"
#include "occtime/props.hpp"

namespace occtime {

/// Values at c/r and -L, mhat(0) = 0, mhat'(y0) = 0, mhat'(yL) = -L and
/// mhat(yL) = 1/lambda - L yL, each within 1e-12 relative.
PropReport check_boundaries(const FbpSolution& sol);

/// Primal HJB residual of the closed form at interior points (1e-8 relative),
/// together with value matching and smooth fit at w = 0 and the value at -L.
PropReport check_hjb_residual(const FbpSolution& sol, int n_points = 2000);

/// Finite-difference policy iteration against the closed form (1e-4 years).
PropReport check_hjb_oracle(const ModelParams& params, int n_nodes = 4000);

/// m(w) = mhat(I(w)) - w I(w) within 1e-10 and m'' mhat'' = -1 within 1e-8,
/// with m'' taken from the power form for w > 0 and from the HJB for w < 0.
PropReport check_legendre(const FbpSolution& sol, int n_points = 500);

}  // namespace occtime
