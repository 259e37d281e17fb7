#include "occtime/penalty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "occtime/roots.hpp"

namespace occtime {

void validate(const StepPenalty& f, const ModelParams& params) {
    if (f.thresholds.empty()) throw std::invalid_argument("penalty: at least one threshold required");
    if (f.levels.size() != f.thresholds.size()) throw std::invalid_argument("penalty: one level per threshold required");
    for (std::size_t k = 0; k < f.thresholds.size(); ++k) {
        const double w = f.thresholds[k], v = f.levels[k];
        if (!std::isfinite(w) || !std::isfinite(v)) throw std::invalid_argument("penalty: values must be finite");
        if (!(w <= 0.0 && w > -params.L)) throw std::invalid_argument("penalty: thresholds must lie in (-L, 0]");
        if (k > 0 && !(w < f.thresholds[k - 1])) throw std::invalid_argument("penalty: thresholds must strictly decrease");
        if (!(v >= 0.0)) throw std::invalid_argument("penalty: levels must be non-negative");
        if (k > 0 && !(v >= f.levels[k - 1])) throw std::invalid_argument("penalty: levels must not decrease as wealth falls");
    }
}


namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double d1_of(const MarketConstants& k, double A, double C, double y) {
    return k.B1 * A * std::pow(y, k.B1 - 1.0) + k.B2 * C * std::pow(y, k.B2 - 1.0) + k.safe_level;
}

/// Largest y below `top` where mhat' on the segment reaches `target`, marching
/// inward; NaN if mhat' stops increasing or never gets there.
double march(const MarketConstants& k, double A, double C, double top, double target) {
    auto g = [&](double y) { return d1_of(k, A, C, y) - target; };
    double hi = top, g_hi = g(top);
    for (int j = 0; j < 4000; ++j) {
        const double lo = hi * 0.98;
        const double g_lo = g(lo);
        if (!(g_lo >= g_hi)) return kNaN;
        if (g_lo >= 0.0) {
            BracketOptions opt;
            opt.width_tol = 1e-16 * hi;
            return bisect_secant(g, lo, hi, opt).x;
        }
        hi = lo;
        g_hi = g_lo;
    }
    return kNaN;
}

/// Builds every segment from the terminal conditions at yL inward. Returns the
/// y^B2 coefficient of the innermost segment scaled by y_1^B2 (zero at the
/// solution) or NaN when the march fails.
double shoot(MultiFbpSolution& s, double yL) {
    const MarketConstants& k = s.k;
    const std::size_t K = s.penalty.size();
    const double B1 = k.B1, B2 = k.B2, S = k.safe_level + s.params.L;
    s.A.assign(K + 1, 0.0);
    s.C.assign(K + 1, 0.0);
    s.bounds.assign(K + 2, 0.0);
    s.bounds[K + 1] = yL;
    double a = -S * yL * (1.0 - B2) / (B1 - B2);  // A y^B1 at the current bound
    double b = -S * yL * (B1 - 1.0) / (B1 - B2);  // C y^B2
    s.A[K] = a / std::pow(yL, B1);
    s.C[K] = b / std::pow(yL, B2);
    for (std::size_t seg = K; seg >= 1; --seg) {
        const double y = march(k, s.A[seg], s.C[seg], s.bounds[seg + 1], s.penalty.thresholds[seg - 1]);
        if (!(y > 0.0)) return kNaN;
        s.bounds[seg] = y;
        const double V = s.A[seg] * std::pow(y, B1) + s.C[seg] * std::pow(y, B2) +
                         (s.level(seg) - s.level(seg - 1)) / s.params.lambda;
        const double D = B1 * s.A[seg] * std::pow(y, B1) + B2 * s.C[seg] * std::pow(y, B2);
        a = (D - B2 * V) / (B1 - B2);
        b = (B1 * V - D) / (B1 - B2);
        s.A[seg - 1] = a / std::pow(y, B1);
        s.C[seg - 1] = b / std::pow(y, B2);
    }
    return b;
}

}  // namespace

double MultiFbpSolution::wealth_top(std::size_t seg) const {
    if (seg == 0) return k.safe_level;
    if (seg > penalty.size()) return -params.L;
    return penalty.thresholds[seg - 1];
}

MultiFbpSolution solve_penalized(const ModelParams& params, const StepPenalty& penalty) {
    MultiFbpSolution s;
    s.params = validate(params);
    validate(penalty, s.params);
    s.k = constants(s.params);
    s.penalty = penalty;
    if (penalty.terminal() == 0.0) {
        s.trivial = true;
        return s;
    }
    const double S = s.k.safe_level + s.params.L;
    // Concavity with mhat(0) = 0 and mhat'(0) = c/r forces f(-L)/lambda <= S yL.
    const double floor = penalty.terminal() / (s.params.lambda * S);
    double lo = kNaN, r_lo = kNaN, hi = kNaN, r_hi = kNaN;
    double prev = kNaN, r_prev = kNaN;
    for (int j = 1; j <= 3000; ++j) {
        const double y = floor * std::pow(1.02, j);
        const double r = shoot(s, y);
        if (std::isfinite(r) && std::isfinite(r_prev) && (r < 0.0) != (r_prev < 0.0)) {
            lo = prev, r_lo = r_prev, hi = y, r_hi = r;
            break;
        }
        if (std::isfinite(r)) {
            prev = y;
            r_prev = r;
        }
    }
    if (!std::isfinite(lo)) {
        throw RootError("solve_penalized: no sign change of the inner coefficient for yL in [" +
                        std::to_string(floor) + ", " + std::to_string(floor * std::pow(1.02, 3000)) + "]");
    }
    BracketOptions opt;
    opt.width_tol = 1e-16 * hi;
    auto f = [&](double y) {
        const double r = shoot(s, y);
        if (!std::isfinite(r)) {
            throw RootError("solve_penalized: march failed inside bracket [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "] at yL = " + std::to_string(y) + " (f(lo)=" +
                            std::to_string(r_lo) + ", f(hi)=" + std::to_string(r_hi) + ")");
        }
        return r;
    };
    const RootResult root = bisect_secant(f, lo, hi, opt);
    s.shooting_bisections = root.bisections;
    shoot(s, root.x);
    s.yL = root.x;
    // The innermost segment is bounded at 0 only through this coefficient.
    s.C[0] = 0.0;
    for (std::size_t seg = 0; seg < s.segments(); ++seg) {
        const double y_mid = 0.5 * (s.bounds[seg] + s.bounds[seg + 1]);
        if (!(mhat_derivs_penalized(s, y_mid, seg).d2 < 0.0)) {
            throw RootError("solve_penalized: mhat not concave on segment " + std::to_string(seg));
        }
    }
    return s;
}

double mhat_penalized(const MultiFbpSolution& s, double y, std::size_t seg) {
    if (s.trivial) return -s.params.L * y;
    double v = s.A[seg] * std::pow(y, s.k.B1) + s.k.safe_level * y + s.level(seg) / s.params.lambda;
    if (s.C[seg] != 0.0) v += s.C[seg] * std::pow(y, s.k.B2);
    return v;
}

PenalizedDerivs mhat_derivs_penalized(const MultiFbpSolution& s, double y, std::size_t seg) {
    const double B1 = s.k.B1, B2 = s.k.B2;
    PenalizedDerivs d;
    d.d1 = B1 * s.A[seg] * std::pow(y, B1 - 1.0) + s.k.safe_level;
    d.d2 = B1 * (B1 - 1.0) * s.A[seg] * std::pow(y, B1 - 2.0);
    if (s.C[seg] != 0.0) {
        d.d1 += B2 * s.C[seg] * std::pow(y, B2 - 1.0);
        d.d2 += B2 * (B2 - 1.0) * s.C[seg] * std::pow(y, B2 - 2.0);
    }
    return d;
}

std::size_t segment_of(const MultiFbpSolution& s, double w, bool below) {
    std::size_t seg = 0;
    const auto& t = s.penalty.thresholds;
    while (seg < t.size() && w < t[seg]) ++seg;
    if (below && seg < t.size() && w == t[seg]) ++seg;
    return seg;
}

double invert_penalized(const MultiFbpSolution& s, double w) {
    if (s.trivial) throw std::domain_error("invert_penalized: the zero penalty has no dual solution");
    if (!(w >= -s.params.L && w <= s.k.safe_level)) throw std::domain_error("invert_penalized: w outside [-L, c/r]");
    if (w == s.k.safe_level) return 0.0;
    if (w == -s.params.L) return s.yL;
    const std::size_t seg = segment_of(s, w);
    if (w == s.wealth_top(seg)) return s.bounds[seg];
    const double lo = seg == 0 ? 0.0 : s.bounds[seg], hi = s.bounds[seg + 1];
    auto f = [&](double y) { return mhat_derivs_penalized(s, y, seg).d1 - w; };
    if (seg == 0) {
        // Closed form on the innermost segment.
        return std::pow((w - s.k.safe_level) / (s.k.B1 * s.A[0]), 1.0 / (s.k.B1 - 1.0));
    }
    if (f(lo) <= 0.0) return lo;
    if (f(hi) >= 0.0) return hi;
    BracketOptions opt;
    opt.width_tol = 1e-16 * hi;
    return bisect_secant(f, lo, hi, opt).x;
}

double value_penalized(const MultiFbpSolution& s, double w, double a) {
    if (!(a >= 0.0)) throw std::domain_error("value_penalized: accrued occupation time must be non-negative");
    if (w >= s.k.safe_level) return a;
    if (w <= -s.params.L) return a + s.penalty.terminal() / s.params.lambda;
    if (s.trivial) return a;
    const double y = invert_penalized(s, w);
    return a + mhat_penalized(s, y, segment_of(s, w)) - w * y;
}

double pi_penalized(const MultiFbpSolution& s, double w, std::optional<Side> side) {
    if (!(w > -s.params.L && w < s.k.safe_level)) throw std::domain_error("pi_penalized: w outside (-L, c/r)");
    if (s.trivial) return 0.0;
    const auto& t = s.penalty.thresholds;
    const bool at_threshold = std::find(t.begin(), t.end(), w) != t.end();
    if (at_threshold && !side) throw std::domain_error("pi_penalized: w is a threshold; a side is required");
    const std::size_t seg = segment_of(s, w, at_threshold && *side == Side::below);
    const double y = invert_penalized(s, w);
    return -s.params.leverage() * y * mhat_derivs_penalized(s, y, seg).d2;
}

Strategy penalized_strategy(const MultiFbpSolution& s, int nodes_per_piece) {
    if (s.trivial) return Strategy::zero();
    std::vector<double> knots{-s.params.L};
    for (auto it = s.penalty.thresholds.rbegin(); it != s.penalty.thresholds.rend(); ++it) knots.push_back(*it);
    knots.push_back(s.k.safe_level);
    const std::size_t K = s.penalty.size();
    const double lev = s.params.leverage();
    auto piece = [&s, K, lev](double w, std::size_t p) {
        // Knot piece p runs from the lower wealth end upward, i.e. segment K - p.
        const std::size_t seg = K - p;
        double y;
        if (w >= s.wealth_top(seg)) {
            y = s.bounds[seg];
        } else if (w <= s.wealth_top(seg + 1)) {
            y = s.bounds[seg + 1];
        } else {
            y = invert_penalized(s, w);
        }
        if (y == 0.0) return 0.0;
        return -lev * y * mhat_derivs_penalized(s, y, seg).d2;
    };
    return Strategy::tabulated("penalized", knots, piece, nodes_per_piece);
}

}  // namespace occtime
