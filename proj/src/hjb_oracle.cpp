#include "occtime/hjb_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "occtime/dual.hpp"

namespace occtime {

namespace {

struct Tridiag {
    std::vector<double> lower, diag, upper, rhs;
    explicit Tridiag(std::size_t n) : lower(n), diag(n), upper(n), rhs(n) {}
};

// Thomas algorithm; the system is an M-matrix so no pivoting is needed.
std::vector<double> thomas(Tridiag t) {
    const std::size_t n = t.diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double f = t.lower[i] / t.diag[i - 1];
        t.diag[i] -= f * t.upper[i - 1];
        t.rhs[i] -= f * t.rhs[i - 1];
    }
    std::vector<double> x(n);
    x[n - 1] = t.rhs[n - 1] / t.diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (t.rhs[i] - t.upper[i] * x[i + 1]) / t.diag[i];
    return x;
}

struct Stencil {
    double hm, hp;
};

struct Operator {
    const ModelParams& p;
    const std::vector<double>& w;
    bool central = true;

    Stencil stencil(std::size_t i) const { return {w[i] - w[i - 1], w[i + 1] - w[i]}; }
    double drift(std::size_t i, double pi) const { return p.r * w[i] - p.c + (p.mu - p.r) * pi; }
    std::size_t zero = SIZE_MAX;
    // Added to the second difference at the zero node so that it approximates
    // m''(0+) rather than the mean of the two one-sided values.
    double d2_shift = 0.0;

    double source(std::size_t i) const { return w[i] < 0.0 ? 1.0 : 0.0; }
    double diffusion(double pi) const { return 0.5 * p.sigma * p.sigma * pi * pi; }
    double shift(std::size_t i) const { return i == zero ? d2_shift : 0.0; }

    // Off-diagonal weights (both non-negative) of the generator at node i.
    // Central differencing for the drift wherever it keeps both weights
    // non-negative, one-sided in the drift direction otherwise.
    std::pair<double, double> weights(std::size_t i, double pi) const {
        const auto [hm, hp] = stencil(i);
        const double a = diffusion(pi);
        const double b = drift(i, pi);
        const double lo_diff = 2.0 * a / ((hm + hp) * hm);
        const double up_diff = 2.0 * a / ((hm + hp) * hp);
        const double lo_c = lo_diff - b / (hm + hp);
        const double up_c = up_diff + b / (hm + hp);
        if (central && lo_c >= 0.0 && up_c >= 0.0) return {lo_c, up_c};
        if (b > 0.0) return {lo_diff, up_diff + b / hp};
        return {lo_diff - b / hm, up_diff};
    }

    // Control-dependent part of the generator applied to m at node i.
    double hamiltonian(std::size_t i, double pi, const std::vector<double>& m) const {
        const auto [lo, up] = weights(i, pi);
        return lo * (m[i - 1] - m[i]) + up * (m[i + 1] - m[i]) + diffusion(pi) * shift(i);
    }

    // Lagged jump of m'' across zero, from the HJB equation on each side with
    // the optimal control: m''(0+-) = -delta m'^2 / (lambda m - s +- c m').
    void update_shift(const std::vector<double>& m) {
        const std::size_t i = zero;
        const auto [hm, hp] = stencil(i);
        const double m1 = (m[i + 1] - m[i - 1]) / (hm + hp);
        const double delta = 0.5 * std::pow((p.mu - p.r) / p.sigma, 2);
        const double above = -delta * m1 * m1 / (p.lambda * m[i] + p.c * m1);
        const double below = -delta * m1 * m1 / (p.lambda * m[i] - 1.0 + p.c * m1);
        if (!(above > 0.0 && below > 0.0)) {
            d2_shift = 0.0;
            return;
        }
        d2_shift = (above - below) * hm / (hm + hp);
    }
};

GridSolution solve_policy(const Operator& op, const std::vector<double>& policy, bool& m_matrix) {
    const std::size_t nodes = op.w.size();
    const std::size_t n = nodes - 2;
    Tridiag t(n);
    const double left = 1.0 / op.p.lambda, right = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i = k + 1;
        const auto [lo, up] = op.weights(i, policy[i]);
        if (!(lo >= 0.0 && up >= 0.0)) m_matrix = false;
        t.diag[k] = op.p.lambda + lo + up;
        t.lower[k] = -lo;
        t.upper[k] = -up;
        t.rhs[k] = op.source(i) + op.diffusion(policy[i]) * op.shift(i);
        if (k == 0) t.rhs[k] += lo * left;
        if (k == n - 1) t.rhs[k] += up * right;
    }
    const std::vector<double> interior = thomas(std::move(t));
    GridSolution g;
    g.w = op.w;
    g.values.resize(nodes);
    g.values.front() = left;
    g.values.back() = right;
    std::copy(interior.begin(), interior.end(), g.values.begin() + 1);
    g.policies = policy;
    g.policies.front() = g.policies.back() = 0.0;
    return g;
}

// Exact minimizer of the discrete Hamiltonian over [0, cap] at node i; the
// previous control survives unless a candidate strictly improves on it. Where
// the second difference is not positive only the endpoints can win.
double improve(const Operator& op, std::size_t i, const std::vector<double>& m, double previous, double cap) {
    const auto [hm, hp] = op.stencil(i);
    const double d2 = 2.0 / (hm + hp) * ((m[i + 1] - m[i]) / hp - (m[i] - m[i - 1]) / hm) + op.shift(i);
    std::vector<double> candidates = {0.0, cap};
    if (d2 > 0.0) {
        const double excess = op.p.mu - op.p.r;
        const double var = op.p.sigma * op.p.sigma;
        const double turn = std::clamp((op.p.c - op.p.r * op.w[i]) / excess, 0.0, cap);  // drift changes sign
        const double forward = -excess * ((m[i + 1] - m[i]) / hp) / (var * d2);
        const double backward = -excess * ((m[i] - m[i - 1]) / hm) / (var * d2);
        const double centered = -excess * ((m[i + 1] - m[i - 1]) / (hm + hp)) / (var * d2);
        candidates.insert(candidates.end(), {std::clamp(centered, 0.0, cap), turn, std::clamp(forward, turn, cap),
                                             std::clamp(backward, 0.0, turn)});
    }
    double best = previous;
    double best_h = op.hamiltonian(i, previous, m);
    for (double pi : candidates) {
        const double h = op.hamiltonian(i, pi, m);
        if (h < best_h - 1e-15 * std::abs(best_h)) {
            best_h = h;
            best = pi;
        }
    }
    return best;
}

}  // namespace

double policy_cap(const ModelParams& p) { return 50.0 * p.leverage() * (p.safe_level() + p.L); }

std::vector<double> make_grid(const ModelParams& params, const GridSpec& spec, int* zero_index) {
    if (spec.n < 100) throw std::invalid_argument("grid: n must be at least 100");
    const double L = params.L, cr = params.safe_level();
    const int intervals = spec.n + 1;
    int i0 = static_cast<int>(std::lround(intervals * L / (L + cr)));
    i0 = std::clamp(i0, 1, intervals - 1);
    const double h_neg = L / i0;
    const double h_pos = cr / (intervals - i0);
    std::vector<double> w(intervals + 1);
    for (int i = 0; i <= intervals; ++i) w[i] = i <= i0 ? -L + i * h_neg : (i - i0) * h_pos;
    w[i0] = 0.0;
    w.back() = cr;
    if (zero_index) *zero_index = i0;
    return w;
}

GridSolution evaluate_policy(const ModelParams& params, const GridSpec& spec, std::span<const double> policy) {
    const ModelParams p = validate(params);
    const std::vector<double> w = make_grid(p, spec);
    if (policy.size() != w.size()) throw std::invalid_argument("evaluate_policy: one control per node required");
    const Operator op{p, w};
    bool m_matrix = true;
    GridSolution g = solve_policy(op, std::vector<double>(policy.begin(), policy.end()), m_matrix);
    g.m_matrix = m_matrix;
    g.iterations = 1;
    g.converged = true;
    return g;
}

GridSolution solve_grid(const ModelParams& params, const GridSpec& spec) {
    const ModelParams p = validate(params);
    int zero = 0;
    const std::vector<double> w = make_grid(p, spec, &zero);
    Operator op{p, w};
    op.zero = static_cast<std::size_t>(zero);
    const std::size_t nodes = w.size();
    const double cap = policy_cap(p);

    // Linear start between the pinned ends; its second difference vanishes, so
    // the first improvement keeps this seed control everywhere.
    std::vector<double> m(nodes);
    for (std::size_t i = 0; i < nodes; ++i) m[i] = (w.back() - w[i]) / (w.back() - w.front()) / p.lambda;
    std::vector<double> policy(nodes, cap / 50.0);

    GridSolution g;
    bool m_matrix = true;
    double last_change = INFINITY;
    double max_increase = 0.0;
    for (int it = 1; it <= spec.max_iters; ++it) {
        for (std::size_t i = 1; i + 1 < nodes; ++i) policy[i] = improve(op, i, m, policy[i], cap);
        g = solve_policy(op, policy, m_matrix);
        last_change = 0.0;
        for (std::size_t i = 0; i < nodes; ++i) {
            last_change = std::max(last_change, std::abs(g.values[i] - m[i]));
            if (it > 1) max_increase = std::max(max_increase, g.values[i] - m[i]);
        }
        m = g.values;
        op.update_shift(m);
        g.iterations = it;
        if (last_change <= spec.tol) {
            g.converged = true;
            break;
        }
    }
    g.m_matrix = m_matrix;
    g.max_increase = max_increase;
    double res = 0.0;
    for (std::size_t i = 1; i + 1 < nodes; ++i) {
        const double pi = improve(op, i, m, g.policies[i], cap);
        res = std::max(res, std::abs(p.lambda * m[i] - op.source(i) - op.hamiltonian(i, pi, m)));
    }
    g.residual = res;
    if (!g.converged) {
        throw ConvergenceError("policy iteration did not converge within " + std::to_string(spec.max_iters) +
                                   " iterations (last change " + std::to_string(last_change) + ")",
                               last_change);
    }
    return g;
}

double hjb_residual(const ModelParams& p, double w, double m, double m1, double m2) {
    const double delta = 0.5 * std::pow((p.mu - p.r) / p.sigma, 2);
    return p.lambda * m - (w < 0.0 ? 1.0 : 0.0) - (p.r * w - p.c) * m1 + delta * m1 * m1 / m2;
}

ResidualReport residual_of_closed_form(const FbpSolution& sol, std::span<const double> w_grid) {
    const ModelParams& p = sol.params;
    const double cr = sol.k.safe_level, pw = sol.k.p, beta = beta_L(sol);
    ResidualReport rep;
    for (double w : w_grid) {
        if (w == 0.0 || !(w > -p.L && w < cr)) continue;
        double m, m1, m2;
        if (w > 0.0) {
            const double x = cr - w;
            m = beta * std::pow(x, pw);
            m1 = -beta * pw * std::pow(x, pw - 1.0);
            m2 = beta * pw * (pw - 1.0) * std::pow(x, pw - 2.0);
        } else {
            const double y = invert(sol, w);
            m = mhat_region(sol, y, Region::outer) - w * y;
            m1 = -y;
            m2 = -1.0 / mhat_derivs_region(sol, y, Region::outer).d2;
        }
        const double res = hjb_residual(p, w, m, m1, m2);
        const double scale = std::max({1.0, std::abs(p.lambda * m), std::abs((p.r * w - p.c) * m1),
                                       std::abs(sol.k.delta * m1 * m1 / m2)});
        if (std::abs(res) > rep.max_abs) {
            rep.max_abs = std::abs(res);
            rep.worst_w = w;
        }
        rep.max_rel = std::max(rep.max_rel, std::abs(res) / scale);
    }
    return rep;
}

double max_error_vs_closed_form(const FbpSolution& sol, const GridSolution& grid) {
    double err = 0.0;
    for (std::size_t i = 0; i < grid.w.size(); ++i) {
        err = std::max(err, std::abs(grid.values[i] - value(sol, grid.w[i])));
    }
    return err;
}

}  // namespace occtime
