#include "occtime/mc_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "occtime/dual.hpp"
#include "occtime/rng.hpp"

namespace occtime {

Strategy Strategy::zero() {
    Strategy s;
    s.name_ = "zero";
    return s;
}

Strategy Strategy::constant(double k) {
    if (!std::isfinite(k)) throw std::invalid_argument("constant strategy: allocation must be finite");
    Strategy s;
    s.name_ = "constant";
    s.a_ = k;
    return s;
}

Strategy Strategy::linear(std::string name, double slope, double safe_level) {
    Strategy s;
    s.kind_ = Kind::linear;
    s.name_ = std::move(name);
    s.a_ = slope;
    s.b_ = safe_level;
    return s;
}

Strategy Strategy::tabulated(std::string name, std::vector<double> knots,
                             const std::function<double(double, std::size_t)>& piece, int nodes_per_piece) {
    if (knots.size() < 2) throw std::invalid_argument("tabulated strategy: need at least two knots");
    if (nodes_per_piece < 2) throw std::invalid_argument("tabulated strategy: need at least two nodes per piece");
    Strategy s;
    s.kind_ = Kind::table;
    s.name_ = std::move(name);
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        const double lo = knots[k], hi = knots[k + 1];
        if (!(hi > lo)) throw std::invalid_argument("tabulated strategy: knots must increase");
        Piece p{lo, hi, (nodes_per_piece - 1) / (hi - lo), std::vector<double>(nodes_per_piece)};
        for (int i = 0; i < nodes_per_piece; ++i) {
            const double w = i + 1 == nodes_per_piece ? hi : lo + (hi - lo) * i / (nodes_per_piece - 1);
            p.values[i] = piece(w, k);
        }
        s.pieces_.push_back(std::move(p));
    }
    return s;
}

Strategy Strategy::custom(std::string name, std::function<double(double)> rule) {
    Strategy s;
    s.kind_ = Kind::custom;
    s.name_ = std::move(name);
    s.rule_ = std::move(rule);
    return s;
}

double Strategy::lookup(double w) const {
    std::size_t k = 0;
    while (k + 1 < pieces_.size() && w >= pieces_[k].hi) ++k;
    const Piece& p = pieces_[k];
    const double x = std::clamp((w - p.lo) * p.inv_h, 0.0, static_cast<double>(p.values.size() - 1));
    const std::size_t i = std::min(static_cast<std::size_t>(x), p.values.size() - 2);
    const double t = x - static_cast<double>(i);
    return p.values[i] + t * (p.values[i + 1] - p.values[i]);
}

Strategy optimal_strategy(const FbpSolution& sol, int nodes_per_piece) {
    const double lev = sol.params.leverage();
    auto piece = [&](double w, std::size_t k) {
        if (k == 1) return pi_ruin(sol.k, sol.params, w);
        const double y = w == 0.0 ? sol.y0 : invert(sol, w);
        return -lev * y * mhat_derivs_region(sol, y, Region::outer).d2;
    };
    return Strategy::tabulated("optimal", {-sol.params.L, 0.0, sol.k.safe_level}, piece, nodes_per_piece);
}

Strategy ruin_min_strategy(const FbpSolution& sol) {
    return Strategy::linear("ruin_min", sol.params.leverage() / (sol.k.p - 1.0), sol.k.safe_level);
}

double checked_t_max(const SimConfig& config, const ModelParams& params) {
    if (!(config.dt > 0.0) || !std::isfinite(config.dt)) throw std::invalid_argument("sim: dt must be positive");
    if (config.n_paths < 1) throw std::invalid_argument("sim: n_paths must be at least 1");
    if (!(config.a0 >= 0.0) || !std::isfinite(config.a0)) throw std::invalid_argument("sim: a0 must be non-negative");
    if (!std::isfinite(config.w0)) throw std::invalid_argument("sim: w0 must be finite");
    const double t_max = config.t_max.value_or(40.0 / params.lambda);
    if (!(t_max >= 10.0 / params.lambda)) throw std::invalid_argument("sim: t_max must be at least 10/lambda");
    return t_max;
}

namespace {

enum class Exit { death, ruin, safe, truncated };

struct PathOutcome {
    double payoff;
    double min_wealth;
    Exit exit;
};

struct Lane {
    std::int64_t path = -1;
    PathRng rng{0, 0};
    std::int64_t step = 0, full = 0;
    double rest = 0.0, death = 0.0, w = 0.0, a = 0.0, z = 0.0;
};

struct Kernel {
    double r, c, excess, sigma, L, safe, lambda, dt, sqrt_dt, t_max, w0, terminal;
    std::uint64_t seed;
    bool bridge;
    const Strategy& pi;
    const StepPenalty& f;

    // Brownian-bridge test for a barrier crossed inside a step whose end points
    // lie at distances d0, d1 > 0 from it; scale is 2 / (vol^2 h). A uniform is
    // drawn only when the crossing probability is representable.
    static bool crossed(double d0, double d1, double scale, PathRng& rng) {
        const double e = d0 * d1 * scale;
        if (!(e <= 745.0)) return false;
        return rng.uniform() < std::exp(-e);
    }

    // Returns true when the path ends before its first step.
    bool start(Lane& s, std::int64_t path, PathOutcome& done) const {
        s.path = path;
        if (w0 >= safe) {
            done = {0.0, w0, Exit::safe};
            return true;
        }
        if (w0 <= -L) {
            done = {terminal, w0, Exit::ruin};
            return true;
        }
        s.rng = PathRng(seed, static_cast<std::uint64_t>(path));
        s.death = s.rng.exponential(lambda);
        const double horizon = std::min(s.death, t_max);
        s.full = static_cast<std::int64_t>(std::floor(horizon / dt));
        s.rest = horizon - static_cast<double>(s.full) * dt;
        s.step = 0;
        s.w = s.z = w0;
        s.a = 0.0;
        return false;
    }

    // One Euler step; returns true when the path has ended.
    bool advance(Lane& s, PathOutcome& done) const {
        const bool last = s.step == s.full;
        const double h = last ? s.rest : dt;
        if (h > 0.0) {
            const double sq = last ? std::sqrt(h) : sqrt_dt;
            s.a += h * f(s.w);
            const double x = pi(s.w);
            const double before = s.w;
            s.w += (r * before - c + excess * x) * h + sigma * x * sq * s.rng.normal();
            s.z = std::min(s.z, s.w);
            const double vol = sigma * x;
            // Zero volatility gives an infinite scale, so no crossing is drawn.
            const double scale = bridge ? 2.0 / (vol * vol * h) : 0.0;
            if (s.w <= -L || (bridge && crossed(before + L, s.w + L, scale, s.rng))) {
                done = {s.a + terminal, -L, Exit::ruin};
                return true;
            }
            if (s.w >= safe || (bridge && crossed(safe - before, safe - s.w, scale, s.rng))) {
                done = {s.a, s.z, Exit::safe};
                return true;
            }
        }
        if (last || !(h > 0.0)) {
            done = {s.a, s.z, s.death > t_max ? Exit::truncated : Exit::death};
            return true;
        }
        ++s.step;
        return false;
    }
};

struct BatchStats {
    std::int64_t n = 0, death = 0, ruin = 0, safe = 0, truncated = 0;
    double mean = 0.0, m2 = 0.0, min_sum = 0.0;
};

constexpr std::int64_t kBatch = 1024;
// Paths advanced in lockstep inside a batch.
constexpr int kLanes = 8;

void run_batch(const Kernel& kernel, std::int64_t batch, std::int64_t n_paths, BatchStats& out,
               std::vector<double>& min_wealth, std::vector<double>* payoffs) {
    const std::int64_t begin = batch * kBatch, end = std::min(n_paths, begin + kBatch);
    std::vector<PathOutcome> outcome(static_cast<std::size_t>(end - begin));
    std::int64_t next = begin;
    Lane lanes[kLanes];
    int active = 0;
    auto refill = [&](Lane& lane) {
        PathOutcome done;
        while (next < end) {
            if (!kernel.start(lane, next++, done)) return true;
            outcome[lane.path - begin] = done;
        }
        lane.path = -1;
        return false;
    };
    for (Lane& lane : lanes) active += refill(lane);
    while (active > 0) {
        for (Lane& lane : lanes) {
            if (lane.path < 0) continue;
            PathOutcome done;
            if (kernel.advance(lane, done)) {
                outcome[lane.path - begin] = done;
                if (!refill(lane)) --active;
            }
        }
    }

    BatchStats s;
    for (std::int64_t i = begin; i < end; ++i) {
        const PathOutcome& o = outcome[i - begin];
        ++s.n;
        const double d = o.payoff - s.mean;
        s.mean += d / static_cast<double>(s.n);
        s.m2 += d * (o.payoff - s.mean);
        s.min_sum += o.min_wealth;
        min_wealth[i] = o.min_wealth;
        if (payoffs) (*payoffs)[i] = o.payoff;
        switch (o.exit) {
            case Exit::death: ++s.death; break;
            case Exit::ruin: ++s.ruin; break;
            case Exit::safe: ++s.safe; break;
            case Exit::truncated: ++s.truncated; break;
        }
    }
    out = s;
}

double quantile(std::vector<double>& v, double q) {
    const auto k = static_cast<std::size_t>(std::floor(q * static_cast<double>(v.size() - 1)));
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
    return v[k];
}

SimEstimate run(const FbpSolution& sol, const Strategy& strategy, const SimConfig& config, const StepPenalty& weight,
                bool parallel, std::vector<double>* payoffs) {
    const ModelParams& p = sol.params;
    const double t_max = checked_t_max(config, p);
    validate(weight, p);
    const Kernel kernel{p.r, p.c, p.mu - p.r, p.sigma, p.L, sol.k.safe_level, p.lambda, config.dt,
                        std::sqrt(config.dt), t_max, config.w0, weight.terminal() / p.lambda, config.seed,
                        config.bridge, strategy, weight};

    const std::int64_t n = config.n_paths;
    const std::int64_t batches = (n + kBatch - 1) / kBatch;
    std::vector<BatchStats> stats(static_cast<std::size_t>(batches));
    std::vector<double> min_wealth(static_cast<std::size_t>(n));
    if (payoffs) payoffs->assign(static_cast<std::size_t>(n), 0.0);

    if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t b = 0; b < batches; ++b) run_batch(kernel, b, n, stats[b], min_wealth, payoffs);
    } else {
        for (std::int64_t b = 0; b < batches; ++b) run_batch(kernel, b, n, stats[b], min_wealth, payoffs);
    }

    // Chan et al. pairwise merge in batch order.
    BatchStats total;
    for (const BatchStats& s : stats) {
        const std::int64_t m = total.n + s.n;
        const double d = s.mean - total.mean;
        total.mean += d * static_cast<double>(s.n) / static_cast<double>(m);
        total.m2 += s.m2 + d * d * static_cast<double>(total.n) * static_cast<double>(s.n) / static_cast<double>(m);
        total.n = m;
        total.min_sum += s.min_sum;
        total.death += s.death;
        total.ruin += s.ruin;
        total.safe += s.safe;
        total.truncated += s.truncated;
    }

    SimEstimate e;
    e.strategy = strategy.name();
    e.excess_mean = total.mean;
    e.mean = config.a0 + total.mean;
    e.std_error = n > 1 ? std::sqrt(total.m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
    e.n_paths = n;
    e.n_death = total.death;
    e.n_ruin = total.ruin;
    e.n_safe = total.safe;
    e.n_truncated = total.truncated;
    e.min_wealth.mean = total.min_sum / static_cast<double>(n);
    e.min_wealth.min = *std::min_element(min_wealth.begin(), min_wealth.end());
    e.min_wealth.q05 = quantile(min_wealth, 0.05);
    e.min_wealth.q50 = quantile(min_wealth, 0.50);
    e.min_wealth.q95 = quantile(min_wealth, 0.95);
    if (static_cast<double>(total.truncated) > 1e-3 * static_cast<double>(n)) {
        e.warnings.push_back("t_max reached on " + std::to_string(total.truncated) + " of " + std::to_string(n) +
                             " paths; check dt and the strategy");
    }
    return e;
}

}  // namespace

SimEstimate simulate(const FbpSolution& sol, const Strategy& strategy, const SimConfig& config,
                     const StepPenalty& weight) {
    return run(sol, strategy, config, weight, true, nullptr);
}

SimEstimate simulate_serial(const FbpSolution& sol, const Strategy& strategy, const SimConfig& config,
                            const StepPenalty& weight) {
    return run(sol, strategy, config, weight, false, nullptr);
}

Comparison compare(const FbpSolution& sol, const std::vector<Strategy>& others, const SimConfig& config) {
    if (others.empty()) throw std::invalid_argument("compare: need at least one strategy besides the optimal one");
    Comparison out;
    std::vector<double> base, payoffs;
    out.estimates.push_back(run(sol, optimal_strategy(sol), config, indicator_penalty(), true, &base));
    out.diff_mean.push_back(0.0);
    out.diff_std_error.push_back(0.0);
    for (const Strategy& s : others) {
        out.estimates.push_back(run(sol, s, config, indicator_penalty(), true, &payoffs));
        double mean = 0.0, m2 = 0.0;
        for (std::size_t i = 0; i < payoffs.size(); ++i) {
            const double d = payoffs[i] - base[i];
            const double delta = d - mean;
            mean += delta / static_cast<double>(i + 1);
            m2 += delta * (d - mean);
        }
        const auto n = static_cast<double>(payoffs.size());
        out.diff_mean.push_back(mean);
        out.diff_std_error.push_back(n > 1 ? std::sqrt(m2 / (n - 1) / n) : 0.0);
    }
    return out;
}

}  // namespace occtime
