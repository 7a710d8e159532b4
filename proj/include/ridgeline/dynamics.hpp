#ifndef RIDGELINE_DYNAMICS_HPP
#define RIDGELINE_DYNAMICS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ridgeline/field.hpp"
#include "ridgeline/rng.hpp"
#include "ridgeline/vec2.hpp"

namespace ridgeline {

struct ParticleState {
    std::vector<Vec2> positions; // each component in [0, delta)
    double time = 0.0;

    int n() const { return static_cast<int>(positions.size()); }
};

struct EulerParams {
    double dt = 1e-4;
};

struct DormandPrinceParams {
    double abs_tol = 1e-9;
    double rel_tol = 1e-6;
    double dt_init = 1e-3;
    double dt_max = 1.0;
};

using IntegratorParams = std::variant<EulerParams, DormandPrinceParams>;

enum class ForceMethod { BruteForce, CellList };

// "the time step has to be adjusted depending on the value of the cutoff
// radius": scale the baseline down for small cutoffs.
inline double default_euler_dt(double r_cutoff) {
    return 1e-4 * std::min(1.0, r_cutoff / 0.1);
}

struct SimConfig {
    ForcePair pair;
    TensorField field = TensorField::canonical();
    IntegratorParams integrator = EulerParams{};
    double t_max = 1.0;
    double stationary_tol = 1e-8;
    std::optional<double> snapshot_every; // simulation-time cadence
    ForceMethod method = ForceMethod::CellList;
};

// Uniform grid of square cells with side >= R_c, so scanning the 3x3 block
// around a particle's cell covers every interaction within the cutoff.
class CellGrid {
public:
    CellGrid(const std::vector<Vec2>& positions, double delta, double r_cutoff)
        : delta_(delta) {
        dims_ = std::max(1, static_cast<int>(std::floor(delta / r_cutoff)));
        cell_size_ = delta / dims_;
        cells_.assign(static_cast<std::size_t>(dims_) * dims_, {});
        for (std::size_t i = 0; i < positions.size(); ++i)
            cells_[cell_index(positions[i])].push_back(static_cast<int>(i));
    }

    int dims() const { return dims_; }
    double cell_size() const { return cell_size_; }

    // Candidate interaction partners of a position: all particles in the 3x3
    // cell block, in ascending index order. With fewer than 3 cells per axis
    // the block wraps onto itself, so duplicates are removed.
    std::vector<int> neighbors(Vec2 pos) const {
        std::vector<int> out;
        const int cx = cell_coord(pos.x);
        const int cy = cell_coord(pos.y);
        for (int dx = -1; dx <= 1; ++dx) {
            for (int dy = -1; dy <= 1; ++dy) {
                const int ix = mod_dims(cx + dx);
                const int iy = mod_dims(cy + dy);
                const auto& cell = cells_[static_cast<std::size_t>(ix) * dims_ + iy];
                out.insert(out.end(), cell.begin(), cell.end());
            }
        }
        std::sort(out.begin(), out.end());
        if (dims_ < 3) out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

private:
    int cell_coord(double x) const {
        int c = static_cast<int>(std::floor(x / cell_size_));
        if (c >= dims_) c = dims_ - 1;
        if (c < 0) c = 0;
        return c;
    }
    std::size_t cell_index(Vec2 pos) const {
        return static_cast<std::size_t>(cell_coord(pos.x)) * dims_ + cell_coord(pos.y);
    }
    int mod_dims(int c) const { return ((c % dims_) + dims_) % dims_; }

    double delta_;
    int dims_;
    double cell_size_;
    std::vector<std::vector<int>> cells_;
};

namespace detail {

inline void throw_coincident(int j, int k) {
    throw std::domain_error("coincident particles " + std::to_string(j) + " and " +
                            std::to_string(k) + " (wrapped distance < 1e-12)");
}

// Velocity of particle j: (1/N) sum over the given partners (ascending k) of
// the wrapped pair force. Both force paths share this reduction so that the
// summation order, and therefore every bit of the result, coincides.
inline Vec2 velocity_of(int j, const std::vector<Vec2>& x, const std::vector<int>& partners,
                        const TensorField& field, const ForcePair& pair) {
    const double delta = pair.domain_size;
    const double rc = pair.r_cutoff();
    Vec2 sum{0.0, 0.0};
    for (int k : partners) {
        if (k == j) continue;
        const Vec2 d = wrap_displacement(x[j] - x[k], delta);
        const double r = d.norm();
        if (r < kCoincidenceTol) throw_coincident(j, k);
        if (r >= rc) continue; // compact support: exact zero either way
        const double fs = eval(pair.fs, r).value;
        const double fl = eval(pair.fl, r).value;
        const double sd = dot(field.s, d);
        const double ld = dot(field.l, d);
        sum += fs * sd * field.s + fl * ld * field.l;
    }
    return (1.0 / static_cast<double>(x.size())) * sum;
}

} // namespace detail

// Right-hand side of the particle ODE: velocities of all particles.
inline std::vector<Vec2> rhs(const ParticleState& state, const SimConfig& config,
                             ForceMethod method) {
    const auto& x = state.positions;
    const int n = state.n();
    if (n < 2) throw std::invalid_argument("rhs: need at least two particles");
    std::vector<Vec2> v(n);

    if (method == ForceMethod::BruteForce) {
        std::vector<int> all(n);
        std::iota(all.begin(), all.end(), 0);
        std::exception_ptr err;
#pragma omp parallel for schedule(static)
        for (int j = 0; j < n; ++j) {
            try {
                v[j] = detail::velocity_of(j, x, all, config.field, config.pair);
            } catch (...) {
#pragma omp critical
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
        return v;
    }

    const CellGrid grid(x, config.pair.domain_size, config.pair.r_cutoff());
    std::exception_ptr err;
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
        try {
            v[j] = detail::velocity_of(j, x, grid.neighbors(x[j]), config.field, config.pair);
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    return v;
}

inline std::vector<Vec2> rhs(const ParticleState& state, const SimConfig& config) {
    return rhs(state, config, config.method);
}

inline double max_speed(const std::vector<Vec2>& velocities) {
    double ms = 0.0;
    for (const Vec2& v : velocities) ms = std::max(ms, v.norm());
    return ms;
}

namespace detail {

inline ParticleState euler_advance(const ParticleState& state, const std::vector<Vec2>& v,
                                   double dt, double delta) {
    ParticleState next;
    next.positions.resize(state.positions.size());
    for (std::size_t i = 0; i < state.positions.size(); ++i)
        next.positions[i] = wrap_position(state.positions[i] + dt * v[i], delta);
    next.time = state.time + dt;
    return next;
}

// One adaptive Dormand-Prince 5(4) step from `state`. `h` is the trial step
// on entry and the proposed next step on exit; `k1` is rhs(state). Positions
// are wrapped only after acceptance (the force is periodic, so intermediate
// stages need no wrap).
inline ParticleState dopri_step(const ParticleState& state, const std::vector<Vec2>& k1,
                                const SimConfig& config, const DormandPrinceParams& p,
                                double& h) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640,
                            e5 = -2187.0 / 6784 + 92097.0 / 339200, e6 = 11.0 / 84 - 187.0 / 2100,
                            e7 = -1.0 / 40;

    const int n = state.n();
    const double delta = config.pair.domain_size;
    const auto& x0 = state.positions;
    ParticleState stage;
    stage.positions.resize(n);

    while (true) {
        if (h < 1e-14)
            throw std::runtime_error("dormand-prince: step size underflow below 1e-14 at t = " +
                                     std::to_string(state.time));

        auto at = [&](auto&&... terms) {
            for (int i = 0; i < n; ++i) stage.positions[i] = x0[i] + h * (... + terms(i));
        };

        ParticleState y5;
        std::vector<Vec2> k2, k3, k4, k5, k6, k7;
        try {
            at([&](int i) { return a21 * k1[i]; });
            stage.time = state.time + h / 5.0;
            k2 = rhs(stage, config);

            at([&](int i) { return a31 * k1[i]; }, [&](int i) { return a32 * k2[i]; });
            stage.time = state.time + 3.0 * h / 10.0;
            k3 = rhs(stage, config);

            at([&](int i) { return a41 * k1[i]; }, [&](int i) { return a42 * k2[i]; },
               [&](int i) { return a43 * k3[i]; });
            stage.time = state.time + 4.0 * h / 5.0;
            k4 = rhs(stage, config);

            at([&](int i) { return a51 * k1[i]; }, [&](int i) { return a52 * k2[i]; },
               [&](int i) { return a53 * k3[i]; }, [&](int i) { return a54 * k4[i]; });
            stage.time = state.time + 8.0 * h / 9.0;
            k5 = rhs(stage, config);

            at([&](int i) { return a61 * k1[i]; }, [&](int i) { return a62 * k2[i]; },
               [&](int i) { return a63 * k3[i]; }, [&](int i) { return a64 * k4[i]; },
               [&](int i) { return a65 * k5[i]; });
            stage.time = state.time + h;
            k6 = rhs(stage, config);

            y5.positions.resize(n);
            for (int i = 0; i < n; ++i)
                y5.positions[i] = x0[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                                               b5 * k5[i] + b6 * k6[i]);
            y5.time = state.time + h;
            k7 = rhs(y5, config);
        } catch (const std::domain_error&) {
            // a trial stage drove two particles onto each other: the step is
            // far too large, so shrink and retry instead of failing the run
            h *= 0.25;
            continue;
        }

        double err_sq = 0.0;
        for (int i = 0; i < n; ++i) {
            const Vec2 e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                e7 * k7[i]);
            const double sx =
                p.abs_tol + p.rel_tol * std::max(std::abs(x0[i].x), std::abs(y5.positions[i].x));
            const double sy =
                p.abs_tol + p.rel_tol * std::max(std::abs(x0[i].y), std::abs(y5.positions[i].y));
            err_sq += (e.x / sx) * (e.x / sx) + (e.y / sy) * (e.y / sy);
        }
        const double err = std::sqrt(err_sq / (2.0 * n));

        const double factor =
            std::clamp(0.9 * std::pow(std::max(err, 1e-300), -0.2), 0.2, 5.0);
        if (err <= 1.0) {
            for (int i = 0; i < n; ++i) y5.positions[i] = wrap_position(y5.positions[i], delta);
            h = std::min(h * factor, p.dt_max);
            return y5;
        }
        h *= factor;
    }
}

} // namespace detail

// Advance one step. Euler uses its fixed dt; Dormand-Prince takes one
// accepted adaptive step starting from dt_init.
inline ParticleState step(const ParticleState& state, const SimConfig& config) {
    const auto v = rhs(state, config);
    if (const auto* euler = std::get_if<EulerParams>(&config.integrator))
        return detail::euler_advance(state, v, euler->dt, config.pair.domain_size);
    const auto& dp = std::get<DormandPrinceParams>(config.integrator);
    double h = std::min(dp.dt_init, dp.dt_max);
    return detail::dopri_step(state, v, config, dp, h);
}

enum class Termination { Stationary, TimeExhausted };

struct Snapshot {
    double time = 0.0;
    std::vector<Vec2> positions;
};

struct SimResult {
    ParticleState final_state;
    std::vector<Snapshot> snapshots;
    Termination termination = Termination::TimeExhausted;
    double final_max_speed = 0.0;
    std::uint64_t steps = 0;
};

// Integrate until every particle is slower than stationary_tol or t_max is
// reached. Snapshots are taken at t = 0 and then at the configured cadence.
inline SimResult simulate(const ParticleState& init, const SimConfig& config) {
    SimResult result;
    ParticleState state = init;
    double next_snapshot = 0.0;
    double h = 0.0;
    if (const auto* dp = std::get_if<DormandPrinceParams>(&config.integrator))
        h = std::min(dp->dt_init, dp->dt_max);

    while (true) {
        const auto v = rhs(state, config);
        const double ms = max_speed(v);
        if (config.snapshot_every && state.time >= next_snapshot) {
            result.snapshots.push_back({state.time, state.positions});
            next_snapshot = state.time + *config.snapshot_every;
        }
        if (ms < config.stationary_tol) {
            result.termination = Termination::Stationary;
            result.final_max_speed = ms;
            break;
        }
        if (state.time >= config.t_max) {
            result.termination = Termination::TimeExhausted;
            result.final_max_speed = ms;
            break;
        }
        if (const auto* euler = std::get_if<EulerParams>(&config.integrator)) {
            state = detail::euler_advance(state, v, euler->dt, config.pair.domain_size);
        } else {
            const auto& dp = std::get<DormandPrinceParams>(config.integrator);
            const double remaining = config.t_max - state.time;
            h = std::min(h, remaining);
            state = detail::dopri_step(state, v, config, dp, h);
        }
        ++result.steps;
    }
    result.final_state = std::move(state);
    return result;
}

// N particles equiangular on a circle.
inline ParticleState init_circle(int n, Vec2 center, double radius, double delta = 1.0) {
    if (n < 2) throw std::invalid_argument("init_circle: need at least two particles");
    if (!(radius > 0.0)) throw std::invalid_argument("init_circle: radius must be positive");
    ParticleState state;
    state.positions.reserve(n);
    for (int j = 1; j <= n; ++j) {
        const double angle = 2.0 * M_PI * j / n;
        state.positions.push_back(wrap_position(
            center + radius * Vec2{std::cos(angle), std::sin(angle)}, delta));
    }
    return state;
}

} // namespace ridgeline

#endif
