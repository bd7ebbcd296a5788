#pragma once
//
// Bidirectional stochastic leapfrog dynamics for one particle on a line.
//
// Forward update (float mode), with gamma = dt/tau and A(q) = F(q)/m * dt^2:
//
//     q_next = 2*q - q_prev + A(q) - gamma*(q - q_prev) + kick * dt^2 / m
//
// Every step draws exactly two uniforms from the coupled generator and folds
// them into one Gaussian kick; the second Box-Muller output is discarded so
// the consumption count per step is fixed. The backward step re-derives the
// same two uniforms by stepping the generator in reverse instead of storing
// the noise, then solves the update for q_prev.
//
// Fixed-point mode keeps positions as integers on the 2^-F grid and rounds
// the force and kick contributions to the grid before adding them. Both
// rounded terms are pure functions of (q, rng state), so the backward
// recurrence reproduces earlier states bit for bit. Drag would make the
// backward update implicit in integer arithmetic, so fixed-point mode
// requires tau = infinity.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <variant>
#include <vector>

#include "revgen/bits.hpp"
#include "revgen/coupled.hpp"
#include "revgen/errors.hpp"

namespace revgen::langevin {

struct ZeroForce {};

struct HarmonicForce {
    double stiffness = 1.0; // F(q) = -stiffness * q, centered at 0
};

using ForceModel = std::variant<ZeroForce, HarmonicForce>;

inline double force_at(const ForceModel& force, double q) {
    return std::visit(revgen::detail::overloaded{
                          [](const ZeroForce&) { return 0.0; },
                          [&](const HarmonicForce& h) { return -h.stiffness * q; },
                      },
                      force);
}

struct FloatMode {};

struct FixedPointMode {
    unsigned frac_bits = 32;
};

using ArithmeticMode = std::variant<FloatMode, FixedPointMode>;

struct LangevinConfig {
    double mass = 1.0;
    double tau = std::numeric_limits<double>::infinity(); // drag time; infinity = no drag
    double dt = 0.01;
    ForceModel force = ZeroForce{};
    double kick_scale = 0.0;
    ArithmeticMode mode = FloatMode{};
    CoupledGenerator noise = rund_generator();

    bool fixed_point() const noexcept { return std::holds_alternative<FixedPointMode>(mode); }

    unsigned frac_bits() const noexcept {
        const auto* fixed = std::get_if<FixedPointMode>(&mode);
        return fixed ? fixed->frac_bits : 0;
    }

    double drag() const noexcept { return std::isinf(tau) ? 0.0 : dt / tau; }

    void validate() const {
        if (!(mass > 0) || !(dt > 0) || !(tau > 0) || kick_scale < 0) {
            throw std::invalid_argument("LangevinConfig: need mass > 0, dt > 0, tau > 0, kick_scale >= 0");
        }
        if (fixed_point()) {
            if (!std::isinf(tau)) {
                throw ModeViolation("LangevinConfig: fixed-point mode requires tau = infinity (no drag)");
            }
            if (frac_bits() < 1 || frac_bits() > 52) {
                throw RangeError("LangevinConfig: frac_bits must be in [1, 52]");
            }
        } else if (drag() >= 1.0) {
            throw std::invalid_argument("LangevinConfig: dt/tau must be < 1 for an invertible update");
        }
        noise.validate();
    }
};

struct SimState {
    // Float-mode positions; in fixed-point mode these mirror the grid values
    // exactly (grid * 2^-F) and the grid fields are authoritative.
    double q_prev = 0.0;
    double q_curr = 0.0;
    std::int64_t grid_prev = 0;
    std::int64_t grid_curr = 0;
    CoupledState rng{};
    std::int64_t step_index = 0;

    friend constexpr bool operator==(const SimState&, const SimState&) = default;
};

/// One Gaussian kick from two uniforms: scale * sqrt(-2 ln u1) * cos(2 pi u2).
/// u1 = 0 is remapped to the smallest positive normal double before the log.
inline double uniform_to_kick(double u1, double u2, double scale) {
    if (scale == 0.0) {
        return 0.0;
    }
    if (u1 <= 0.0) {
        u1 = std::numeric_limits<double>::min();
    }
    return scale * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace detail {

inline double draw_kick_forward(const LangevinConfig& cfg, CoupledState& rng) {
    rng = cfg.noise.step_forward(rng);
    const double u1 = cfg.noise.output(rng);
    rng = cfg.noise.step_forward(rng);
    const double u2 = cfg.noise.output(rng);
    return uniform_to_kick(u1, u2, cfg.kick_scale);
}

inline double redraw_kick_backward(const LangevinConfig& cfg, const ReversedCoupledGenerator& rev,
                                   CoupledState& rng) {
    const double u2 = cfg.noise.output(rng);
    rng = rev.step_backward(rng);
    const double u1 = cfg.noise.output(rng);
    rng = rev.step_backward(rng);
    return uniform_to_kick(u1, u2, cfg.kick_scale);
}

// Round-to-nearest-even onto the 2^-F grid.
inline std::int64_t to_grid(double value, unsigned frac_bits) {
    return std::llrint(std::ldexp(value, static_cast<int>(frac_bits)));
}

inline double from_grid(std::int64_t value, unsigned frac_bits) {
    return std::ldexp(static_cast<double>(value), -static_cast<int>(frac_bits));
}

// Wraparound-defined signed add/sub so pathological trajectories stay
// well-defined (and still exactly reversible, mod 2^64).
inline std::int64_t wrap_add(std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}

inline std::int64_t wrap_sub(std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b));
}

// Grid increment contributed by forces and kick at center position `grid`.
inline std::int64_t grid_increment(const LangevinConfig& cfg, std::int64_t grid, double kick) {
    const unsigned f = cfg.frac_bits();
    const double q = from_grid(grid, f);
    const double dt2_over_m = cfg.dt * cfg.dt / cfg.mass;
    const std::int64_t d_force = to_grid(force_at(cfg.force, q) * dt2_over_m, f);
    const std::int64_t d_kick = to_grid(kick * dt2_over_m, f);
    return wrap_add(d_force, d_kick);
}

} // namespace detail

/// Builds the two-point leapfrog state: q0 = q(t - dt), q1 = q(t). In
/// fixed-point mode both positions are rounded onto the grid first.
inline SimState make_state(const LangevinConfig& cfg, double q0, double q1, CoupledState rng_seed) {
    cfg.validate();
    SimState s;
    s.rng = CoupledState{rng_seed.x & cfg.noise.mask(), rng_seed.y & cfg.noise.mask()};
    if (cfg.fixed_point()) {
        const unsigned f = cfg.frac_bits();
        s.grid_prev = detail::to_grid(q0, f);
        s.grid_curr = detail::to_grid(q1, f);
        s.q_prev = detail::from_grid(s.grid_prev, f);
        s.q_curr = detail::from_grid(s.grid_curr, f);
    } else {
        s.q_prev = q0;
        s.q_curr = q1;
    }
    return s;
}

inline SimState step_forward(const LangevinConfig& cfg, SimState s) {
    cfg.validate();
    const double kick = detail::draw_kick_forward(cfg, s.rng);
    if (cfg.fixed_point()) {
        const std::int64_t next =
            detail::wrap_add(detail::wrap_sub(detail::wrap_add(s.grid_curr, s.grid_curr), s.grid_prev),
                             detail::grid_increment(cfg, s.grid_curr, kick));
        s.grid_prev = s.grid_curr;
        s.grid_curr = next;
        s.q_prev = detail::from_grid(s.grid_prev, cfg.frac_bits());
        s.q_curr = detail::from_grid(s.grid_curr, cfg.frac_bits());
    } else {
        const double accel = force_at(cfg.force, s.q_curr) / cfg.mass * cfg.dt * cfg.dt;
        const double q_next = 2.0 * s.q_curr - s.q_prev + accel - cfg.drag() * (s.q_curr - s.q_prev)
                              + kick * cfg.dt * cfg.dt / cfg.mass;
        s.q_prev = s.q_curr;
        s.q_curr = q_next;
    }
    ++s.step_index;
    return s;
}

/// Undoes one forward step: re-derives the kick by stepping the noise
/// generator backward twice, then solves the update for the older position.
inline SimState step_backward(const LangevinConfig& cfg, SimState s) {
    cfg.validate();
    const ReversedCoupledGenerator rev = reverse_coupled(cfg.noise);
    const double kick = detail::redraw_kick_backward(cfg, rev, s.rng);
    if (cfg.fixed_point()) {
        // Forward was next = 2*center - older + D(center); center is q_prev here.
        const std::int64_t older =
            detail::wrap_add(detail::wrap_sub(detail::wrap_add(s.grid_prev, s.grid_prev), s.grid_curr),
                             detail::grid_increment(cfg, s.grid_prev, kick));
        s.grid_curr = s.grid_prev;
        s.grid_prev = older;
        s.q_prev = detail::from_grid(s.grid_prev, cfg.frac_bits());
        s.q_curr = detail::from_grid(s.grid_curr, cfg.frac_bits());
    } else {
        const double gamma = cfg.drag();
        const double accel = force_at(cfg.force, s.q_prev) / cfg.mass * cfg.dt * cfg.dt;
        const double q_older = ((2.0 - gamma) * s.q_prev + accel
                                + kick * cfg.dt * cfg.dt / cfg.mass - s.q_curr)
                               / (1.0 - gamma);
        s.q_curr = s.q_prev;
        s.q_prev = q_older;
    }
    --s.step_index;
    return s;
}

struct ReplayReport {
    std::uint64_t steps = 0;
    double max_position_deviation = 0.0;
    bool rng_state_restored = false;
    bool bit_exact = false;
};

struct TrajectorySample {
    std::int64_t step = 0;
    double q = 0.0;
    std::uint64_t uniforms_consumed = 0; // cumulative within the pass
};

/// Runs n steps forward, then n steps backward, comparing the retraced
/// positions against the recorded forward trajectory. Optional logs receive
/// one sample per state (including the starting state of each pass).
inline ReplayReport run_bidirectional(const LangevinConfig& cfg, double q0, double q1,
                                      CoupledState rng_seed, std::uint64_t n,
                                      std::vector<TrajectorySample>* forward_log = nullptr,
                                      std::vector<TrajectorySample>* backward_log = nullptr) {
    cfg.validate();
    if (n < 1) {
        throw std::invalid_argument("run_bidirectional: n must be >= 1");
    }

    const SimState initial = make_state(cfg, q0, q1, rng_seed);
    std::vector<SimState> path(n + 1);
    path[0] = initial;
    if (forward_log) {
        forward_log->clear();
        forward_log->push_back({0, initial.q_curr, 0});
    }

    SimState s = initial;
    for (std::uint64_t i = 1; i <= n; ++i) {
        s = step_forward(cfg, s);
        path[i] = s;
        if (forward_log) {
            forward_log->push_back({static_cast<std::int64_t>(i), s.q_curr, 2 * i});
        }
    }

    if (backward_log) {
        backward_log->clear();
        backward_log->push_back({static_cast<std::int64_t>(n), s.q_curr, 0});
    }
    double max_dev = 0.0;
    for (std::uint64_t j = 1; j <= n; ++j) {
        s = step_backward(cfg, s);
        const SimState& expected = path[n - j];
        max_dev = std::max(max_dev, std::abs(s.q_curr - expected.q_curr));
        if (backward_log) {
            backward_log->push_back({static_cast<std::int64_t>(n - j), s.q_curr, 2 * j});
        }
    }
    max_dev = std::max(max_dev, std::abs(s.q_prev - initial.q_prev));

    const bool rng_restored = s.rng == initial.rng;
    const bool positions_exact = cfg.fixed_point()
                                     ? (s.grid_prev == initial.grid_prev && s.grid_curr == initial.grid_curr)
                                     : (s.q_prev == initial.q_prev && s.q_curr == initial.q_curr);
    const bool bit_exact = rng_restored && positions_exact && max_dev == 0.0;
    return ReplayReport{n, max_dev, rng_restored, bit_exact};
}

} // namespace revgen::langevin
