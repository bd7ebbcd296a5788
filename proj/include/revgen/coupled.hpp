#pragma once
//
// The two-word carry-coupled generator family and its derived reverse.
//
// One forward step, with m = 2^k and all residues nonnegative:
//
//     i      = a*x + c          (exact 64-bit integer)
//     x'     = i mod m
//     carry  = floor(i / m)
//     y'     = (e*x + a*y + carry) mod m,     e = (a + b) mod m
//
// The x word marches exactly like the single-word AffineGenerator with the
// same (a, c, k); the overflow of its update leaks into the y word, which is
// what pushes the full-state period to m^2 when (a, c, m) has full period.
//
// The reverse direction recovers the previous state from the current one:
// x_old via the inverse affine map, then the forward carry is recomputed
// exactly (a*x_old + c - x is divisible by m), and y_old follows by
// multiplying with a^-1. No history is stored anywhere.
//
// Word widths are capped at 22 bits so that a*x + c stays well inside 64
// bits and the output numerator x + m*y < 2^44 converts to double exactly.

#include <bit>
#include <cstdint>
#include <vector>

#include "revgen/affine.hpp"
#include "revgen/bits.hpp"
#include "revgen/errors.hpp"

namespace revgen {

inline constexpr unsigned kMaxCoupledWordBits = 22;

struct CoupledState {
    std::uint64_t x = 0;
    std::uint64_t y = 0;

    friend constexpr bool operator==(const CoupledState&, const CoupledState&) = default;
};

struct CoupledGenerator {
    std::uint64_t multiplier = 1029; // a
    std::uint64_t increment = 1731;  // c
    std::uint64_t shear = 507;       // b, the x coefficient added on top of a in the y update
    unsigned word_bits = 11;         // k, modulus m = 2^k

    constexpr std::uint64_t modulus() const noexcept { return pow2(word_bits); }
    constexpr std::uint64_t mask() const noexcept { return low_mask(word_bits); }

    /// e = (a + b) mod m, the x coefficient that actually appears in the y update.
    constexpr std::uint64_t effective_coupling() const noexcept {
        return (multiplier + shear) & mask();
    }

    void validate() const {
        if (word_bits < 1 || word_bits > kMaxCoupledWordBits) {
            throw RangeError("CoupledGenerator: word_bits must be in [1, 22]");
        }
        if ((multiplier & 1) == 0) {
            throw InvalidGenerator("CoupledGenerator: multiplier must be odd");
        }
        if (multiplier >= modulus() || increment >= modulus() || shear >= modulus()) {
            throw InvalidGenerator("CoupledGenerator: parameters must be < 2^word_bits");
        }
    }

    /// The single-word generator driving the x marginal.
    constexpr AffineGenerator x_generator() const noexcept {
        return AffineGenerator{multiplier, increment, word_bits};
    }

    constexpr CoupledState step_forward(CoupledState s) const noexcept {
        const std::uint64_t mixed = multiplier * s.x + increment; // < 2^45 at k <= 22
        const std::uint64_t carry = mixed >> word_bits;
        const std::uint64_t x_next = mixed & mask();
        const std::uint64_t y_next =
            (effective_coupling() * s.x + multiplier * s.y + carry) & mask();
        return CoupledState{x_next, y_next};
    }

    /// (x + m*y) / m^2 as a double. The numerator is below 2^44, so the
    /// value is exact and multiplying back by m^2 recovers it.
    constexpr double output(CoupledState s) const noexcept {
        const std::uint64_t numerator = s.x + (s.y << word_bits);
        return static_cast<double>(numerator) / static_cast<double>(modulus() * modulus());
    }

    friend constexpr bool operator==(const CoupledGenerator&, const CoupledGenerator&) = default;
};

/// The classic demonstration constants: a = 1029, c = 1731, b = 507, k = 11,
/// giving a full m^2 = 2^22 state period from any seed.
constexpr CoupledGenerator rund_generator() noexcept { return CoupledGenerator{}; }

// Stepping data for the reverse direction, derived once from the forward
// generator. Holds the forward parameters too: the carry is recovered by
// replaying the forward x update against the inverse one.
struct ReversedCoupledGenerator {
    std::uint64_t inverse_multiplier = 0;  // a^-1 mod m
    std::uint64_t reverse_increment = 0;   // (-a^-1 * c) mod m
    std::uint64_t multiplier = 0;          // forward a
    std::uint64_t increment = 0;           // forward c
    std::uint64_t effective_coupling = 0;  // forward e
    unsigned word_bits = 1;

    constexpr std::uint64_t mask() const noexcept { return low_mask(word_bits); }

    constexpr CoupledState step_backward(CoupledState s) const noexcept {
        const std::uint64_t x_old = (inverse_multiplier * s.x + reverse_increment) & mask();
        // a*x_old + c = s.x (mod m) and >= s.x, so the shift is an exact division.
        const std::uint64_t carry = (multiplier * x_old + increment - s.x) >> word_bits;
        const std::uint64_t y_old =
            (inverse_multiplier * (s.y - effective_coupling * x_old - carry)) & mask();
        return CoupledState{x_old, y_old};
    }

    friend constexpr bool operator==(const ReversedCoupledGenerator&,
                                     const ReversedCoupledGenerator&) = default;
};

inline ReversedCoupledGenerator reverse_coupled(const CoupledGenerator& gen) {
    gen.validate();
    const std::uint64_t inv = mod_inverse_pow2(gen.multiplier, gen.word_bits);
    return ReversedCoupledGenerator{
        inv,
        (0 - inv * gen.increment) & gen.mask(),
        gen.multiplier,
        gen.increment,
        gen.effective_coupling(),
        gen.word_bits,
    };
}

struct PeriodReport {
    std::uint64_t claimed_period = 0;  // m^2, the full-period claim under test
    std::uint64_t observed_period = 0; // steps until the seed first recurs
    bool all_states_visited = false;
    std::uint64_t distinct_count = 0;

    constexpr bool full_period() const noexcept {
        return all_states_visited && observed_period == claimed_period;
    }
};

/// Walks the orbit of `seed` until it closes, marking every state in an
/// m^2-bit bitmap. Exhaustive, so word widths above 16 are refused.
inline PeriodReport verify_period(const CoupledGenerator& gen, CoupledState seed) {
    gen.validate();
    if (gen.word_bits > 16) {
        throw ResourceLimit("verify_period: exhaustive bitmap supports word_bits <= 16 only");
    }
    seed = CoupledState{seed.x & gen.mask(), seed.y & gen.mask()};

    const std::uint64_t state_count = gen.modulus() * gen.modulus();
    std::vector<std::uint64_t> visited(state_count / 64 + 1, 0);
    const auto mark = [&](CoupledState s) {
        const std::uint64_t index = (s.x << gen.word_bits) | s.y;
        visited[index >> 6] |= std::uint64_t{1} << (index & 63);
    };

    CoupledState s = seed;
    std::uint64_t steps = 0;
    do {
        s = gen.step_forward(s);
        mark(s);
        ++steps;
        if (steps > state_count) {
            throw CycleNotFound("verify_period: orbit did not close within m^2 steps");
        }
    } while (!(s == seed));

    std::uint64_t distinct = 0;
    for (std::uint64_t word : visited) {
        distinct += static_cast<std::uint64_t>(std::popcount(word));
    }
    return PeriodReport{state_count, steps, distinct == state_count, distinct};
}

struct PalindromeReport {
    bool matched = false;
    std::uint64_t first_mismatch = 0; // index i with f(i) != b(n-i); 0 when matched
};

namespace detail {

template <class Packed>
PalindromeReport palindrome_sweep(const CoupledGenerator& gen, CoupledState seed, std::uint64_t n) {
    const auto pack = [&](CoupledState s) {
        return static_cast<Packed>((s.x << gen.word_bits) | s.y);
    };

    std::vector<Packed> forward(n);
    CoupledState s = seed;
    for (std::uint64_t i = 0; i < n; ++i) {
        s = gen.step_forward(s);
        forward[i] = pack(s);
    }
    if (!(s == seed)) {
        throw PeriodMismatch("verify_palindrome: forward walk of length n does not return to the seed");
    }

    const ReversedCoupledGenerator rev = reverse_coupled(gen);
    std::vector<Packed> backward(n);
    s = seed;
    for (std::uint64_t i = 0; i < n; ++i) {
        s = rev.step_backward(s);
        backward[i] = pack(s);
    }
    if (!(s == seed)) {
        throw PeriodMismatch("verify_palindrome: backward walk of length n does not return to the seed");
    }

    // forward(i) must equal backward(n - i); both walks end back at the seed.
    for (std::uint64_t i = 1; i <= n - 1; ++i) {
        if (forward[i - 1] != backward[n - i - 1]) {
            return PalindromeReport{false, i};
        }
    }
    return PalindromeReport{true, 0};
}

} // namespace detail

/// Checks the strict palindrome identity f(i) = b(n - i) between the forward
/// and backward walks out of `seed`. Requires n to be a multiple of the
/// seed's period (PeriodMismatch otherwise); for spot checks at other n use
/// verify_roundtrip instead.
inline PalindromeReport verify_palindrome(const CoupledGenerator& gen, CoupledState seed,
                                          std::uint64_t n) {
    gen.validate();
    seed = CoupledState{seed.x & gen.mask(), seed.y & gen.mask()};
    if (n == 0) {
        return PalindromeReport{true, 0};
    }
    if (2 * gen.word_bits <= 32) {
        return detail::palindrome_sweep<std::uint32_t>(gen, seed, n);
    }
    return detail::palindrome_sweep<std::uint64_t>(gen, seed, n);
}

/// Composition spot check: n forward steps, then n backward steps, true iff
/// the walk lands exactly back on `seed`. Works for any n.
inline bool verify_roundtrip(const CoupledGenerator& gen, CoupledState seed, std::uint64_t n) {
    gen.validate();
    seed = CoupledState{seed.x & gen.mask(), seed.y & gen.mask()};
    CoupledState s = seed;
    for (std::uint64_t i = 0; i < n; ++i) {
        s = gen.step_forward(s);
    }
    const ReversedCoupledGenerator rev = reverse_coupled(gen);
    for (std::uint64_t i = 0; i < n; ++i) {
        s = rev.step_backward(s);
    }
    return s == seed;
}

} // namespace revgen
