#pragma once
//
// Single-word affine generators x -> (a*x + c) mod 2^k and their derived
// time-reversed counterparts.
//
// Everything is computed in unsigned 64-bit arithmetic. Wraparound mod 2^64
// is congruent mod 2^k for every k <= 64, so intermediate overflow never
// disturbs the masked result; word widths are capped at 62 bits to leave
// headroom. Generators are immutable values and stepping is a pure function,
// safe to share between threads.

#include <cstdint>
#include <vector>

#include "revgen/bits.hpp"
#include "revgen/errors.hpp"

namespace revgen {

/// Multiplicative inverse of an odd `a` modulo 2^word_bits, by Newton/Hensel
/// lifting: x <- x*(2 - a*x) doubles the number of correct low bits per
/// round, starting from x = a (correct to 3 bits since a*a = 1 mod 8).
inline std::uint64_t mod_inverse_pow2(std::uint64_t a, unsigned word_bits) {
    if (word_bits < 1 || word_bits > kMaxWordBits) {
        throw RangeError("mod_inverse_pow2: word_bits must be in [1, 62]");
    }
    if ((a & 1) == 0) {
        throw InvalidGenerator("mod_inverse_pow2: multiplier must be odd");
    }
    std::uint64_t inv = a;
    for (int round = 0; round < 5; ++round) {
        inv *= 2 - a * inv; // 3 -> 6 -> 12 -> 24 -> 48 -> 96 correct bits
    }
    return inv & low_mask(word_bits);
}

struct AffineGenerator {
    std::uint64_t multiplier = 1;
    std::uint64_t increment = 0;
    unsigned word_bits = 1;

    constexpr std::uint64_t modulus() const noexcept { return pow2(word_bits); }
    constexpr std::uint64_t mask() const noexcept { return low_mask(word_bits); }

    void validate() const {
        if (word_bits < 1 || word_bits > kMaxWordBits) {
            throw RangeError("AffineGenerator: word_bits must be in [1, 62]");
        }
        if ((multiplier & 1) == 0) {
            throw InvalidGenerator("AffineGenerator: multiplier must be odd");
        }
        if (multiplier >= modulus() || increment >= modulus()) {
            throw InvalidGenerator("AffineGenerator: multiplier and increment must be < 2^word_bits");
        }
    }

    /// (a*x + c) mod 2^k. Congruence-stable: inputs outside [0, 2^k) reduce
    /// to the same result as their residue.
    constexpr std::uint64_t step(std::uint64_t x) const noexcept {
        return (multiplier * x + increment) & mask();
    }

    friend constexpr bool operator==(const AffineGenerator&, const AffineGenerator&) = default;
};

/// Derives the generator that undoes one step: multiplier a^-1 and
/// increment (-a^-1 * c) mod 2^k.
inline AffineGenerator reverse_affine(const AffineGenerator& gen) {
    gen.validate();
    const std::uint64_t inv = mod_inverse_pow2(gen.multiplier, gen.word_bits);
    return AffineGenerator{inv, (0 - inv * gen.increment) & gen.mask(), gen.word_bits};
}

/// First n iterates from (not including) seed: s[0] = step(seed), s[i] = step(s[i-1]).
inline std::vector<std::uint64_t> iterate(const AffineGenerator& gen, std::uint64_t seed, std::uint64_t n) {
    gen.validate();
    std::vector<std::uint64_t> out(n);
    std::uint64_t x = seed;
    for (std::uint64_t i = 0; i < n; ++i) {
        x = gen.step(x);
        out[i] = x;
    }
    return out;
}

/// Smallest p >= 1 with step^p(seed) = seed. The orbit of a bijection on a
/// finite set always closes, so the 2^(k+1) cap is a bug detector, not a
/// reachable limit.
inline std::uint64_t cycle_length(const AffineGenerator& gen, std::uint64_t seed) {
    gen.validate();
    const std::uint64_t start = seed & gen.mask();
    const std::uint64_t cap = pow2(gen.word_bits + 1);
    std::uint64_t x = gen.step(start);
    std::uint64_t steps = 1;
    while (x != start) {
        if (steps >= cap) {
            throw CycleNotFound("cycle_length: orbit did not close within 2^(k+1) steps");
        }
        x = gen.step(x);
        ++steps;
    }
    return steps;
}

} // namespace revgen
