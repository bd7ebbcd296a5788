#pragma once
//
// Shear and reflection maps on the unit square in exact fixed-point
// arithmetic. A point stores the integer numerators of (q, p) = (num/2^F,
// num/2^F); mod-1 wraparound is plain integer wraparound, so applying a map
// and checking time reversibility are bit-exact operations.
//
// Time reversal T negates the momentum: (q, p) -> (q, -p mod 1). A map M is
// reversible in the physicist's sense when T o M is an involution, which is
// what check_reversibility tests point by point.

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "revgen/bits.hpp"
#include "revgen/errors.hpp"

namespace revgen::maps {

inline constexpr unsigned kDefaultFracBits = 32;

inline void validate_frac_bits(unsigned frac_bits) {
    if (frac_bits < 1 || frac_bits > 62) {
        throw RangeError("frac_bits must be in [1, 62]");
    }
}

struct PhasePoint {
    std::uint64_t q = 0;
    std::uint64_t p = 0;

    friend constexpr bool operator==(const PhasePoint&, const PhasePoint&) = default;
};

struct ShearQ {
    std::int64_t coefficient = 1; // q' = q + s*p (mod 1)
};

struct ShearP {
    std::int64_t coefficient = 1; // p' = p + s*q (mod 1)
};

struct Exchange {}; // (q, p) -> (p, q)

struct ReversibleMap;

struct Composite {
    std::vector<ReversibleMap> parts; // applied left to right
};

struct ReversibleMap {
    std::variant<ShearQ, ShearP, Exchange, Composite> op;
};

inline PhasePoint time_reverse(PhasePoint pt, unsigned frac_bits = kDefaultFracBits) {
    validate_frac_bits(frac_bits);
    const std::uint64_t msk = low_mask(frac_bits);
    return PhasePoint{pt.q & msk, (0 - pt.p) & msk};
}

inline PhasePoint apply(const ReversibleMap& map, PhasePoint pt,
                        unsigned frac_bits = kDefaultFracBits) {
    validate_frac_bits(frac_bits);
    const std::uint64_t msk = low_mask(frac_bits);
    return std::visit(
        detail::overloaded{
            [&](const ShearQ& s) {
                return PhasePoint{(pt.q + static_cast<std::uint64_t>(s.coefficient) * pt.p) & msk,
                                  pt.p & msk};
            },
            [&](const ShearP& s) {
                return PhasePoint{pt.q & msk,
                                  (pt.p + static_cast<std::uint64_t>(s.coefficient) * pt.q) & msk};
            },
            [&](const Exchange&) { return PhasePoint{pt.p & msk, pt.q & msk}; },
            [&](const Composite& c) {
                PhasePoint r = pt;
                for (const ReversibleMap& part : c.parts) {
                    r = apply(part, r, frac_bits);
                }
                return r;
            },
        },
        map.op);
}

struct ReversibilityResult {
    bool reversible = false;
    std::optional<PhasePoint> counterexample;
};

/// True iff apply(M, T(apply(M, pt))) == T(pt) for every sampled point,
/// bit-exactly; equivalently, T o M is an involution on the sample.
inline ReversibilityResult check_reversibility(const ReversibleMap& map,
                                               std::span<const PhasePoint> points,
                                               unsigned frac_bits = kDefaultFracBits) {
    validate_frac_bits(frac_bits);
    for (const PhasePoint& pt : points) {
        const PhasePoint once = apply(map, pt, frac_bits);
        const PhasePoint back = apply(map, time_reverse(once, frac_bits), frac_bits);
        if (!(back == time_reverse(pt, frac_bits))) {
            return ReversibilityResult{false, pt};
        }
    }
    return ReversibilityResult{true, std::nullopt};
}

/// [Q, P, R] -> QPRPQ: the list followed by its mirror without the pivot.
inline ReversibleMap compose_palindrome(const std::vector<ReversibleMap>& half) {
    if (half.empty()) {
        throw std::invalid_argument("compose_palindrome: list must be nonempty");
    }
    if (half.size() == 1) {
        return half.front();
    }
    Composite full{half};
    for (std::size_t i = half.size() - 1; i-- > 0;) {
        full.parts.push_back(half[i]);
    }
    return ReversibleMap{std::move(full)};
}

} // namespace revgen::maps
