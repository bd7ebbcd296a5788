#pragma once
//
// Line-for-line integer transcriptions of the classic FORTRAN listings for
// the rund generator and its reversed counterpart, kept in listing form
// (signed integers, truncating mod and division). The conformance command
// and the oracle tests replay these against the library's stepping.

#include <cstdint>

namespace revgen::reference {

inline constexpr std::int64_t kItems = 4194304; // 2^22, the full state period

// function rund(intx, inty)
inline double rund(std::int64_t& intx, std::int64_t& inty) {
    std::int64_t i = 1029 * intx + 1731;
    std::int64_t j = i + 1029 * inty + 507 * intx - 1731;
    intx = i % 2048;
    j = j + (i - intx) / 2048;
    inty = j % 2048;
    return static_cast<double>(intx + 2048 * inty) / 4194304.0;
}

// Body of the reversed loop. The "+ items" keeps the truncating mod away
// from negative operands; 2048 divides items, so the residue is unchanged.
inline void rund_reverse(std::int64_t& intx, std::int64_t& inty) {
    std::int64_t oldx = (205 * intx + 1497) % 2048;
    inty = inty + kItems - 1536 * oldx - (1029 * oldx + 1731 - intx) / 2048;
    inty = (205 * inty) % 2048;
    intx = oldx;
}

} // namespace revgen::reference
