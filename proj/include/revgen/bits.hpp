#pragma once

#include <cstdint>

namespace revgen {

// Largest word width for which (a*x + c) & mask is still exact in
// unsigned 64-bit wraparound arithmetic with headroom to spare.
inline constexpr unsigned kMaxWordBits = 62;

constexpr std::uint64_t pow2(unsigned bits) noexcept {
    return std::uint64_t{1} << bits;
}

constexpr std::uint64_t low_mask(unsigned bits) noexcept {
    return pow2(bits) - 1;
}

namespace detail {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

} // namespace detail

} // namespace revgen
