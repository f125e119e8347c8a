#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace oht {

// Thrown when an exhaustive enumeration or lattice scan would exceed its
// configured work cap. Loud failure instead of silent truncation.
struct capacity_error : std::runtime_error {
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

// C(n, k), saturated at cap + 1 so callers can test "> cap" safely.
inline std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    unsigned __int128 c = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;  // integral at every step
        if (c > cap) return cap + 1;
    }
    return static_cast<std::uint64_t>(c);
}

}  // namespace oht
