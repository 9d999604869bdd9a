#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <vector>

namespace robustgd::detail {

// Order-preserving map from double to unsigned key (NaN excluded upstream).
inline std::uint64_t sortable_key(double v) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, sizeof bits);
    return (bits & 0x8000000000000000ULL) ? ~bits : (bits | 0x8000000000000000ULL);
}

inline double key_value(std::uint64_t key) {
    const std::uint64_t bits = (key & 0x8000000000000000ULL) ? (key & ~0x8000000000000000ULL) : ~key;
    double v = 0.0;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

/// LSD radix sort in 11-bit digits; passes where every key shares the digit
/// are skipped. Equivalent to std::sort on finite values.
inline void radix_sort(std::vector<double>& values) {
    constexpr int kBits = 11;
    constexpr std::size_t kBuckets = std::size_t{1} << kBits;
    constexpr int kPasses = (64 + kBits - 1) / kBits;

    const std::size_t n = values.size();
    if (n < 64) {
        std::vector<std::uint64_t> keys(n);
        for (std::size_t i = 0; i < n; ++i) keys[i] = sortable_key(values[i]);
        for (std::size_t i = 1; i < n; ++i) {
            const std::uint64_t k = keys[i];
            std::size_t j = i;
            for (; j > 0 && keys[j - 1] > k; --j) keys[j] = keys[j - 1];
            keys[j] = k;
        }
        for (std::size_t i = 0; i < n; ++i) values[i] = key_value(keys[i]);
        return;
    }

    std::vector<std::uint64_t> keys(n), scratch(n);
    std::array<std::array<std::uint32_t, kBuckets>, kPasses> counts{};
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t k = sortable_key(values[i]);
        keys[i] = k;
        for (int p = 0; p < kPasses; ++p) ++counts[p][(k >> (p * kBits)) & (kBuckets - 1)];
    }

    for (int p = 0; p < kPasses; ++p) {
        auto& c = counts[p];
        if (c[(keys[0] >> (p * kBits)) & (kBuckets - 1)] == n) continue;
        std::uint32_t sum = 0;
        for (auto& x : c) {
            const std::uint32_t t = x;
            x = sum;
            sum += t;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint64_t k = keys[i];
            scratch[c[(k >> (p * kBits)) & (kBuckets - 1)]++] = k;
        }
        keys.swap(scratch);
    }
    for (std::size_t i = 0; i < n; ++i) values[i] = key_value(keys[i]);
}

}  // namespace robustgd::detail
