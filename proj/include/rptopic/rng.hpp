#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace rptopic {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

// Labeled substream of a master seed. Distinct (label, index) pairs give
// statistically independent generators; the mapping is stable across runs.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                          std::uint64_t index = 0);

inline Rng make_rng(std::uint64_t master, std::string_view label,
                    std::uint64_t index = 0) {
  return Rng(derive_seed(master, label, index));
}

void fill_standard_normal(std::span<double> out, Rng& rng);

}  // namespace rptopic
