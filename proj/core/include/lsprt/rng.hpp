#pragma once

#include <cstdint>
#include <random>

namespace lsprt {

using Engine = std::mt19937_64;

// SplitMix64 finalizer. Used to derive independent child seeds from a root
// seed and a counter so per-trial streams do not depend on scheduling.
std::uint64_t mix64(std::uint64_t x);

// Child seed for (root, a, b, c). Distinct tuples give unrelated seeds.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

inline Engine make_engine(std::uint64_t seed) { return Engine{mix64(seed)}; }

} // namespace lsprt
