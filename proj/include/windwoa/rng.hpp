#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace windwoa {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

/// Derives an independent child seed from a base seed and a path of indices,
/// e.g. derive_seed(master, {task, repetition}). Adding siblings to a path
/// never changes the seeds of existing paths.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace windwoa
