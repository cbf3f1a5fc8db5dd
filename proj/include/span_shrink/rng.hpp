#pragma once

// Seeded random streams and the two reference samplers.
//
// Every (cell, replicate) pair of an experiment draws from its own engine,
// seeded from (master seed, cell, replicate). Results therefore do not depend
// on the order in which replicates are executed or on the thread count.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "span_shrink/errors.hpp"
#include "span_shrink/sample.hpp"

namespace span_shrink {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cell,
                                    std::uint64_t replicate) {
  return mix64(mix64(mix64(master) ^ cell) ^ replicate);
}

inline Engine make_engine(std::uint64_t master, std::uint64_t cell,
                          std::uint64_t replicate) {
  std::seed_seq seq{derive_seed(master, cell, replicate)};
  return Engine(seq);
}

template <class URBG>
SortedSample sample_uniform(std::size_t n, double a, double b, URBG& rng) {
  if (n < 1) throw DomainError("sample_uniform: n must be >= 1");
  if (!(b > a)) throw DomainError("sample_uniform: requires b > a");
  std::uniform_real_distribution<double> dist(a, b);
  std::vector<double> values(n);
  for (double& v : values) v = dist(rng);
  return SortedSample(std::move(values));
}

template <class URBG>
SortedSample sample_gaussian(std::size_t n, double mu, double sigma, URBG& rng) {
  if (n < 1) throw DomainError("sample_gaussian: n must be >= 1");
  if (!(sigma > 0.0)) throw DomainError("sample_gaussian: sigma must be > 0");
  std::normal_distribution<double> dist(mu, sigma);
  std::vector<double> values(n);
  for (double& v : values) v = dist(rng);
  return SortedSample(std::move(values));
}

}  // namespace span_shrink
