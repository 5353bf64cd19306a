#pragma once

#include "exactfit/nets.hpp"

#include <cstdint>

namespace exactfit::corpus {

struct RandomInstanceParams {
  int d = 1;
  int n = 2;
  int k = 1;
  int value_min = -2;
  int value_max = 2;
  nets::Activation activation = nets::Activation::Relu;
};

/// Deterministic desk-scale instance: n distinct integer grid points from
/// [value_min, value_max]^d with integer labels from the same range,
/// gamma = 0. Same seed and parameters always yield the same instance.
nets::Instance make_random_instance(std::uint64_t seed, const RandomInstanceParams& params);

}  // namespace exactfit::corpus
