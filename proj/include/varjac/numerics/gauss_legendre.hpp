#pragma once

#include <vector>

namespace varjac::numerics {

// Nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline constexpr int kMaxGaussOrder = 64;

// Rules are built once for orders 1..kMaxGaussOrder and never mutated.
const GaussRule& gauss_legendre(int order);

}  // namespace varjac::numerics
