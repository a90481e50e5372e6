#pragma once

#include <cstdint>
#include <string>

#include "wbrm/banded.hpp"

namespace wbrm {

/// One realization of the banded random-matrix ensemble:
/// H(lambda) = H0 + lambda*V with H0 = diag(1..n) and V a symmetric banded
/// matrix of standard normals (zero diagonal).
struct WbrmInstance {
    int n = 0;
    int b = 0;
    double lambda = 0.0;
    std::uint64_t seed = 0;
    BandedSymmetricMatrix v;
};

/// Deterministic in (n, b, seed); every band element is derived from its own
/// counter so generation order (or thread count) cannot change the draw.
WbrmInstance generate_wbrm(int n, int b, double lambda, std::uint64_t seed);

/// H = H0 + lambda*V as a banded matrix.
BandedSymmetricMatrix hamiltonian(const WbrmInstance& inst);

/// Parameters-only serialization; bands are regenerated, never stored.
std::string instance_to_json(const WbrmInstance& inst);
WbrmInstance instance_from_json(const std::string& text);

}  // namespace wbrm
