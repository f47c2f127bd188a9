#pragma once

// Named warp-factor families for band models, plus the randomized
// distribution used by the band-width sweep.
//
// Sweep distribution: family uniform over {constant, exp, cosh, cos, power};
// amplitude log-uniform in [0.5, 2]; rate log-uniform in [0.1, 2]; power
// exponent uniform in [-1, 1]; genus uniform in {1, 2, 3}; fiber area
// log-uniform in [0.5, 20]; half-width uniform in [0.1, 3], shrunk for cos
// and power so that phi stays positive.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pscend/mu_bubble.hpp"

namespace pscend {

struct PhiSpec {
    std::string family = "constant";  // constant | exp | cosh | cos | power | spline
    double amp = 1.0;
    double rate = 1.0;
    double power = 0.5;
    /// Uniformly spaced values of phi on [-T, T] for the spline family.
    std::vector<double> samples;
};

const std::vector<std::string>& phi_families();

/// Warp factor with exact derivatives. Throws DomainError if the family is
/// unknown or phi would not be positive on [-half_width, half_width].
JetFunction make_phi(const PhiSpec& spec, double half_width);

std::string describe(const PhiSpec& spec);

struct RandomBand {
    PhiSpec phi;
    int genus = 1;
    double fiber_area = 1.0;
    double half_width = 1.0;

    BandModel model() const;
};

RandomBand random_band(std::mt19937_64& rng);

}  // namespace pscend
