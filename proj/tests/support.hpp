#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "errts/montecarlo.hpp"

namespace errts::testing {

[[nodiscard]] inline Series ar_path(double phi0, std::vector<double> phi, std::size_t n, std::uint64_t seed,
                                    double sigma_eps2 = 1.0) {
    SimSpec spec;
    spec.model = ArModel{phi0, std::move(phi), sigma_eps2, 3.0};
    spec.T = n;
    spec.seed = seed;
    return simulate_ar(spec);
}

[[nodiscard]] inline double rel_gap(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace errts::testing
