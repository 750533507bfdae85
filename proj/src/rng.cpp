#include "cfl/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace cfl {

int SplitMix64::poisson(double mean) {
    if (!(mean > 0.0)) throw std::domain_error("poisson mean must be positive");
    const double limit = std::exp(-mean);
    int k = 0;
    double product = next_double();
    while (product > limit) {
        ++k;
        product *= next_double();
    }
    return k;
}

}  // namespace cfl
