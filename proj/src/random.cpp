#include "lowbessel/random.hpp"

#include <cmath>
#include <stdexcept>

namespace lowbessel {

void fill_brownian(Engine& rng, std::span<const double> step_sizes, std::span<double> out) {
    if (out.size() != step_sizes.size())
        throw std::invalid_argument("fill_brownian: size mismatch");
    std::normal_distribution<double> z(0.0, 1.0);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::sqrt(step_sizes[i]) * z(rng);
}

void coarsen_increments(std::span<const double> fine, std::size_t factor, std::span<double> out) {
    if (factor == 0 || fine.size() != out.size() * factor)
        throw std::invalid_argument("coarsen_increments: size mismatch");
    for (std::size_t i = 0; i < out.size(); ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < factor; ++k) acc += fine[i * factor + k];
        out[i] = acc;
    }
}

}  // namespace lowbessel
