#pragma once

#include <cstdint>
#include <random>

#include "rt/cone.hpp"

namespace rt {

// Seeded generator of well-conditioned test instances.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double normal() { return normal_(eng_); }
    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(eng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

EquivariantMap random_map(const Backend& g, int rows, int cols, Rng& rng);
EquivariantMap random_unitary(const Backend& g, int rank, Rng& rng);
// Square map with singular values in [s/kappa, s] for a random scale s in [0.5, 2].
EquivariantMap random_conditioned(const Backend& g, int rank, Rng& rng, double kappa = 1e3);
EquivariantMap random_metric(const Backend& g, int rank, Rng& rng, double kappa = 4.0);

// Hodge-form assembly: degree i has rank ranks[i-1] + ranks[i] + harmonic[i] and
// d_i restricted to the complement of its kernel has condition number at most kappa.
CochainComplex random_complex(const Backend& g, const std::vector<int>& harmonic, const std::vector<int>& ranks,
                              Rng& rng, bool metrics, double kappa = 1e3);
CochainComplex random_acyclic(const Backend& g, int max_size, int max_rank, Rng& rng, bool metrics);

// Random chain isomorphism out of c: the target carries the transported differential.
Morphism random_isomorphism(const CochainComplex& c, Rng& rng, bool metrics);
// c -> c + a (a acyclic) followed by a random isomorphism: a quasi-isomorphism that is not invertible.
Morphism random_quasi_isomorphism(const CochainComplex& c, Rng& rng, bool metrics, int extra_rank = 2);
// Extension of acyclic pieces by a random admissible twist f = k d3 - d1 k.
ShortExactSequence random_extension(const CochainComplex& sub, const CochainComplex& quotient, Rng& rng,
                                    bool middle_metric = false);

}  // namespace rt
