#pragma once

#include <map>
#include <string>
#include <vector>

#include "rt/morse.hpp"

namespace rt {

// Self-adjoint equivariant h_k in every degree.
struct HeightOperator {
    std::vector<EquivariantMap> h;

    EquivariantMap at(int k, const CochainComplex& c) const;
    // sum_k (-1)^k Tr_N h_k
    double alternating_trace() const;
};

// Diagonal heights per cell of m (cells absent from the map get height 0).
HeightOperator height_operator(const MorseData& m, const std::map<std::string, double>& heights, const Backend& g,
                               int rank);

// d_k(t) = e^{-t h_{k+1}} d_k e^{t h_k}; metrics unchanged.
CochainComplex deform(const CochainComplex& c, const HeightOperator& h, double t);
// Multiplication by e^{th} from (C, d(t)) to (C, d).
Morphism exponential_morphism(const CochainComplex& c, const HeightOperator& h, double t);
// log R(t): cone torsion of Int o e^{th} with h acting on the source of Int.
double deformed_relative_torsion(const Morphism& integration, const HeightOperator& h, double t);

struct AffineCheck {
    std::vector<double> t;
    std::vector<double> values;
    double slope = 0.0;
    double intercept = 0.0;
    double max_second_difference = 0.0;
    double expected_slope = 0.0;
};
AffineCheck affine_check(const Morphism& integration, const HeightOperator& h, const std::vector<double>& grid);

// Orthonormal bases (in whitened coordinates) of the spectral subspaces of Delta_k(t) below and
// above the threshold.
struct SpectralSplit {
    double t = 0.0;
    double threshold = 1.0;
    bool threshold_moved = false;
    std::vector<Matrix> small;
    std::vector<Matrix> large;
    std::vector<double> small_dims;  // von Neumann dimensions
    double max_commutator = 0.0;     // max_k ||Q_{k+1} d_k - d_k Q_k||
    double max_projector_commutator = 0.0;  // max_k ||Q_k Delta_k - Delta_k Q_k||
};
SpectralSplit spectral_split(const CochainComplex& deformed, double t);

struct SplitResult {
    double total = 0.0;
    double sm = 0.0;
    double la = 0.0;
    double large_betti = 0.0;  // total harmonic dimension of the large part
    SpectralSplit split;
    double residual() const { return std::abs(total - sm - la); }
};
SplitResult split_additivity(const Morphism& integration, const HeightOperator& h, double t);

struct SweepRow {
    double t, total, sm, la, slope_residual;
};
std::vector<SweepRow> witten_sweep(const Morphism& integration, const HeightOperator& h, const std::vector<double>& grid,
                                   int threads = 1);

struct ScalingTorsion {
    double direct = 0.0;          // sum_k (-1)^k m_k rank log S_k(t)
    double closed_form = 0.0;     // t_coefficient t - log_coefficient log(pi/t)
    double t_coefficient = 0.0;   // rank sum_j (-1)^j j m_j
    double log_coefficient = 0.0; // rank sum_j (-1)^j (n/4 - j/2) m_j
};
// S_k(t) = e^{-tk} (pi/t)^{n/4 - k/2}.
ScalingTorsion scaling_torsion(const std::vector<int>& m, int rank, int n, double t);
double scaling_factor(int k, int n, double t);
// S(t) as a chain map from (C, d') to (C, d) with d'_k = S_k/S_{k+1} d_k.
Morphism scaling_morphism(const CochainComplex& c, int n, double t);

}  // namespace rt
