#pragma once

#include <functional>
#include <vector>

#include "rt/equivariant.hpp"

namespace rt {

struct SpectralPair {
    double value;
    double multiplicity;  // von Neumann
};

// Spectrum of a nonnegative operator with von Neumann multiplicities, ascending.
struct SpectralData {
    std::vector<SpectralPair> pairs;
    double ambient_dim = 0.0;

    double kernel_dim() const;
    double positive_dim() const;
    double max_value() const;
};

// Builds spectral data from raw values, each counted with weight `multiplicity`.
// Values within dim*eps*64 of the largest are merged; values below that threshold become 0.
SpectralData make_spectrum(const std::vector<double>& values, double multiplicity);

// Spectrum of |phi| on its source.
SpectralData spectral_data(const EquivariantMap& phi);
// Eigenvalues of a self-adjoint nonnegative map.
SpectralData self_adjoint_spectrum(const EquivariantMap& phi);

// Counting functions: F_plus counts 0 < value < lambda, F counts value < lambda.
double F_plus(const SpectralData& s, double lambda);
double F(const SpectralData& s, double lambda);

double heat_trace(const SpectralData& s, double t);

// Dirichlet series over the positive spectrum and its incomplete-gamma split at t = 1.
cplx zeta(const SpectralData& s, cplx z);
cplx zeta_I(const SpectralData& s, cplx z);
cplx zeta_II(const SpectralData& s, cplx z);
cplx zeta_derivative(const SpectralData& s, cplx z);

double log_vol(const SpectralData& s);
double log_vol(const EquivariantMap& phi);
double trace_norm(const EquivariantMap& phi);
double operator_norm(const EquivariantMap& phi);

// The smooth monotone profile g with g = a below a and g = lambda above b.
double shift_profile(double lambda, double a, double b);
// f(phi) with f(lambda) = g(lambda) - lambda.
EquivariantMap spectral_shift(const EquivariantMap& phi, double a, double b);

// f(t) = sum_j a_j t^{alpha_j} + constant + remainder(t) on (0, 1], remainder = O(t^rho).
struct AsymptoticProfile {
    std::vector<std::pair<double, double>> singular;  // (alpha_j < 0, a_j)
    double constant = 0.0;
    std::function<double(double)> remainder;
    double remainder_order = 1.0;
};

// (1/Gamma(s)) int_0^1 t^{s-1} f(t) dt continued analytically to a neighbourhood of 0.
double mellin_transform(const AsymptoticProfile& p, double s);
double mellin_free_term(const AsymptoticProfile& p);

struct ZetaDifference {
    double value;              // zeta_I_phi(0) - zeta_I_{phi+u}(0)
    double kernel_difference;  // dim ker phi - dim ker (phi + u)
};
ZetaDifference zeta_difference_at_zero(const EquivariantMap& phi, const EquivariantMap& u);

}  // namespace rt
