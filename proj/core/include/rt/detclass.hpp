#pragma once

#include <string>
#include <vector>

#include "rt/complex.hpp"

namespace rt {

// Samples of alpha on a grid of the circle. log_abs carries log|alpha| exactly where |alpha|
// underflows; it is -inf at exact zeros.
struct GridFunction {
    std::vector<double> x;
    std::vector<cplx> values;
    std::vector<double> log_abs;

    int n() const { return static_cast<int>(values.size()); }
};

// Midpoint samples x_j = (j + 1/2)/n of a named family:
//   constant c | circle_symbol (e^{2 pi i x} - 1) | flat (exp(-1/x^2)) | roots (1 - e^{2 pi i x}, x = j/n)
struct Family {
    std::string name;
    double parameter = 1.0;
};
GridFunction sample(const Family& f, int n);
GridFunction from_samples(std::vector<cplx> values);

// |alpha_j| with multiplicity 1/n each.
SpectralData mult_spectrum(const GridFunction& f);
// mu{x : |alpha(x)| <= lambda}, computed from log_abs.
double distribution(const GridFunction& f, double lambda);
// (1/n) sum over 0 < |alpha_j| <= 1 of log|alpha_j|.
double partial_logdet(const GridFunction& f);

enum class ZeroPolicy { Reject, OffKernel };
// (1/n) sum log|alpha_j|: the torsion of 0 -> C^n -> C^n -> 0 with delta = -M_alpha, per unit length.
double circle_torsion(const GridFunction& f, ZeroPolicy zeros = ZeroPolicy::Reject);
CochainComplex circle_complex(const GridFunction& f);

enum class Verdict { Convergent, Divergent, Inconclusive };
std::string to_string(Verdict v);

struct DivergenceResult {
    Verdict verdict = Verdict::Inconclusive;
    std::vector<int> grids;
    std::vector<double> values;
};
// Convergent if the last three partial_logdet values lie within tol of each other, divergent if the
// last three increments are all <= -tol.
DivergenceResult divergence_probe(const Family& f, const std::vector<int>& grids, double tol = 0.05);

struct DetclassRow {
    int n;
    double partial_logdet, circle_torsion;
};
std::vector<DetclassRow> detclass_sweep(const Family& f, const std::vector<int>& grids, int threads = 1);

}  // namespace rt
