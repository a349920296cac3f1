#pragma once

#include <optional>
#include <vector>

#include "rt/ortho.hpp"
#include "rt/spectral.hpp"

namespace rt {

// Cochain complex C_0 -> ... -> C_N of free Hilbert modules. Degree i may carry a positive
// metric G_i, so that <u, v>_i = <G_i u, v>; absent metrics are the identity.
class CochainComplex {
public:
    CochainComplex(std::vector<HilbertModule> modules, std::vector<EquivariantMap> differentials,
                   std::vector<std::optional<EquivariantMap>> metrics = {});

    const Backend& backend() const { return g_; }
    int size() const { return static_cast<int>(modules_.size()); }
    int top_degree() const { return size() - 1; }
    HilbertModule module(int i) const;
    EquivariantMap differential(int i) const;
    EquivariantMap metric(int i) const;
    bool has_metric(int i) const;
    const std::vector<HilbertModule>& modules() const { return modules_; }

    // G_i^{1/2} and its inverse, expanded.
    Matrix whitener(int i) const;
    Matrix inverse_whitener(int i) const;
    // The complex in orthonormal coordinates.
    OrthoComplex ortho() const;

private:
    Backend g_;
    std::vector<HilbertModule> modules_;
    std::vector<EquivariantMap> d_;
    std::vector<std::optional<EquivariantMap>> metrics_;
    std::vector<Matrix> whiten_, unwhiten_;
};

// Adjoint of phi : (V, gs) -> (W, gt), i.e. gs^{-1} phi^* gt.
EquivariantMap metric_adjoint(const EquivariantMap& phi, const EquivariantMap& gs, const EquivariantMap& gt);
EquivariantMap d_adjoint(const CochainComplex& c, int i);

EquivariantMap laplacian(const CochainComplex& c, int i);
SpectralData laplacian_spectrum(const CochainComplex& c, int i);
// Spectrum of |d_i| measured in the metrics.
SpectralData differential_spectrum(const CochainComplex& c, int i);

struct HodgeDecomposition {
    std::vector<EquivariantMap> harmonic;
    std::vector<EquivariantMap> plus;   // projection onto the range of d_{i-1}
    std::vector<EquivariantMap> minus;  // projection onto the range of the adjoint of d_i
};
HodgeDecomposition hodge(const CochainComplex& c);

std::vector<double> cohomology_dims(const CochainComplex& c);
bool is_acyclic(const CochainComplex& c);

enum class TorsionMode { Strict, Lenient };

struct TorsionReport {
    double value = 0.0;
    TorsionFormulas formulas;
    bool consistent = true;  // the three routes agree within 1e-9
};

TorsionReport torsion_report(const CochainComplex& c, TorsionMode mode = TorsionMode::Strict);
double torsion(const CochainComplex& c, TorsionMode mode = TorsionMode::Strict);
double det_class_value(const CochainComplex& c);

// log vol of phi : (V, gs) -> (W, gs), over its nonzero spectrum.
double metric_log_vol(const EquivariantMap& phi, const EquivariantMap& gs, const EquivariantMap& gt);

CochainComplex suspension(const CochainComplex& c);
CochainComplex dual(const CochainComplex& c);
CochainComplex direct_sum(const CochainComplex& a, const CochainComplex& b);
// Appends zero modules up to `size` degrees.
CochainComplex pad(const CochainComplex& c, int size);
// Replaces each d_i by xi (eta + eps) where d_i = xi eta is its polar decomposition.
CochainComplex acyclic_deformation(const CochainComplex& c, double eps);
// Conjugates every degree by an equivariant unitary u_i (metrics must be standard).
CochainComplex unitary_transform(const CochainComplex& c, const std::vector<EquivariantMap>& u);
CochainComplex with_metrics(const CochainComplex& c, std::vector<std::optional<EquivariantMap>> metrics);

struct UnitShift {
    double plain;  // sum (-1)^k logdet(Delta_k + Id)
    double power;  // sum (-1)^k logdet(Delta_k + (Id + Delta_k)^sigma)
};
UnitShift unit_shift_identity(const CochainComplex& c, double sigma);

}  // namespace rt
