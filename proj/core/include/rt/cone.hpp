#pragma once

#include <vector>

#include "rt/complex.hpp"

namespace rt {

// Chain map f : C1 -> C2 with d2 f_i = f_{i+1} d1.
class Morphism {
public:
    Morphism(CochainComplex source, CochainComplex target, std::vector<EquivariantMap> maps);

    static Morphism identity(const CochainComplex& c);

    const CochainComplex& source() const { return src_; }
    const CochainComplex& target() const { return tgt_; }
    int size() const { return src_.size(); }
    EquivariantMap map(int i) const;
    // S2 f_i S1^{-1}: the components in orthonormal coordinates.
    std::vector<Matrix> ortho_maps() const;
    Morphism operator-() const;

private:
    CochainComplex src_, tgt_;
    std::vector<EquivariantMap> f_;
};

// f2 o f1.
Morphism compose(const Morphism& f2, const Morphism& f1);

CochainComplex cone(const Morphism& f);
// Max-norm difference between laplacian(cone(f), i) and its block formula.
double cone_laplacian_check(const Morphism& f, int i);
double cone_torsion(const Morphism& f);
double morphism_log_vol_sum(const Morphism& f);

// 0 -> C1 -> C -> C3 -> 0 with C_i = C1_i + C3_i and d = [[d1, f], [0, d3]], f_i : C3_i -> C1_{i+1}.
// The middle metric defaults to the orthogonal sum.
struct ShortExactSequence {
    CochainComplex sub;
    CochainComplex quotient;
    std::vector<EquivariantMap> twist;
    std::vector<std::optional<EquivariantMap>> middle_metric;

    CochainComplex middle() const;
    ShortExactSequence scaled(double t) const;
    // Reads cone(h) as the extension 0 -> suspension(target) -> cone(h) -> source -> 0.
    static ShortExactSequence from_cone(const Morphism& h);
};

// Checks f_{i+1} d3_i + d1_{i+1} f_i = 0 and shapes; throws ValidationError otherwise.
void validate(const ShortExactSequence& s);

struct MilnorResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double sub = 0.0, quotient = 0.0, homology = 0.0, rows = 0.0;
    double residual() const { return std::abs(lhs - rhs); }
};
MilnorResult milnor_identity(const ShortExactSequence& s);

struct CmmResult {
    double direct = 0.0;
    double sum = 0.0;
    double residual() const { return std::abs(direct - sum); }
};
CmmResult cmm_additivity(const ShortExactSequence& s);

struct DeformationProbe {
    std::vector<double> t;
    std::vector<double> torsion;
    std::vector<double> derivative;
    double max_derivative = 0.0;
    double max_a41 = 0.0;
    double max_epsilon = 0.0;
    double max_gamma_residual = 0.0;
    double max_trace_sum = 0.0;    // |sum (-1)^q Tr(dD_q D_q^+)|
    double max_trace_split = 0.0;  // residual of the three-term trace split
};
DeformationProbe cmm_deformation_probe(const ShortExactSequence& s, const std::vector<double>& grid);

struct CompositionResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual() const { return std::abs(lhs - rhs); }
};
CompositionResult composition_rule(const Morphism& f1, const Morphism& f2);

enum class IsometricFactor { First, Second };
struct AbsorptionResult {
    double composite = 0.0;
    double factor = 0.0;
    double isometry_defect = 0.0;
    double residual() const { return std::abs(composite - factor); }
};
AbsorptionResult isometry_absorption(const Morphism& f1, const Morphism& f2, IsometricFactor which);

// max_i || f_i^dagger f_i - Id || in the metrics, over all degrees.
double isometry_defect(const Morphism& f);

}  // namespace rt
