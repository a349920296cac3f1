#pragma once

#include <vector>

#include "rt/linalg.hpp"

namespace rt {

// A cochain complex of finite-dimensional Hilbert spaces written in orthonormal coordinates.
// Traces are multiplied by `scale` (1/|G| for an expanded group-algebra complex).
struct OrthoComplex {
    std::vector<Eigen::Index> dims;
    std::vector<Matrix> d;  // d[i] : dims[i] -> dims[i+1]
    double scale = 1.0;

    int size() const { return static_cast<int>(dims.size()); }
    Eigen::Index dim(int i) const { return i < 0 || i >= size() ? 0 : dims[static_cast<std::size_t>(i)]; }
    // d_i, or a zero matrix of the right shape outside the stored range.
    Matrix diff(int i) const;
    Matrix laplacian(int i) const;
    // Eigenvalues of d d^* or Laplacians at or below this are treated as zero.
    double zero_cut() const;
    void validate(double tol = 1e-10) const;
};

// Orthonormal bases of the pieces of the Hodge decomposition in each degree.
struct OrthoHodge {
    std::vector<Matrix> plus;   // range of d_{i-1}
    std::vector<Matrix> minus;  // range of d_i^*
    std::vector<Matrix> harm;
    // d_i restricted to minus_i -> plus_{i+1} in the above bases.
    std::vector<Matrix> restricted;
};

OrthoHodge ortho_hodge(const OrthoComplex& c);

struct TorsionFormulas {
    double laplacian = 0.0;  // 1/2 sum (-1)^{q+1} q logdet Delta_q
    double via_minus = 0.0;  // 1/2 sum (-1)^q logdet of the restricted Delta^-_q
    double via_plus = 0.0;   // 1/2 sum (-1)^{q+1} logdet of the restricted Delta^+_q
    double discrepancy() const;
};

// Off-kernel torsion by three independent routes.
TorsionFormulas ortho_torsion(const OrthoComplex& c);
std::vector<double> ortho_betti(const OrthoComplex& c);
bool ortho_acyclic(const OrthoComplex& c);

// C(f)_i = tgt_{i-1} + src_i with d(f)_i = [[-d_tgt, f_i], [0, d_src]].
OrthoComplex ortho_cone(const OrthoComplex& src, const OrthoComplex& tgt, const std::vector<Matrix>& f);

// Restriction to invariant subspaces given by orthonormal bases in each degree.
OrthoComplex ortho_restrict(const OrthoComplex& c, const std::vector<Matrix>& bases);

}  // namespace rt
