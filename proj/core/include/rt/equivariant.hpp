#pragma once

#include <functional>
#include <vector>

#include "rt/group.hpp"

namespace rt {

// l^2(G)^rank; its von Neumann dimension equals its rank.
struct HilbertModule {
    Backend backend;
    int rank = 0;

    double vn_dim() const { return rank; }
    Eigen::Index dim() const { return static_cast<Eigen::Index>(rank) * backend->order(); }
    bool operator==(const HilbertModule& o) const { return backend == o.backend && rank == o.rank; }
};

// A target.rank x source.rank matrix of algebra elements acting by right translation.
// Composition multiplies coefficients in opposite order so that expansion is multiplicative.
class EquivariantMap {
public:
    EquivariantMap(Backend g, int target_rank, int source_rank);
    EquivariantMap(Backend g, int target_rank, int source_rank, std::vector<AlgebraElement> entries);

    static EquivariantMap identity(Backend g, int rank, cplx c = 1.0);
    static EquivariantMap diagonal(const std::vector<AlgebraElement>& entries);
    static EquivariantMap scalar(Backend g, const Matrix& coeffs);
    // Reads coefficients back from an expanded matrix; throws ValidationError if the matrix
    // does not commute with the left action within tol (relative).
    static EquivariantMap from_expanded(Backend g, int target_rank, int source_rank, const Matrix& m,
                                        double tol = 1e-8);
    // 2x2 block map [[a, b], [c, d]] with compatible ranks; pass rank sizes for empty blocks.
    static EquivariantMap block(const EquivariantMap& a, const EquivariantMap& b, const EquivariantMap& c,
                                const EquivariantMap& d);

    const Backend& backend() const { return g_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    HilbertModule source() const { return {g_, cols_}; }
    HilbertModule target() const { return {g_, rows_}; }
    const AlgebraElement& entry(int i, int j) const { return e_[static_cast<std::size_t>(i * cols_ + j)]; }
    const Matrix& expanded() const { return x_; }

    EquivariantMap operator*(const EquivariantMap& o) const;
    EquivariantMap operator+(const EquivariantMap& o) const;
    EquivariantMap operator-(const EquivariantMap& o) const;
    EquivariantMap operator-() const;
    EquivariantMap operator*(cplx s) const;

    EquivariantMap adjoint() const;
    EquivariantMap sub(int row0, int col0, int nrows, int ncols) const;
    double norm() const { return x_.norm(); }

private:
    Backend g_;
    int rows_, cols_;
    std::vector<AlgebraElement> e_;
    Matrix x_;
};

// sum_g c_g r(g) with r(g) delta_h = delta_{hg}.
Matrix expand(const Group& g, const AlgebraElement& a);
Matrix expand(const EquivariantMap& phi);

// (1/|G|) tr expand(phi) for square phi.
cplx vn_trace(const EquivariantMap& phi);

// Entrywise star followed by transpose.
EquivariantMap adjoint(const EquivariantMap& phi);

// Frobenius norm of m - expand(compress(m)), relative to ||m||.
double equivariance_residual(const Group& g, int target_rank, int source_rank, const Matrix& m);

EquivariantMap inverse(const EquivariantMap& phi);
EquivariantMap hermitian_function(const EquivariantMap& phi, const std::function<double(double)>& f);

}  // namespace rt
