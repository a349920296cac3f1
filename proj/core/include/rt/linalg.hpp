#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace rt {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace la {

// Relative tolerance for deciding that a spectral value is zero: dim * eps * 64.
double zero_tolerance(Eigen::Index dim);

struct Eigensystem {
    RealVector values;  // ascending
    Matrix vectors;     // columns
};

// Eigendecomposition of the Hermitian part of m.
Eigensystem hermitian_eig(const Matrix& m);

// Singular values (descending) of m.
RealVector singular_values(const Matrix& m);

// f applied to a Hermitian matrix via its eigendecomposition.
template <class F>
Matrix hermitian_function(const Matrix& m, F f) {
    const Eigensystem es = hermitian_eig(m);
    RealVector fv(es.values.size());
    for (Eigen::Index i = 0; i < fv.size(); ++i) fv(i) = f(es.values(i));
    return es.vectors * fv.asDiagonal() * es.vectors.adjoint();
}

// Positive square root and its inverse; throws ValidationError unless m is positive definite.
Matrix positive_sqrt(const Matrix& m);
Matrix positive_inv_sqrt(const Matrix& m);

// Orthonormal basis of the range of a positive semidefinite matrix, and of its kernel.
Matrix psd_range(const Matrix& psd);
Matrix psd_kernel(const Matrix& psd);
// Same with an absolute cut: eigenvalues above `cut` span the range.
Matrix psd_range(const Matrix& psd, double cut);
Matrix psd_kernel(const Matrix& psd, double cut);

// Moore-Penrose pseudo-inverse with the default zero tolerance.
Matrix pinv(const Matrix& m);

// Unitary factor of the polar decomposition m = u |m| (m square).
Matrix polar_unitary(const Matrix& m);

Matrix block_diag(const Matrix& a, const Matrix& b);

bool is_hermitian(const Matrix& m, double tol);

// Sum of logs of the eigenvalues of a Hermitian matrix that exceed the zero tolerance.
double logdet_nonzero(const Matrix& hermitian);
double logdet_nonzero(const Matrix& hermitian, double cut);

}  // namespace la
}  // namespace rt
