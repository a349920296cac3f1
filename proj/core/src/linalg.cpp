#include "rt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rt/errors.hpp"

namespace rt::la {

double zero_tolerance(Eigen::Index dim) {
    return static_cast<double>(std::max<Eigen::Index>(dim, 1)) *
           std::numeric_limits<double>::epsilon() * 64.0;
}

Eigensystem hermitian_eig(const Matrix& m) {
    if (m.rows() == 0) return {};
    const Matrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed to converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

RealVector singular_values(const Matrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return {};
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues();
}

namespace {

Matrix positive_power(const Matrix& m, double p) {
    const Eigensystem es = hermitian_eig(m);
    if (es.values.size() == 0) return m;
    const double top = es.values.maxCoeff();
    if (!(es.values.minCoeff() > zero_tolerance(m.rows()) * top) || !(top > 0))
        throw ValidationError("metric is not positive definite");
    RealVector fv = es.values.array().pow(p);
    return es.vectors * fv.asDiagonal() * es.vectors.adjoint();
}

double relative_cut(const Eigensystem& es) {
    const Eigen::Index n = es.values.size();
    const double top = n ? es.values.cwiseAbs().maxCoeff() : 0.0;
    return top > 1e-300 ? zero_tolerance(n) * top : std::numeric_limits<double>::infinity();
}

Matrix split_basis(const Matrix& psd, bool range, double cut) {
    const Eigensystem es = hermitian_eig(psd);
    const Eigen::Index n = es.values.size();
    if (cut < 0) cut = relative_cut(es);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < n; ++i)
        if ((es.values(i) > cut) == range) keep.push_back(i);
    Matrix out(psd.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = es.vectors.col(keep[j]);
    return out;
}

}  // namespace

Matrix positive_sqrt(const Matrix& m) { return positive_power(m, 0.5); }
Matrix positive_inv_sqrt(const Matrix& m) { return positive_power(m, -0.5); }

Matrix psd_range(const Matrix& psd) { return split_basis(psd, true, -1.0); }
Matrix psd_kernel(const Matrix& psd) { return split_basis(psd, false, -1.0); }
Matrix psd_range(const Matrix& psd, double cut) { return split_basis(psd, true, cut); }
Matrix psd_kernel(const Matrix& psd, double cut) { return split_basis(psd, false, cut); }

Matrix pinv(const Matrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return Matrix::Zero(m.cols(), m.rows());
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector& s = svd.singularValues();
    const double cut = zero_tolerance(std::max(m.rows(), m.cols())) * (s.size() ? s(0) : 0.0);
    RealVector inv(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) inv(i) = s(i) > cut && s(i) > 0 ? 1.0 / s(i) : 0.0;
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

Matrix polar_unitary(const Matrix& m) {
    if (m.rows() == 0) return m;
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

Matrix block_diag(const Matrix& a, const Matrix& b) {
    Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

bool is_hermitian(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    if (m.rows() == 0) return true;
    return (m - m.adjoint()).norm() <= tol * std::max(1.0, m.norm());
}

double logdet_nonzero(const Matrix& hermitian) { return logdet_nonzero(hermitian, -1.0); }

double logdet_nonzero(const Matrix& hermitian, double cut) {
    const Eigensystem es = hermitian_eig(hermitian);
    if (es.values.size() == 0) return 0.0;
    if (cut < 0) cut = relative_cut(es);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.values.size(); ++i)
        if (es.values(i) > cut) s += std::log(es.values(i));
    return s;
}

}  // namespace rt::la
