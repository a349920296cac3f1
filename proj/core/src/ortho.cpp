#include "rt/ortho.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rt/errors.hpp"

namespace rt {

Matrix OrthoComplex::diff(int i) const {
    if (i >= 0 && i < static_cast<int>(d.size())) return d[static_cast<std::size_t>(i)];
    return Matrix::Zero(dim(i + 1), dim(i));
}

Matrix OrthoComplex::laplacian(int i) const {
    const Matrix up = diff(i), down = diff(i - 1);
    return up.adjoint() * up + down * down.adjoint();
}

double OrthoComplex::zero_cut() const {
    double top = 0.0;
    Eigen::Index n = 1;
    for (const Matrix& m : d) {
        if (m.size() == 0) continue;
        top = std::max(top, la::singular_values(m)(0));
        n = std::max({n, m.rows(), m.cols()});
    }
    return top > 1e-300 ? la::zero_tolerance(n) * top * top : std::numeric_limits<double>::infinity();
}

void OrthoComplex::validate(double tol) const {
    if (d.size() + 1 != dims.size() && !(dims.empty() && d.empty()))
        throw ValidationError("complex needs one differential fewer than modules");
    for (int i = 0; i + 1 < size(); ++i) {
        const Matrix& m = d[static_cast<std::size_t>(i)];
        if (m.rows() != dim(i + 1) || m.cols() != dim(i)) throw ValidationError("differential has wrong shape");
    }
    double top = 0.0;
    for (const Matrix& m : d) top = std::max(top, m.norm());
    for (int i = 0; i + 2 < size(); ++i) {
        const Matrix& a = d[static_cast<std::size_t>(i)];
        const Matrix& b = d[static_cast<std::size_t>(i + 1)];
        const double r = (b * a).norm();
        if (r > tol * top * top)
            throw ValidationError("d_" + std::to_string(i + 1) + " d_" + std::to_string(i) + " != 0 (residual " +
                                  std::to_string(r) + ")");
    }
}

OrthoHodge ortho_hodge(const OrthoComplex& c) {
    OrthoHodge h;
    const int n = c.size();
    const double cut = c.zero_cut();
    for (int i = 0; i < n; ++i) {
        const Matrix down = c.diff(i - 1), up = c.diff(i);
        h.plus.push_back(la::psd_range(down * down.adjoint(), cut));
        h.minus.push_back(la::psd_range(up.adjoint() * up, cut));
        h.harm.push_back(la::psd_kernel(c.laplacian(i), cut));
        const auto total = h.plus.back().cols() + h.minus.back().cols() + h.harm.back().cols();
        if (total != c.dim(i)) throw NumericalError("Hodge decomposition is numerically inconsistent in degree " + std::to_string(i) + " (" +
                                 std::to_string(h.plus.back().cols()) + "+" + std::to_string(h.minus.back().cols()) + "+" +
                                 std::to_string(h.harm.back().cols()) + " != " + std::to_string(c.dim(i)) + ")");
    }
    for (int i = 0; i + 1 < n; ++i) {
        const Matrix& p = h.plus[static_cast<std::size_t>(i + 1)];
        const Matrix& m = h.minus[static_cast<std::size_t>(i)];
        if (p.cols() != m.cols()) throw NumericalError("rank of d_" + std::to_string(i) + " is ambiguous");
        h.restricted.push_back(p.adjoint() * c.diff(i) * m);
    }
    return h;
}

double TorsionFormulas::discrepancy() const {
    return std::max({std::abs(laplacian - via_minus), std::abs(laplacian - via_plus), std::abs(via_minus - via_plus)});
}

TorsionFormulas ortho_torsion(const OrthoComplex& c) {
    TorsionFormulas t;
    const OrthoHodge h = ortho_hodge(c);
    const double cut = c.zero_cut();
    for (int q = 0; q < c.size(); ++q) {
        const double sign = q % 2 == 0 ? 1.0 : -1.0;
        t.laplacian += -sign * q * la::logdet_nonzero(c.laplacian(q), cut);
        if (q + 1 < c.size()) {
            const Matrix& r = h.restricted[static_cast<std::size_t>(q)];
            if (r.cols() > 0) {
                const la::Eigensystem es = la::hermitian_eig(r.adjoint() * r);
                double s = 0.0;
                for (Eigen::Index k = 0; k < es.values.size(); ++k) {
                    if (!(es.values(k) > 0)) throw NumericalError("restricted Laplacian is singular");
                    s += std::log(es.values(k));
                }
                t.via_minus += sign * s;
            }
        }
        const Matrix down = c.diff(q - 1);
        t.via_plus += -sign * la::logdet_nonzero(down * down.adjoint(), cut);
    }
    t.laplacian *= 0.5 * c.scale;
    t.via_minus *= 0.5 * c.scale;
    t.via_plus *= 0.5 * c.scale;
    return t;
}

std::vector<double> ortho_betti(const OrthoComplex& c) {
    std::vector<double> b;
    const double cut = c.zero_cut();
    for (int i = 0; i < c.size(); ++i)
        b.push_back(c.scale * static_cast<double>(la::psd_kernel(c.laplacian(i), cut).cols()));
    return b;
}

bool ortho_acyclic(const OrthoComplex& c) {
    const double cut = c.zero_cut();
    for (int i = 0; i < c.size(); ++i)
        if (la::psd_kernel(c.laplacian(i), cut).cols() > 0) return false;
    return true;
}

OrthoComplex ortho_cone(const OrthoComplex& src, const OrthoComplex& tgt, const std::vector<Matrix>& f) {
    const int n = std::max(src.size(), tgt.size());
    OrthoComplex out;
    out.scale = src.scale;
    for (int i = 0; i <= n; ++i) out.dims.push_back(tgt.dim(i - 1) + src.dim(i));
    auto fmap = [&](int i) -> Matrix {
        if (i >= 0 && i < static_cast<int>(f.size())) return f[static_cast<std::size_t>(i)];
        return Matrix::Zero(tgt.dim(i), src.dim(i));
    };
    for (int i = 0; i < n; ++i) {
        Matrix m = Matrix::Zero(out.dims[static_cast<std::size_t>(i + 1)], out.dims[static_cast<std::size_t>(i)]);
        const Eigen::Index a = tgt.dim(i - 1), b = src.dim(i), c = tgt.dim(i), e = src.dim(i + 1);
        const Matrix fi = fmap(i);
        if (fi.rows() != c || fi.cols() != b) throw ValidationError("morphism component has wrong shape");
        m.block(0, 0, c, a) = -tgt.diff(i - 1);
        m.block(0, a, c, b) = fi;
        m.block(c, a, e, b) = src.diff(i);
        out.d.push_back(std::move(m));
    }
    return out;
}

OrthoComplex ortho_restrict(const OrthoComplex& c, const std::vector<Matrix>& bases) {
    OrthoComplex out;
    out.scale = c.scale;
    for (int i = 0; i < c.size(); ++i) out.dims.push_back(bases[static_cast<std::size_t>(i)].cols());
    for (int i = 0; i + 1 < c.size(); ++i)
        out.d.push_back(bases[static_cast<std::size_t>(i + 1)].adjoint() * c.diff(i) * bases[static_cast<std::size_t>(i)]);
    return out;
}

}  // namespace rt
