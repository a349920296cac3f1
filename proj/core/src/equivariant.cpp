#include "rt/equivariant.hpp"

#include <algorithm>

#include "rt/errors.hpp"

namespace rt {

namespace {

void add_block(const Group& g, const AlgebraElement& a, Matrix& m, Eigen::Index r0, Eigen::Index c0) {
    const int n = g.order();
    for (int x = 0; x < n; ++x) {
        const cplx c = a[x];
        if (c == 0.0) continue;
        for (int h = 0; h < n; ++h) m(r0 + g.mul(h, x), c0 + h) += c;
    }
}

std::vector<AlgebraElement> compress(const Backend& g, int rows, int cols, const Matrix& m) {
    const int n = g->order();
    const int e = g->identity();
    std::vector<AlgebraElement> out;
    out.reserve(static_cast<std::size_t>(rows * cols));
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            AlgebraElement a(g);
            for (int x = 0; x < n; ++x) a[x] = m(static_cast<Eigen::Index>(i) * n + x, static_cast<Eigen::Index>(j) * n + e);
            out.push_back(std::move(a));
        }
    return out;
}

}  // namespace

Matrix expand(const Group& g, const AlgebraElement& a) {
    Matrix m = Matrix::Zero(g.order(), g.order());
    add_block(g, a, m, 0, 0);
    return m;
}

Matrix expand(const EquivariantMap& phi) { return phi.expanded(); }

EquivariantMap::EquivariantMap(Backend g, int target_rank, int source_rank)
    : EquivariantMap(g, target_rank, source_rank,
                     std::vector<AlgebraElement>(static_cast<std::size_t>(target_rank * source_rank),
                                                 AlgebraElement(g))) {}

EquivariantMap::EquivariantMap(Backend g, int target_rank, int source_rank, std::vector<AlgebraElement> entries)
    : g_(std::move(g)), rows_(target_rank), cols_(source_rank), e_(std::move(entries)) {
    if (rows_ < 0 || cols_ < 0) throw ValidationError("negative rank");
    if (static_cast<int>(e_.size()) != rows_ * cols_) throw ValidationError("entry count does not match ranks");
    for (const auto& a : e_)
        if (a.backend() != g_ && a.backend()->order() != g_->order())
            throw ValidationError("entries use a different algebra backend");
    const int n = g_->order();
    x_ = Matrix::Zero(static_cast<Eigen::Index>(rows_) * n, static_cast<Eigen::Index>(cols_) * n);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            add_block(*g_, entry(i, j), x_, static_cast<Eigen::Index>(i) * n, static_cast<Eigen::Index>(j) * n);
}

EquivariantMap EquivariantMap::identity(Backend g, int rank, cplx c) {
    std::vector<AlgebraElement> d(static_cast<std::size_t>(rank), AlgebraElement::unit(g, c));
    if (rank == 0) return EquivariantMap(g, 0, 0);
    return diagonal(d);
}

EquivariantMap EquivariantMap::diagonal(const std::vector<AlgebraElement>& entries) {
    if (entries.empty()) throw ValidationError("diagonal map needs at least one entry");
    const Backend g = entries.front().backend();
    const int r = static_cast<int>(entries.size());
    std::vector<AlgebraElement> e(static_cast<std::size_t>(r * r), AlgebraElement(g));
    for (int i = 0; i < r; ++i) e[static_cast<std::size_t>(i * r + i)] = entries[static_cast<std::size_t>(i)];
    return EquivariantMap(g, r, r, std::move(e));
}

EquivariantMap EquivariantMap::scalar(Backend g, const Matrix& coeffs) {
    std::vector<AlgebraElement> e;
    for (Eigen::Index i = 0; i < coeffs.rows(); ++i)
        for (Eigen::Index j = 0; j < coeffs.cols(); ++j) e.push_back(AlgebraElement::unit(g, coeffs(i, j)));
    return EquivariantMap(g, static_cast<int>(coeffs.rows()), static_cast<int>(coeffs.cols()), std::move(e));
}

EquivariantMap EquivariantMap::from_expanded(Backend g, int target_rank, int source_rank, const Matrix& m,
                                             double tol) {
    const int n = g->order();
    if (m.rows() != static_cast<Eigen::Index>(target_rank) * n || m.cols() != static_cast<Eigen::Index>(source_rank) * n)
        throw ValidationError("expanded matrix has wrong shape");
    EquivariantMap out(g, target_rank, source_rank, compress(g, target_rank, source_rank, m));
    const double scale = std::max(1.0, m.norm());
    if ((out.x_ - m).norm() > tol * scale) throw ValidationError("matrix does not commute with the group action");
    return out;
}

EquivariantMap EquivariantMap::block(const EquivariantMap& a, const EquivariantMap& b, const EquivariantMap& c,
                                     const EquivariantMap& d) {
    if (a.rows() != b.rows() || c.rows() != d.rows() || a.cols() != c.cols() || b.cols() != d.cols())
        throw ValidationError("incompatible block sizes");
    const int r = a.rows() + c.rows(), k = a.cols() + b.cols();
    std::vector<AlgebraElement> e(static_cast<std::size_t>(r * k), AlgebraElement(a.backend()));
    auto put = [&](const EquivariantMap& m, int r0, int c0) {
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) e[static_cast<std::size_t>((r0 + i) * k + c0 + j)] = m.entry(i, j);
    };
    put(a, 0, 0);
    put(b, 0, a.cols());
    put(c, a.rows(), 0);
    put(d, a.rows(), a.cols());
    return EquivariantMap(a.backend(), r, k, std::move(e));
}

EquivariantMap EquivariantMap::operator*(const EquivariantMap& o) const {
    if (cols_ != o.rows_) throw ValidationError("composition of maps with incompatible ranks");
    std::vector<AlgebraElement> e(static_cast<std::size_t>(rows_ * o.cols_), AlgebraElement(g_));
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < o.cols_; ++k) {
            AlgebraElement& acc = e[static_cast<std::size_t>(i * o.cols_ + k)];
            for (int j = 0; j < cols_; ++j) acc += o.entry(j, k) * entry(i, j);
        }
    return EquivariantMap(g_, rows_, o.cols_, std::move(e));
}

EquivariantMap EquivariantMap::operator+(const EquivariantMap& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ValidationError("sum of maps with different shapes");
    std::vector<AlgebraElement> e = e_;
    for (std::size_t i = 0; i < e.size(); ++i) e[i] += o.e_[i];
    return EquivariantMap(g_, rows_, cols_, std::move(e));
}

EquivariantMap EquivariantMap::operator-(const EquivariantMap& o) const { return *this + (-o); }

EquivariantMap EquivariantMap::operator-() const { return *this * cplx(-1.0); }

EquivariantMap EquivariantMap::operator*(cplx s) const {
    std::vector<AlgebraElement> e = e_;
    for (auto& a : e) a = a * s;
    return EquivariantMap(g_, rows_, cols_, std::move(e));
}

EquivariantMap EquivariantMap::adjoint() const {
    std::vector<AlgebraElement> e;
    e.reserve(e_.size());
    for (int j = 0; j < cols_; ++j)
        for (int i = 0; i < rows_; ++i) e.push_back(entry(i, j).star());
    return EquivariantMap(g_, cols_, rows_, std::move(e));
}

EquivariantMap EquivariantMap::sub(int row0, int col0, int nrows, int ncols) const {
    if (row0 < 0 || col0 < 0 || row0 + nrows > rows_ || col0 + ncols > cols_) throw ValidationError("sub-block out of range");
    std::vector<AlgebraElement> e;
    for (int i = 0; i < nrows; ++i)
        for (int j = 0; j < ncols; ++j) e.push_back(entry(row0 + i, col0 + j));
    return EquivariantMap(g_, nrows, ncols, std::move(e));
}

cplx vn_trace(const EquivariantMap& phi) {
    if (phi.rows() != phi.cols()) throw ValidationError("trace of a non-square map");
    cplx s = 0.0;
    for (int i = 0; i < phi.rows(); ++i) s += phi.entry(i, i).trace();
    return s;
}

EquivariantMap adjoint(const EquivariantMap& phi) { return phi.adjoint(); }

double equivariance_residual(const Group& g, int target_rank, int source_rank, const Matrix& m) {
    auto gp = std::make_shared<const Group>(g);
    EquivariantMap back(gp, target_rank, source_rank, compress(gp, target_rank, source_rank, m));
    return (back.expanded() - m).norm() / std::max(1.0, m.norm());
}

EquivariantMap inverse(const EquivariantMap& phi) {
    if (phi.rows() != phi.cols()) throw ValidationError("inverse of a non-square map");
    if (phi.rows() == 0) return phi;
    Eigen::FullPivLU<Matrix> lu(phi.expanded());
    if (!lu.isInvertible()) throw NumericalError("map is not invertible");
    return EquivariantMap::from_expanded(phi.backend(), phi.cols(), phi.rows(), lu.inverse());
}

EquivariantMap hermitian_function(const EquivariantMap& phi, const std::function<double(double)>& f) {
    if (phi.rows() != phi.cols()) throw ValidationError("functional calculus needs a square map");
    if (phi.rows() == 0) return phi;
    return EquivariantMap::from_expanded(phi.backend(), phi.rows(), phi.cols(), la::hermitian_function(phi.expanded(), f));
}

}  // namespace rt
