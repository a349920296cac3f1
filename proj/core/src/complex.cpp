#include "rt/complex.hpp"

#include <cmath>
#include <sstream>

#include "rt/errors.hpp"

namespace rt {

CochainComplex::CochainComplex(std::vector<HilbertModule> modules, std::vector<EquivariantMap> differentials,
                               std::vector<std::optional<EquivariantMap>> metrics)
    : modules_(std::move(modules)), d_(std::move(differentials)), metrics_(std::move(metrics)) {
    if (modules_.empty()) throw ValidationError("complex needs at least one module");
    g_ = modules_.front().backend;
    for (const auto& m : modules_)
        if (m.backend->order() != g_->order() || m.rank < 0) throw ValidationError("modules use different backends");
    if (d_.size() + 1 != modules_.size()) throw ValidationError("complex needs one differential fewer than modules");
    for (int i = 0; i + 1 < size(); ++i) {
        const auto& d = d_[static_cast<std::size_t>(i)];
        if (d.cols() != modules_[static_cast<std::size_t>(i)].rank || d.rows() != modules_[static_cast<std::size_t>(i + 1)].rank)
            throw ValidationError("d_" + std::to_string(i) + " has wrong shape");
    }
    if (metrics_.empty()) metrics_.resize(modules_.size());
    if (metrics_.size() != modules_.size()) throw ValidationError("one metric slot per module is required");
    for (int i = 0; i < size(); ++i) {
        const int r = modules_[static_cast<std::size_t>(i)].rank;
        const auto& g = metrics_[static_cast<std::size_t>(i)];
        if (g) {
            if (g->rows() != r || g->cols() != r) throw ValidationError("metric in degree " + std::to_string(i) + " has wrong shape");
            if (!la::is_hermitian(g->expanded(), 1e-10))
                throw ValidationError("metric in degree " + std::to_string(i) + " is not self-adjoint");
            whiten_.push_back(la::positive_sqrt(g->expanded()));
            unwhiten_.push_back(la::positive_inv_sqrt(g->expanded()));
        } else {
            const Eigen::Index n = modules_[static_cast<std::size_t>(i)].dim();
            whiten_.push_back(Matrix::Identity(n, n));
            unwhiten_.push_back(Matrix::Identity(n, n));
        }
    }
    for (int i = 0; i + 2 < size(); ++i) {
        const Matrix& a = d_[static_cast<std::size_t>(i)].expanded();
        const Matrix& b = d_[static_cast<std::size_t>(i + 1)].expanded();
        const double r = (b * a).norm();
        if (r > 1e-10 * b.norm() * a.norm() + 1e-300)
            throw ValidationError("d_" + std::to_string(i + 1) + " d_" + std::to_string(i) + " != 0 (residual " +
                                  std::to_string(r) + ")");
    }
}

HilbertModule CochainComplex::module(int i) const {
    if (i < 0 || i >= size()) return {g_, 0};
    return modules_[static_cast<std::size_t>(i)];
}

EquivariantMap CochainComplex::differential(int i) const {
    if (i >= 0 && i + 1 < size()) return d_[static_cast<std::size_t>(i)];
    return EquivariantMap(g_, module(i + 1).rank, module(i).rank);
}

EquivariantMap CochainComplex::metric(int i) const {
    if (has_metric(i)) return *metrics_[static_cast<std::size_t>(i)];
    return EquivariantMap::identity(g_, module(i).rank);
}

bool CochainComplex::has_metric(int i) const {
    return i >= 0 && i < size() && metrics_[static_cast<std::size_t>(i)].has_value();
}

Matrix CochainComplex::whitener(int i) const {
    if (i < 0 || i >= size()) return Matrix(0, 0);
    return whiten_[static_cast<std::size_t>(i)];
}

Matrix CochainComplex::inverse_whitener(int i) const {
    if (i < 0 || i >= size()) return Matrix(0, 0);
    return unwhiten_[static_cast<std::size_t>(i)];
}

OrthoComplex CochainComplex::ortho() const {
    OrthoComplex o;
    o.scale = 1.0 / g_->order();
    for (const auto& m : modules_) o.dims.push_back(m.dim());
    for (int i = 0; i + 1 < size(); ++i)
        o.d.push_back(whitener(i + 1) * d_[static_cast<std::size_t>(i)].expanded() * inverse_whitener(i));
    return o;
}

EquivariantMap metric_adjoint(const EquivariantMap& phi, const EquivariantMap& gs, const EquivariantMap& gt) {
    return inverse(gs) * phi.adjoint() * gt;
}

EquivariantMap d_adjoint(const CochainComplex& c, int i) {
    return metric_adjoint(c.differential(i), c.metric(i), c.metric(i + 1));
}

EquivariantMap laplacian(const CochainComplex& c, int i) {
    if (i < 0 || i >= c.size()) throw ValidationError("degree out of range");
    return d_adjoint(c, i) * c.differential(i) + c.differential(i - 1) * d_adjoint(c, i - 1);
}

namespace {

SpectralData hermitian_spectrum(const Matrix& h, double scale) {
    const la::Eigensystem es = la::hermitian_eig(h);
    std::vector<double> v(es.values.data(), es.values.data() + es.values.size());
    for (double& x : v) x = std::max(x, 0.0);
    return make_spectrum(v, scale);
}

}  // namespace

SpectralData laplacian_spectrum(const CochainComplex& c, int i) {
    const OrthoComplex o = c.ortho();
    return hermitian_spectrum(o.laplacian(i), o.scale);
}

SpectralData differential_spectrum(const CochainComplex& c, int i) {
    const Matrix m = c.ortho().diff(i);
    const RealVector sv = la::singular_values(m);
    std::vector<double> v(sv.data(), sv.data() + sv.size());
    v.resize(static_cast<std::size_t>(m.cols()), 0.0);
    return make_spectrum(v, 1.0 / c.backend()->order());
}

HodgeDecomposition hodge(const CochainComplex& c) {
    const OrthoComplex o = c.ortho();
    const OrthoHodge h = ortho_hodge(o);
    HodgeDecomposition out;
    for (int i = 0; i < c.size(); ++i) {
        const int r = c.module(i).rank;
        auto lift = [&](const Matrix& basis) {
            const Matrix p = c.inverse_whitener(i) * (basis * basis.adjoint()) * c.whitener(i);
            return EquivariantMap::from_expanded(c.backend(), r, r, p, 1e-7);
        };
        out.harmonic.push_back(lift(h.harm[static_cast<std::size_t>(i)]));
        out.plus.push_back(lift(h.plus[static_cast<std::size_t>(i)]));
        out.minus.push_back(lift(h.minus[static_cast<std::size_t>(i)]));
    }
    return out;
}

std::vector<double> cohomology_dims(const CochainComplex& c) { return ortho_betti(c.ortho()); }

bool is_acyclic(const CochainComplex& c) { return ortho_acyclic(c.ortho()); }

TorsionReport torsion_report(const CochainComplex& c, TorsionMode mode) {
    const OrthoComplex o = c.ortho();
    if (mode == TorsionMode::Strict && !ortho_acyclic(o)) {
        std::ostringstream msg;
        msg << "complex is not acyclic; cohomology dims:";
        for (double b : ortho_betti(o)) msg << ' ' << b;
        throw NumericalError(msg.str());
    }
    TorsionReport r;
    r.formulas = ortho_torsion(o);
    r.value = r.formulas.laplacian;
    r.consistent = r.formulas.discrepancy() <= 1e-9 * std::max(1.0, std::abs(r.value));
    return r;
}

double torsion(const CochainComplex& c, TorsionMode mode) { return torsion_report(c, mode).value; }

double det_class_value(const CochainComplex& c) {
    const OrthoComplex o = c.ortho();
    double acc = 0.0;
    for (int i = 0; i < o.size(); ++i)
        for (const auto& p : hermitian_spectrum(o.laplacian(i), o.scale).pairs)
            if (p.value > 0.0 && p.value <= 1.0) acc += p.multiplicity * std::log(p.value);
    return acc;
}

double metric_log_vol(const EquivariantMap& phi, const EquivariantMap& gs, const EquivariantMap& gt) {
    const Matrix m = la::positive_sqrt(gt.expanded()) * phi.expanded() * la::positive_inv_sqrt(gs.expanded());
    const RealVector sv = la::singular_values(m);
    std::vector<double> v(sv.data(), sv.data() + sv.size());
    return log_vol(make_spectrum(v, 1.0 / phi.backend()->order()));
}

namespace {

std::vector<std::optional<EquivariantMap>> metric_slots(const CochainComplex& c) {
    std::vector<std::optional<EquivariantMap>> m;
    for (int i = 0; i < c.size(); ++i) m.push_back(c.has_metric(i) ? std::optional(c.metric(i)) : std::nullopt);
    return m;
}

}  // namespace

CochainComplex with_metrics(const CochainComplex& c, std::vector<std::optional<EquivariantMap>> metrics) {
    std::vector<EquivariantMap> d;
    for (int i = 0; i + 1 < c.size(); ++i) d.push_back(c.differential(i));
    return CochainComplex(c.modules(), std::move(d), std::move(metrics));
}

CochainComplex suspension(const CochainComplex& c) {
    std::vector<HilbertModule> mods{{c.backend(), 0}};
    std::vector<EquivariantMap> d{EquivariantMap(c.backend(), c.module(0).rank, 0)};
    std::vector<std::optional<EquivariantMap>> g{std::nullopt};
    for (int i = 0; i < c.size(); ++i) {
        mods.push_back(c.module(i));
        g.push_back(c.has_metric(i) ? std::optional(c.metric(i)) : std::nullopt);
        if (i + 1 < c.size()) d.push_back(-c.differential(i));
    }
    return CochainComplex(std::move(mods), std::move(d), std::move(g));
}

CochainComplex pad(const CochainComplex& c, int size) {
    if (size < c.size()) throw ValidationError("cannot pad to a shorter length");
    std::vector<HilbertModule> mods = c.modules();
    std::vector<EquivariantMap> d;
    for (int i = 0; i + 1 < c.size(); ++i) d.push_back(c.differential(i));
    auto g = metric_slots(c);
    for (int i = c.size(); i < size; ++i) {
        d.push_back(EquivariantMap(c.backend(), 0, mods.back().rank));
        mods.push_back({c.backend(), 0});
        g.push_back(std::nullopt);
    }
    return CochainComplex(std::move(mods), std::move(d), std::move(g));
}

CochainComplex dual(const CochainComplex& c) {
    const CochainComplex p = c.size() % 2 == 0 ? c : pad(c, c.size() + 1);
    const int m = p.size();
    std::vector<HilbertModule> mods;
    std::vector<EquivariantMap> d;
    std::vector<std::optional<EquivariantMap>> g;
    for (int j = 0; j < m; ++j) {
        const int k = m - 1 - j;
        mods.push_back(p.module(k));
        g.push_back(p.has_metric(k) ? std::optional(p.metric(k)) : std::nullopt);
        if (j + 1 < m) d.push_back(d_adjoint(p, m - 2 - j));
    }
    return CochainComplex(std::move(mods), std::move(d), std::move(g));
}

CochainComplex direct_sum(const CochainComplex& a, const CochainComplex& b) {
    const int n = std::max(a.size(), b.size());
    const CochainComplex pa = pad(a, n), pb = pad(b, n);
    const Backend& g = a.backend();
    std::vector<HilbertModule> mods;
    std::vector<EquivariantMap> d;
    std::vector<std::optional<EquivariantMap>> metrics;
    for (int i = 0; i < n; ++i) {
        const int ra = pa.module(i).rank, rb = pb.module(i).rank;
        mods.push_back({g, ra + rb});
        if (pa.has_metric(i) || pb.has_metric(i))
            metrics.push_back(EquivariantMap::block(pa.metric(i), EquivariantMap(g, ra, rb), EquivariantMap(g, rb, ra), pb.metric(i)));
        else
            metrics.push_back(std::nullopt);
        if (i + 1 < n) {
            const int sa = pa.module(i + 1).rank, sb = pb.module(i + 1).rank;
            d.push_back(EquivariantMap::block(pa.differential(i), EquivariantMap(g, sa, rb), EquivariantMap(g, sb, ra),
                                              pb.differential(i)));
        }
    }
    return CochainComplex(std::move(mods), std::move(d), std::move(metrics));
}

CochainComplex acyclic_deformation(const CochainComplex& c, double eps) {
    if (!(eps > 0)) throw NumericalError("deformation parameter must be positive");
    const OrthoComplex o = c.ortho();
    const OrthoHodge h = ortho_hodge(o);
    std::vector<EquivariantMap> d;
    for (int i = 0; i + 1 < c.size(); ++i) {
        const Matrix w = la::polar_unitary(h.restricted[static_cast<std::size_t>(i)]);
        const Matrix shifted =
            o.diff(i) + eps * h.plus[static_cast<std::size_t>(i + 1)] * w * h.minus[static_cast<std::size_t>(i)].adjoint();
        const Matrix back = c.inverse_whitener(i + 1) * shifted * c.whitener(i);
        d.push_back(EquivariantMap::from_expanded(c.backend(), c.module(i + 1).rank, c.module(i).rank, back, 1e-7));
    }
    return CochainComplex(c.modules(), std::move(d), metric_slots(c));
}

CochainComplex unitary_transform(const CochainComplex& c, const std::vector<EquivariantMap>& u) {
    if (static_cast<int>(u.size()) != c.size()) throw ValidationError("one unitary per degree is required");
    std::vector<EquivariantMap> d;
    std::vector<std::optional<EquivariantMap>> g;
    for (int i = 0; i < c.size(); ++i) {
        const EquivariantMap& ui = u[static_cast<std::size_t>(i)];
        g.push_back(c.has_metric(i) ? std::optional(ui * c.metric(i) * ui.adjoint()) : std::nullopt);
        if (i + 1 < c.size()) d.push_back(u[static_cast<std::size_t>(i + 1)] * c.differential(i) * ui.adjoint());
    }
    return CochainComplex(c.modules(), std::move(d), std::move(g));
}

UnitShift unit_shift_identity(const CochainComplex& c, double sigma) {
    if (!(sigma < 0)) throw NumericalError("unit-shift exponent must be negative");
    const OrthoComplex o = c.ortho();
    UnitShift u{0.0, 0.0};
    for (int k = 0; k < o.size(); ++k) {
        const double sign = k % 2 == 0 ? 1.0 : -1.0;
        const la::Eigensystem es = la::hermitian_eig(o.laplacian(k));
        for (Eigen::Index j = 0; j < es.values.size(); ++j) {
            const double l = std::max(es.values(j), 0.0);
            u.plain += sign * std::log1p(l);
            u.power += sign * std::log(l + std::pow(1.0 + l, sigma));
        }
    }
    u.plain *= o.scale;
    u.power *= o.scale;
    return u;
}

}  // namespace rt
