#include "rt/cone.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>

#include "rt/errors.hpp"

namespace rt {

namespace {

double rel(const Matrix& diff, double scale) { return diff.size() ? diff.cwiseAbs().maxCoeff() / std::max(1.0, scale) : 0.0; }

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

Morphism::Morphism(CochainComplex source, CochainComplex target, std::vector<EquivariantMap> maps)
    : src_(std::move(source)), tgt_(std::move(target)), f_(std::move(maps)) {
    const int n = std::max(src_.size(), tgt_.size());
    if (src_.size() < n) src_ = pad(src_, n);
    if (tgt_.size() < n) tgt_ = pad(tgt_, n);
    if (src_.backend()->order() != tgt_.backend()->order()) throw ValidationError("morphism between different backends");
    while (static_cast<int>(f_.size()) < n) {
        const int i = static_cast<int>(f_.size());
        f_.emplace_back(src_.backend(), tgt_.module(i).rank, src_.module(i).rank);
    }
    if (static_cast<int>(f_.size()) != n) throw ValidationError("too many morphism components");
    for (int i = 0; i < n; ++i) {
        const auto& f = f_[static_cast<std::size_t>(i)];
        if (f.rows() != tgt_.module(i).rank || f.cols() != src_.module(i).rank)
            throw ValidationError("morphism component " + std::to_string(i) + " has wrong shape");
    }
    for (int i = 0; i + 1 < n; ++i) {
        const Matrix d1 = src_.differential(i).expanded();
        const Matrix d2 = tgt_.differential(i).expanded();
        const Matrix& fi = f_[static_cast<std::size_t>(i)].expanded();
        const Matrix& fj = f_[static_cast<std::size_t>(i + 1)].expanded();
        const double r = (d2 * fi - fj * d1).norm();
        if (r > 1e-10 * (d2.norm() * fi.norm() + fj.norm() * d1.norm()) + 1e-300)
            throw ValidationError("morphism does not intertwine the differentials in degree " + std::to_string(i) +
                                  " (residual " + std::to_string(r) + ")");
    }
}

Morphism Morphism::identity(const CochainComplex& c) {
    std::vector<EquivariantMap> f;
    for (int i = 0; i < c.size(); ++i) f.push_back(EquivariantMap::identity(c.backend(), c.module(i).rank));
    return Morphism(c, c, std::move(f));
}

EquivariantMap Morphism::map(int i) const {
    if (i >= 0 && i < size()) return f_[static_cast<std::size_t>(i)];
    return EquivariantMap(src_.backend(), tgt_.module(i).rank, src_.module(i).rank);
}

std::vector<Matrix> Morphism::ortho_maps() const {
    std::vector<Matrix> out;
    for (int i = 0; i < size(); ++i)
        out.push_back(tgt_.whitener(i) * f_[static_cast<std::size_t>(i)].expanded() * src_.inverse_whitener(i));
    return out;
}

Morphism Morphism::operator-() const {
    std::vector<EquivariantMap> f;
    for (const auto& m : f_) f.push_back(-m);
    return Morphism(src_, tgt_, std::move(f));
}

Morphism compose(const Morphism& f2, const Morphism& f1) {
    const int n = std::max(f1.size(), f2.size());
    std::vector<EquivariantMap> f;
    for (int i = 0; i < n; ++i) {
        if (f2.source().module(i).rank != f1.target().module(i).rank)
            throw ValidationError("composition of morphisms with mismatched modules");
        f.push_back(f2.map(i) * f1.map(i));
    }
    return Morphism(f1.source(), f2.target(), std::move(f));
}

CochainComplex cone(const Morphism& f) {
    const CochainComplex& a = f.source();
    const CochainComplex& b = f.target();
    const Backend& g = a.backend();
    const int n = f.size() + 1;
    std::vector<HilbertModule> mods;
    std::vector<EquivariantMap> d;
    std::vector<std::optional<EquivariantMap>> metrics;
    for (int i = 0; i < n; ++i) {
        const int rb = b.module(i - 1).rank, ra = a.module(i).rank;
        mods.push_back({g, rb + ra});
        if (b.has_metric(i - 1) || a.has_metric(i))
            metrics.push_back(EquivariantMap::block(b.metric(i - 1), EquivariantMap(g, rb, ra), EquivariantMap(g, ra, rb), a.metric(i)));
        else
            metrics.push_back(std::nullopt);
        if (i + 1 < n) {
            const int sb = b.module(i).rank, sa = a.module(i + 1).rank;
            d.push_back(EquivariantMap::block(-b.differential(i - 1), f.map(i), EquivariantMap(g, sa, rb), a.differential(i)));
            (void)sb;
        }
    }
    return CochainComplex(std::move(mods), std::move(d), std::move(metrics));
}

namespace {

EquivariantMap lap(const CochainComplex& c, int i) {
    if (i < 0 || i >= c.size()) return EquivariantMap(c.backend(), c.module(i).rank, c.module(i).rank);
    return laplacian(c, i);
}

EquivariantMap dag(const CochainComplex& s, const CochainComplex& t, int i, const EquivariantMap& m) {
    // adjoint of m : s_i -> t_i
    if (m.rows() == 0 || m.cols() == 0) return EquivariantMap(m.backend(), m.cols(), m.rows());
    return metric_adjoint(m, s.metric(i), t.metric(i));
}

}  // namespace

double cone_laplacian_check(const Morphism& f, int i) {
    const CochainComplex& c1 = f.source();
    const CochainComplex& c2 = f.target();
    const CochainComplex cf = cone(f);
    if (i < 0 || i >= cf.size()) throw ValidationError("degree out of range");
    const EquivariantMap fi = f.map(i), fp = f.map(i - 1);
    const EquivariantMap fi_d = dag(c1, c2, i, fi), fp_d = dag(c1, c2, i - 1, fp);
    const EquivariantMap d2p = c2.differential(i - 1), d1p = c1.differential(i - 1);
    const EquivariantMap d2p_d = d_adjoint(c2, i - 1), d1p_d = d_adjoint(c1, i - 1);
    const EquivariantMap tl = lap(c2, i - 1) + fp * fp_d;
    const EquivariantMap tr = -(d2p_d * fi) + fp * d1p_d;
    const EquivariantMap bl = -(fi_d * d2p) + d1p * fp_d;
    const EquivariantMap br = lap(c1, i) + fi_d * fi;
    const Matrix formula = EquivariantMap::block(tl, tr, bl, br).expanded();
    const Matrix direct = laplacian(cf, i).expanded();
    return rel(formula - direct, std::max(max_abs(formula), max_abs(direct)));
}

double cone_torsion(const Morphism& f) { return torsion(cone(f), TorsionMode::Strict); }

double morphism_log_vol_sum(const Morphism& f) {
    double acc = 0.0;
    const std::vector<Matrix> m = f.ortho_maps();
    for (int j = 0; j < f.size(); ++j) {
        const Matrix& mj = m[static_cast<std::size_t>(j)];
        if (mj.rows() != mj.cols()) throw NumericalError("component " + std::to_string(j) + " is not square");
        if (mj.rows() == 0) continue;
        const RealVector sv = la::singular_values(mj);
        if (!(sv(sv.size() - 1) > la::zero_tolerance(sv.size()) * sv(0)))
            throw NumericalError("component " + std::to_string(j) + " is singular");
        double s = 0.0;
        for (Eigen::Index k = 0; k < sv.size(); ++k) s += std::log(sv(k));
        acc += (j % 2 == 0 ? 1.0 : -1.0) * s / f.source().backend()->order();
    }
    return acc;
}

CochainComplex ShortExactSequence::middle() const {
    const int n = std::max(sub.size(), quotient.size());
    const CochainComplex a = pad(sub, n), b = pad(quotient, n);
    const Backend& g = a.backend();
    std::vector<HilbertModule> mods;
    std::vector<EquivariantMap> d;
    std::vector<std::optional<EquivariantMap>> metrics;
    for (int i = 0; i < n; ++i) {
        const int ra = a.module(i).rank, rb = b.module(i).rank;
        mods.push_back({g, ra + rb});
        if (i < static_cast<int>(middle_metric.size()) && middle_metric[static_cast<std::size_t>(i)])
            metrics.push_back(middle_metric[static_cast<std::size_t>(i)]);
        else if (a.has_metric(i) || b.has_metric(i))
            metrics.push_back(EquivariantMap::block(a.metric(i), EquivariantMap(g, ra, rb), EquivariantMap(g, rb, ra), b.metric(i)));
        else
            metrics.push_back(std::nullopt);
        if (i + 1 < n) {
            const EquivariantMap f = i < static_cast<int>(twist.size()) ? twist[static_cast<std::size_t>(i)]
                                                                         : EquivariantMap(g, a.module(i + 1).rank, rb);
            d.push_back(EquivariantMap::block(a.differential(i), f, EquivariantMap(g, b.module(i + 1).rank, ra), b.differential(i)));
        }
    }
    return CochainComplex(std::move(mods), std::move(d), std::move(metrics));
}

ShortExactSequence ShortExactSequence::scaled(double t) const {
    ShortExactSequence s = *this;
    for (auto& f : s.twist) f = f * cplx(t);
    return s;
}

ShortExactSequence ShortExactSequence::from_cone(const Morphism& h) {
    ShortExactSequence s{suspension(h.target()), pad(h.source(), h.size() + 1), {}, {}};
    for (int i = 0; i < h.size(); ++i) s.twist.push_back(h.map(i));
    return s;
}

void validate(const ShortExactSequence& s) {
    const int n = std::max(s.sub.size(), s.quotient.size());
    const CochainComplex a = pad(s.sub, n), b = pad(s.quotient, n);
    if (static_cast<int>(s.twist.size()) > n - 1 + 1) throw ValidationError("too many off-diagonal blocks");
    for (std::size_t i = 0; i < s.twist.size(); ++i) {
        const int q = static_cast<int>(i);
        const auto& f = s.twist[i];
        if (f.rows() != a.module(q + 1).rank || f.cols() != b.module(q).rank)
            throw ValidationError("off-diagonal block " + std::to_string(q) + " has wrong shape");
    }
    auto tw = [&](int i) {
        if (i >= 0 && i < static_cast<int>(s.twist.size())) return s.twist[static_cast<std::size_t>(i)];
        return EquivariantMap(a.backend(), a.module(i + 1).rank, b.module(i).rank);
    };
    for (int i = 0; i + 2 < n; ++i) {
        const Matrix r = tw(i + 1).expanded() * b.differential(i).expanded() + a.differential(i + 1).expanded() * tw(i).expanded();
        const double scale = tw(i + 1).norm() * b.differential(i).norm() + a.differential(i + 1).norm() * tw(i).norm();
        if (r.norm() > 1e-10 * scale + 1e-300)
            throw ValidationError("off-diagonal blocks violate f d + d f = 0 in degree " + std::to_string(i));
    }
}

MilnorResult milnor_identity(const ShortExactSequence& s) {
    validate(s);
    const int n = std::max(s.sub.size(), s.quotient.size());
    const CochainComplex a = pad(s.sub, n), b = pad(s.quotient, n);
    const CochainComplex c = s.middle();
    const OrthoComplex oa = a.ortho(), ob = b.ortho(), oc = c.ortho();
    const OrthoHodge ha = ortho_hodge(oa), hb = ortho_hodge(ob), hc = ortho_hodge(oc);
    const double scale = oc.scale;

    MilnorResult r;
    r.lhs = ortho_torsion(oc).laplacian;
    r.sub = ortho_torsion(oa).laplacian;
    r.quotient = ortho_torsion(ob).laplacian;

    OrthoComplex hcx;
    hcx.scale = scale;
    for (int i = 0; i < n; ++i) {
        const Eigen::Index da = oa.dim(i), db = ob.dim(i);
        Matrix inc = Matrix::Zero(da + db, da);
        inc.topRows(da) = Matrix::Identity(da, da);
        Matrix proj = Matrix::Zero(db, da + db);
        proj.rightCols(db) = Matrix::Identity(db, db);
        const Matrix oi = c.whitener(i) * inc * a.inverse_whitener(i);
        const Matrix op = b.whitener(i) * proj * c.inverse_whitener(i);

        OrthoComplex row;
        row.scale = scale;
        row.dims = {da, da + db, db};
        row.d = {oi, op};
        r.rows += (i % 2 == 0 ? 1.0 : -1.0) * ortho_torsion(row).laplacian;

        const Matrix& va = ha.harm[static_cast<std::size_t>(i)];
        const Matrix& vc = hc.harm[static_cast<std::size_t>(i)];
        const Matrix& vb = hb.harm[static_cast<std::size_t>(i)];
        hcx.dims.insert(hcx.dims.end(), {va.cols(), vc.cols(), vb.cols()});
        hcx.d.push_back(vc.adjoint() * oi * va);
        hcx.d.push_back(vb.adjoint() * op * vc);
        if (i + 1 < n) {
            const EquivariantMap f = i < static_cast<int>(s.twist.size()) ? s.twist[static_cast<std::size_t>(i)]
                                                                           : EquivariantMap(a.backend(), a.module(i + 1).rank, b.module(i).rank);
            const Matrix of = a.whitener(i + 1) * f.expanded() * b.inverse_whitener(i);
            hcx.d.push_back(ha.harm[static_cast<std::size_t>(i + 1)].adjoint() * of * vb);
        }
    }
    hcx.validate(1e-8);
    r.homology = ortho_torsion(hcx).laplacian;
    r.rhs = r.sub + r.quotient + r.homology - r.rows;
    return r;
}

CmmResult cmm_additivity(const ShortExactSequence& s) {
    validate(s);
    ShortExactSequence orth = s;
    orth.middle_metric.clear();
    CmmResult r;
    r.direct = torsion(orth.middle(), TorsionMode::Strict);
    r.sum = torsion(s.sub, TorsionMode::Strict) + torsion(s.quotient, TorsionMode::Strict);
    return r;
}

DeformationProbe cmm_deformation_probe(const ShortExactSequence& s, const std::vector<double>& grid) {
    validate(s);
    ShortExactSequence base = s;
    base.middle_metric.clear();
    const int n = std::max(s.sub.size(), s.quotient.size());
    const CochainComplex a = pad(s.sub, n), b = pad(s.quotient, n);
    const OrthoComplex oa = a.ortho(), ob = b.ortho();
    if (!ortho_acyclic(oa) || !ortho_acyclic(ob)) throw NumericalError("deformation probe needs acyclic pieces");
    const OrthoHodge ha = ortho_hodge(oa), hb = ortho_hodge(ob);
    const double scale = oa.scale;

    auto tors = [&](double t) { return torsion(base.scaled(t).middle(), TorsionMode::Strict); };
    auto basis = [&](int q) {
        const auto k = static_cast<std::size_t>(q);
        Matrix w = Matrix::Zero(oa.dim(q) + ob.dim(q), oa.dim(q) + ob.dim(q));
        w.topLeftCorner(oa.dim(q), ha.plus[k].cols()) = ha.plus[k];
        w.block(0, ha.plus[k].cols(), oa.dim(q), ha.minus[k].cols()) = ha.minus[k];
        w.block(oa.dim(q), oa.dim(q), ob.dim(q), hb.plus[k].cols()) = hb.plus[k];
        w.bottomRightCorner(ob.dim(q), hb.minus[k].cols()) = hb.minus[k];
        return w;
    };
    // offsets of (p1, m1, p3, m3) inside degree q
    auto offsets = [&](int q) {
        const auto k = static_cast<std::size_t>(q);
        const Eigen::Index p1 = ha.plus[k].cols(), m1 = ha.minus[k].cols(), p3 = hb.plus[k].cols(), m3 = hb.minus[k].cols();
        return std::array<std::pair<Eigen::Index, Eigen::Index>, 4>{
            {{0, p1}, {p1, m1}, {p1 + m1, p3}, {p1 + m1 + p3, m3}}};
    };

    DeformationProbe p;
    p.t = grid;
    const double h = 1e-4;
    for (double t : grid) {
        const double d1 = (tors(t + h) - tors(t - h)) / (2 * h);
        const double d2 = (tors(t + h / 2) - tors(t - h / 2)) / h;
        const double deriv = (4 * d2 - d1) / 3;
        p.torsion.push_back(tors(t));
        p.derivative.push_back(deriv);
        p.max_derivative = std::max(p.max_derivative, std::abs(deriv));

        const CochainComplex c = base.scaled(t).middle();
        const OrthoComplex oc = c.ortho();
        std::vector<Matrix> dq, aq;
        std::vector<Matrix> dot;
        for (int q = 0; q + 1 < n; ++q) {
            const Matrix wq = basis(q), wn = basis(q + 1);
            dq.push_back(wn.adjoint() * oc.diff(q) * wq);
            aq.push_back(wq.adjoint() * la::pinv(oc.diff(q)) * wn);
            const EquivariantMap f = q < static_cast<int>(s.twist.size()) ? s.twist[static_cast<std::size_t>(q)]
                                                                           : EquivariantMap(a.backend(), a.module(q + 1).rank, b.module(q).rank);
            Matrix dd = Matrix::Zero(oc.dim(q + 1), oc.dim(q));
            dd.topRightCorner(oa.dim(q + 1), ob.dim(q)) = a.whitener(q + 1) * f.expanded() * b.inverse_whitener(q);
            dot.push_back(wn.adjoint() * dd * wq);
        }
        double trace_sum = 0.0;
        for (int q = 0; q + 1 < n; ++q) {
            const auto k = static_cast<std::size_t>(q);
            const auto rq = offsets(q + 1), cq = offsets(q);
            auto blk = [](const Matrix& m, std::pair<Eigen::Index, Eigen::Index> r, std::pair<Eigen::Index, Eigen::Index> c) {
                return Matrix(m.block(r.first, c.first, r.second, c.second));
            };
            p.max_epsilon = std::max(p.max_epsilon, max_abs(blk(dq[k], rq[1], cq[2])));
            p.max_a41 = std::max(p.max_a41, max_abs(blk(aq[k], cq[3], rq[0])));
            if (q + 2 < n) {
                const auto r2 = offsets(q + 2);
                const Matrix gamma = blk(dq[k], rq[1], cq[3]);
                const Matrix alpha_next = blk(dq[k + 1], r2[0], rq[2]);
                const Matrix d1_next = blk(dq[k + 1], r2[0], rq[1]);
                const Matrix d2_here = blk(dq[k], rq[2], cq[3]);
                if (d1_next.size() && gamma.size()) {
                    const Matrix predicted = -d1_next.inverse() * alpha_next * d2_here;
                    p.max_gamma_residual = std::max(p.max_gamma_residual, max_abs(gamma - predicted));
                }
            }
            const cplx full = (dot[k] * aq[k]).trace();
            const cplx split = (blk(dot[k], rq[0], cq[2]) * blk(aq[k], cq[2], rq[0])).trace() +
                               (blk(dot[k], rq[0], cq[3]) * blk(aq[k], cq[3], rq[0])).trace() +
                               (blk(dot[k], rq[1], cq[3]) * blk(aq[k], cq[3], rq[1])).trace();
            p.max_trace_split = std::max(p.max_trace_split, scale * std::abs(full - split));
            trace_sum += (q % 2 == 0 ? 1.0 : -1.0) * scale * full.real();
        }
        p.max_trace_sum = std::max(p.max_trace_sum, std::abs(trace_sum));
    }
    return p;
}

CompositionResult composition_rule(const Morphism& f1, const Morphism& f2) {
    CompositionResult r;
    r.lhs = cone_torsion(compose(f2, f1));
    r.rhs = cone_torsion(f1) + cone_torsion(f2);
    return r;
}

double isometry_defect(const Morphism& f) {
    double worst = 0.0;
    for (const Matrix& m : f.ortho_maps()) {
        if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
        const Matrix id = Matrix::Identity(m.rows(), m.cols());
        worst = std::max({worst, max_abs(m.adjoint() * m - id), max_abs(m * m.adjoint() - id)});
    }
    return worst;
}

AbsorptionResult isometry_absorption(const Morphism& f1, const Morphism& f2, IsometricFactor which) {
    AbsorptionResult r;
    r.isometry_defect = isometry_defect(which == IsometricFactor::First ? f1 : f2);
    if (!(r.isometry_defect < 1e-10)) throw ValidationError("claimed isometry fails: defect " + std::to_string(r.isometry_defect));
    r.composite = cone_torsion(compose(f2, f1));
    r.factor = cone_torsion(which == IsometricFactor::First ? f2 : f1);
    return r;
}

}  // namespace rt
