#include "rt/witten.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "rt/errors.hpp"

namespace rt {

namespace {

std::vector<std::optional<EquivariantMap>> metrics_of(const CochainComplex& c) {
    std::vector<std::optional<EquivariantMap>> m;
    for (int i = 0; i < c.size(); ++i) {
        if (c.has_metric(i)) m.emplace_back(c.metric(i));
        else m.emplace_back(std::nullopt);
    }
    return m;
}

void check_heights(const CochainComplex& c, const HeightOperator& h) {
    for (int k = 0; k < c.size(); ++k) {
        const EquivariantMap hk = h.at(k, c);
        if (hk.rows() != c.module(k).rank || hk.cols() != c.module(k).rank)
            throw ValidationError("height operator in degree " + std::to_string(k) + " has the wrong shape");
        if (!la::is_hermitian(hk.expanded(), 1e-12))
            throw ValidationError("height operator in degree " + std::to_string(k) + " is not self-adjoint");
    }
}

}  // namespace

EquivariantMap HeightOperator::at(int k, const CochainComplex& c) const {
    if (k >= 0 && k < static_cast<int>(h.size())) return h[static_cast<std::size_t>(k)];
    const int r = c.module(k).rank;
    return EquivariantMap(c.backend(), r, r);
}

double HeightOperator::alternating_trace() const {
    double s = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k) s += (k % 2 == 0 ? 1.0 : -1.0) * vn_trace(h[k]).real();
    return s;
}

HeightOperator height_operator(const MorseData& m, const std::map<std::string, double>& heights, const Backend& g,
                               int rank) {
    HeightOperator out;
    for (const auto& level : m.cells) {
        std::vector<AlgebraElement> diag;
        for (const auto& x : level) {
            const auto it = heights.find(x);
            const double v = it == heights.end() ? 0.0 : it->second;
            for (int k = 0; k < rank; ++k) diag.push_back(AlgebraElement::unit(g, v));
        }
        out.h.push_back(diag.empty() ? EquivariantMap(g, 0, 0) : EquivariantMap::diagonal(diag));
    }
    return out;
}

CochainComplex deform(const CochainComplex& c, const HeightOperator& h, double t) {
    check_heights(c, h);
    std::vector<EquivariantMap> d;
    for (int k = 0; k + 1 < c.size(); ++k) {
        const EquivariantMap up = hermitian_function(h.at(k, c), [t](double x) { return std::exp(t * x); });
        const EquivariantMap down = hermitian_function(h.at(k + 1, c), [t](double x) { return std::exp(-t * x); });
        d.push_back(down * c.differential(k) * up);
    }
    return CochainComplex(c.modules(), std::move(d), metrics_of(c));
}

Morphism exponential_morphism(const CochainComplex& c, const HeightOperator& h, double t) {
    std::vector<EquivariantMap> maps;
    for (int k = 0; k < c.size(); ++k)
        maps.push_back(hermitian_function(h.at(k, c), [t](double x) { return std::exp(t * x); }));
    return Morphism(deform(c, h, t), c, std::move(maps));
}

double deformed_relative_torsion(const Morphism& integration, const HeightOperator& h, double t) {
    return cone_torsion(compose(integration, exponential_morphism(integration.source(), h, t)));
}

AffineCheck affine_check(const Morphism& integration, const HeightOperator& h, const std::vector<double>& grid) {
    if (grid.size() < 4) throw ValidationError("affine check needs at least four grid points");
    AffineCheck a;
    a.t = grid;
    for (double t : grid) a.values.push_back(deformed_relative_torsion(integration, h, t));
    const double n = static_cast<double>(grid.size());
    double st = 0, sv = 0, stt = 0, stv = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        st += grid[i];
        sv += a.values[i];
        stt += grid[i] * grid[i];
        stv += grid[i] * a.values[i];
    }
    const double den = n * stt - st * st;
    if (!(std::abs(den) > 0)) throw ValidationError("affine check needs distinct grid points");
    a.slope = (n * stv - st * sv) / den;
    a.intercept = (sv - a.slope * st) / n;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        const double l = grid[i] - grid[i - 1], r = grid[i + 1] - grid[i];
        const double interp = (r * a.values[i - 1] + l * a.values[i + 1]) / (l + r);
        a.max_second_difference = std::max(a.max_second_difference, 2.0 * std::abs(interp - a.values[i]));
    }
    a.expected_slope = h.alternating_trace();
    return a;
}

SpectralSplit spectral_split(const CochainComplex& deformed, double t) {
    const OrthoComplex oc = deformed.ortho();
    SpectralSplit s;
    s.t = t;
    std::vector<la::Eigensystem> eig;
    std::vector<double> all;
    for (int k = 0; k < oc.size(); ++k) {
        eig.push_back(la::hermitian_eig(oc.laplacian(k)));
        for (Eigen::Index i = 0; i < eig.back().values.size(); ++i) all.push_back(eig.back().values(i));
    }
    bool near_one = false;
    for (double v : all) near_one = near_one || std::abs(v - 1.0) < 1e-6;
    if (near_one) {
        std::vector<double> pts = {0.5, 2.0};
        for (double v : all)
            if (v > 0.5 && v < 2.0) pts.push_back(v);
        std::sort(pts.begin(), pts.end());
        double best = 0.0;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            if (pts[i + 1] - pts[i] > best) {
                best = pts[i + 1] - pts[i];
                s.threshold = 0.5 * (pts[i] + pts[i + 1]);
            }
        if (best < 1e-6) throw NumericalError("no usable spectral gap in [0.5, 2]");
        s.threshold_moved = true;
    }
    for (int k = 0; k < oc.size(); ++k) {
        const la::Eigensystem& es = eig[static_cast<std::size_t>(k)];
        std::vector<Eigen::Index> lo, hi;
        for (Eigen::Index i = 0; i < es.values.size(); ++i) (es.values(i) <= s.threshold ? lo : hi).push_back(i);
        Matrix a(oc.dim(k), static_cast<Eigen::Index>(lo.size())), b(oc.dim(k), static_cast<Eigen::Index>(hi.size()));
        for (std::size_t j = 0; j < lo.size(); ++j) a.col(static_cast<Eigen::Index>(j)) = es.vectors.col(lo[j]);
        for (std::size_t j = 0; j < hi.size(); ++j) b.col(static_cast<Eigen::Index>(j)) = es.vectors.col(hi[j]);
        s.small_dims.push_back(oc.scale * static_cast<double>(lo.size()));
        s.small.push_back(std::move(a));
        s.large.push_back(std::move(b));
    }
    for (int k = 0; k < oc.size(); ++k) {
        const Matrix q = s.small[static_cast<std::size_t>(k)] * s.small[static_cast<std::size_t>(k)].adjoint();
        const Matrix lap = oc.laplacian(k);
        s.max_projector_commutator = std::max(s.max_projector_commutator, (q * lap - lap * q).norm());
        if (k + 1 < oc.size()) {
            const Matrix q1 = s.small[static_cast<std::size_t>(k + 1)] * s.small[static_cast<std::size_t>(k + 1)].adjoint();
            const Matrix d = oc.diff(k);
            s.max_commutator = std::max(s.max_commutator, (q1 * d - d * q).norm());
        }
    }
    return s;
}

SplitResult split_additivity(const Morphism& integration, const HeightOperator& h, double t) {
    const Morphism g = compose(integration, exponential_morphism(integration.source(), h, t));
    SplitResult r;
    r.total = cone_torsion(g);
    r.split = spectral_split(g.source(), t);
    const OrthoComplex src = g.source().ortho(), tgt = g.target().ortho();
    std::vector<Matrix> f = g.ortho_maps();
    const std::vector<Matrix>& small = r.split.small;
    const std::vector<Matrix>& large = r.split.large;
    for (std::size_t k = 0; k < f.size() && k < small.size(); ++k) f[k] = f[k] * small[k];
    const OrthoComplex cone_sm = ortho_cone(ortho_restrict(src, small), tgt, f);
    if (!ortho_acyclic(cone_sm)) throw NumericalError("cone of the small part is not acyclic");
    r.sm = ortho_torsion(cone_sm).laplacian;
    const OrthoComplex big = ortho_restrict(src, large);
    r.la = ortho_torsion(big).laplacian;
    for (double b : ortho_betti(big)) r.large_betti += b;
    return r;
}

std::vector<SweepRow> witten_sweep(const Morphism& integration, const HeightOperator& h, const std::vector<double>& grid,
                                   int threads) {
    std::vector<SweepRow> rows(grid.size());
    std::vector<std::string> errors(grid.size());
    auto work = [&](std::size_t begin, std::size_t step) {
        for (std::size_t i = begin; i < grid.size(); i += step) {
            try {
                const SplitResult s = split_additivity(integration, h, grid[i]);
                rows[i] = {grid[i], s.total, s.sm, s.la, 0.0};
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const auto n = static_cast<std::size_t>(std::max(1, threads));
    if (n == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t k = 0; k < n; ++k) pool.emplace_back(work, k, n);
        for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (!errors[i].empty()) throw NumericalError("sweep failed at t = " + std::to_string(grid[i]) + ": " + errors[i]);
    if (grid.size() >= 2) {
        double st = 0, sv = 0, stt = 0, stv = 0;
        const double n_pts = static_cast<double>(grid.size());
        for (const SweepRow& r : rows) {
            st += r.t;
            sv += r.total;
            stt += r.t * r.t;
            stv += r.t * r.total;
        }
        const double den = n_pts * stt - st * st;
        const double slope = den != 0 ? (n_pts * stv - st * sv) / den : 0.0;
        const double icpt = (sv - slope * st) / n_pts;
        for (SweepRow& r : rows) r.slope_residual = r.total - (icpt + slope * r.t);
    }
    return rows;
}

double scaling_factor(int k, int n, double t) {
    if (!(t > 0)) throw ValidationError("scaling parameter must be positive");
    return std::exp(-t * k) * std::pow(std::numbers::pi / t, n / 4.0 - k / 2.0);
}

ScalingTorsion scaling_torsion(const std::vector<int>& m, int rank, int n, double t) {
    if (!(t > 0)) throw ValidationError("scaling parameter must be positive");
    ScalingTorsion s;
    const double lp = std::log(std::numbers::pi / t);
    for (std::size_t j = 0; j < m.size(); ++j) {
        const double sign = j % 2 == 0 ? 1.0 : -1.0;
        const double k = static_cast<double>(j);
        s.direct += sign * m[j] * rank * (-t * k + (n / 4.0 - k / 2.0) * lp);
        s.t_coefficient += sign * k * m[j] * rank;
        s.log_coefficient += sign * (n / 4.0 - k / 2.0) * m[j] * rank;
    }
    s.closed_form = s.t_coefficient * t - s.log_coefficient * lp;
    return s;
}

Morphism scaling_morphism(const CochainComplex& c, int n, double t) {
    std::vector<EquivariantMap> d, maps;
    for (int k = 0; k + 1 < c.size(); ++k)
        d.push_back(c.differential(k) * cplx(scaling_factor(k, n, t) / scaling_factor(k + 1, n, t)));
    for (int k = 0; k < c.size(); ++k)
        maps.push_back(EquivariantMap::identity(c.backend(), c.module(k).rank, scaling_factor(k, n, t)));
    return Morphism(CochainComplex(c.modules(), std::move(d), metrics_of(c)), c, std::move(maps));
}

}  // namespace rt
