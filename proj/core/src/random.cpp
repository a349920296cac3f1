#include "rt/random.hpp"

#include <algorithm>
#include <cmath>

#include "rt/errors.hpp"

namespace rt {

EquivariantMap random_map(const Backend& g, int rows, int cols, Rng& rng) {
    std::vector<AlgebraElement> e;
    const double s = 1.0 / std::sqrt(2.0 * g->order() * std::max(cols, 1));
    for (int k = 0; k < rows * cols; ++k) {
        AlgebraElement a(g);
        for (int x = 0; x < g->order(); ++x) a[x] = cplx(rng.normal(), rng.normal()) * s;
        e.push_back(std::move(a));
    }
    return EquivariantMap(g, rows, cols, std::move(e));
}

EquivariantMap random_unitary(const Backend& g, int rank, Rng& rng) {
    if (rank == 0) return EquivariantMap(g, 0, 0);
    const EquivariantMap a = random_map(g, rank, rank, rng);
    return EquivariantMap::from_expanded(g, rank, rank, la::polar_unitary(a.expanded()));
}

EquivariantMap random_conditioned(const Backend& g, int rank, Rng& rng, double kappa) {
    if (rank == 0) return EquivariantMap(g, 0, 0);
    const EquivariantMap a = random_map(g, rank, rank, rng);
    const double scale = rng.uniform(0.5, 2.0);
    Eigen::JacobiSVD<Matrix> svd(a.expanded(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    RealVector s = svd.singularValues();
    const double top = s(0);
    for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = scale * std::max(s(i) / top, 1.0 / kappa);
    const Matrix m = svd.matrixU() * s.asDiagonal() * svd.matrixV().adjoint();
    return EquivariantMap::from_expanded(g, rank, rank, m);
}

EquivariantMap random_metric(const Backend& g, int rank, Rng& rng, double kappa) {
    if (rank == 0) return EquivariantMap(g, 0, 0);
    const EquivariantMap a = random_conditioned(g, rank, rng, std::sqrt(kappa));
    const EquivariantMap m = a.adjoint() * a;
    return EquivariantMap::from_expanded(g, rank, rank, 0.5 * (m.expanded() + m.expanded().adjoint()));
}

CochainComplex random_complex(const Backend& g, const std::vector<int>& harmonic, const std::vector<int>& ranks,
                              Rng& rng, bool metrics, double kappa) {
    const int n = static_cast<int>(harmonic.size());
    if (n == 0 || static_cast<int>(ranks.size()) != n - 1) throw ValidationError("rank pattern does not match complex size");
    auto r = [&](int i) { return i >= 0 && i < n - 1 ? ranks[static_cast<std::size_t>(i)] : 0; };
    std::vector<HilbertModule> mods;
    std::vector<EquivariantMap> u;
    std::vector<std::optional<EquivariantMap>> g_metrics;
    for (int i = 0; i < n; ++i) {
        const int rank = r(i - 1) + r(i) + harmonic[static_cast<std::size_t>(i)];
        mods.push_back({g, rank});
        u.push_back(random_unitary(g, rank, rng));
        g_metrics.push_back(metrics && rank > 0 ? std::optional(random_metric(g, rank, rng)) : std::nullopt);
    }
    std::vector<EquivariantMap> d;
    for (int i = 0; i + 1 < n; ++i) {
        const int rows = mods[static_cast<std::size_t>(i + 1)].rank, cols = mods[static_cast<std::size_t>(i)].rank;
        const EquivariantMap core = random_conditioned(g, r(i), rng, kappa);
        std::vector<AlgebraElement> e(static_cast<std::size_t>(rows * cols), AlgebraElement(g));
        for (int a = 0; a < r(i); ++a)
            for (int b = 0; b < r(i); ++b) e[static_cast<std::size_t>(a * cols + r(i - 1) + b)] = core.entry(a, b);
        const EquivariantMap placed(g, rows, cols, std::move(e));
        d.push_back(u[static_cast<std::size_t>(i + 1)] * placed * u[static_cast<std::size_t>(i)].adjoint());
    }
    return CochainComplex(std::move(mods), std::move(d), std::move(g_metrics));
}

CochainComplex random_acyclic(const Backend& g, int max_size, int max_rank, Rng& rng, bool metrics) {
    const int n = rng.integer(2, std::max(2, max_size));
    std::vector<int> ranks;
    int prev = 0;
    for (int i = 0; i + 1 < n; ++i) {
        const int lo = i == 0 ? 1 : 0;
        const int r = rng.integer(lo, std::max(lo, max_rank - prev));
        ranks.push_back(r);
        prev = r;
    }
    return random_complex(g, std::vector<int>(static_cast<std::size_t>(n), 0), ranks, rng, metrics);
}

Morphism random_isomorphism(const CochainComplex& c, Rng& rng, bool metrics) {
    const Backend& g = c.backend();
    std::vector<EquivariantMap> f, finv;
    for (int i = 0; i < c.size(); ++i) {
        f.push_back(random_conditioned(g, c.module(i).rank, rng, 10.0));
        finv.push_back(inverse(f.back()));
    }
    std::vector<EquivariantMap> d;
    std::vector<std::optional<EquivariantMap>> gm;
    for (int i = 0; i < c.size(); ++i) {
        gm.push_back(metrics && c.module(i).rank > 0 ? std::optional(random_metric(g, c.module(i).rank, rng)) : std::nullopt);
        if (i + 1 < c.size())
            d.push_back(f[static_cast<std::size_t>(i + 1)] * c.differential(i) * finv[static_cast<std::size_t>(i)]);
    }
    CochainComplex target(c.modules(), std::move(d), std::move(gm));
    return Morphism(c, std::move(target), std::move(f));
}

Morphism random_quasi_isomorphism(const CochainComplex& c, Rng& rng, bool metrics, int extra_rank) {
    const Backend& g = c.backend();
    std::vector<int> ranks;
    for (int i = 0; i + 1 < c.size(); ++i) ranks.push_back(rng.integer(0, extra_rank));
    const CochainComplex extra = random_complex(g, std::vector<int>(static_cast<std::size_t>(c.size()), 0), ranks, rng, metrics);
    const CochainComplex sum = direct_sum(c, extra);
    std::vector<EquivariantMap> inc;
    for (int i = 0; i < c.size(); ++i) {
        const int a = c.module(i).rank, b = extra.module(i).rank;
        inc.push_back(EquivariantMap::block(EquivariantMap::identity(g, a), EquivariantMap(g, a, 0), EquivariantMap(g, b, a),
                                            EquivariantMap(g, b, 0)));
    }
    const Morphism iota(c, sum, std::move(inc));
    return compose(random_isomorphism(sum, rng, metrics), iota);
}

ShortExactSequence random_extension(const CochainComplex& sub, const CochainComplex& quotient, Rng& rng,
                                    bool middle_metric) {
    const int n = std::max(sub.size(), quotient.size());
    const CochainComplex a = pad(sub, n), b = pad(quotient, n);
    const Backend& g = a.backend();
    std::vector<EquivariantMap> k;
    for (int i = 0; i < n; ++i) k.push_back(random_map(g, a.module(i).rank, b.module(i).rank, rng));
    ShortExactSequence s{a, b, {}, {}};
    for (int i = 0; i + 1 < n; ++i)
        s.twist.push_back(k[static_cast<std::size_t>(i + 1)] * b.differential(i) - a.differential(i) * k[static_cast<std::size_t>(i)]);
    if (middle_metric)
        for (int i = 0; i < n; ++i) {
            const int rank = a.module(i).rank + b.module(i).rank;
            s.middle_metric.push_back(rank > 0 ? std::optional(random_metric(g, rank, rng)) : std::nullopt);
        }
    return s;
}

}  // namespace rt
