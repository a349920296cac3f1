#include "rt/detclass.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "rt/errors.hpp"

namespace rt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// |e^{2 pi i x} - 1| = 2 |sin(pi x)|
double log_chord(double x) { return std::log(2.0 * std::abs(std::sin(std::numbers::pi * x))); }

}  // namespace

GridFunction sample(const Family& f, int n) {
    if (n < 2) throw ValidationError("grid needs at least two points");
    GridFunction g;
    for (int j = 0; j < n; ++j) {
        const bool roots = f.name == "roots";
        const double x = roots ? static_cast<double>(j) / n : (j + 0.5) / n;
        g.x.push_back(x);
        if (f.name == "constant") {
            g.values.push_back(f.parameter);
            g.log_abs.push_back(std::log(std::abs(f.parameter)));
        } else if (f.name == "circle_symbol") {
            g.values.push_back(std::polar(1.0, kTwoPi * x) - 1.0);
            g.log_abs.push_back(log_chord(x));
        } else if (f.name == "flat") {
            g.values.push_back(std::exp(-1.0 / (x * x)));
            g.log_abs.push_back(-1.0 / (x * x));
        } else if (roots) {
            g.values.push_back(1.0 - std::polar(1.0, kTwoPi * x));
            g.log_abs.push_back(j == 0 ? -std::numeric_limits<double>::infinity() : log_chord(x));
        } else {
            throw ParseError("unknown function family '" + f.name + "'");
        }
    }
    return g;
}

GridFunction from_samples(std::vector<cplx> values) {
    if (values.size() < 2) throw ValidationError("grid needs at least two points");
    GridFunction g;
    const double n = static_cast<double>(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (!std::isfinite(values[j].real()) || !std::isfinite(values[j].imag()))
            throw ValidationError("grid samples must be finite");
        g.x.push_back((static_cast<double>(j) + 0.5) / n);
        g.log_abs.push_back(std::log(std::abs(values[j])));
    }
    g.values = std::move(values);
    return g;
}

SpectralData mult_spectrum(const GridFunction& f) {
    std::vector<double> s;
    for (const cplx& v : f.values) s.push_back(std::abs(v));
    return make_spectrum(s, 1.0 / f.n());
}

double distribution(const GridFunction& f, double lambda) {
    if (!(lambda > 0)) return 0.0;
    const double l = std::log(lambda);
    int count = 0;
    for (double a : f.log_abs) count += a <= l;
    return static_cast<double>(count) / f.n();
}

double partial_logdet(const GridFunction& f) {
    double s = 0.0;
    for (double a : f.log_abs)
        if (std::isfinite(a) && a <= 0.0) s += a;
    return s / f.n();
}

double circle_torsion(const GridFunction& f, ZeroPolicy zeros) {
    double s = 0.0;
    for (double a : f.log_abs) {
        if (std::isfinite(a)) s += a;
        else if (zeros == ZeroPolicy::Reject) throw NumericalError("alpha vanishes on the grid: not of determinant class at this resolution");
    }
    return s / f.n();
}

CochainComplex circle_complex(const GridFunction& f) {
    const Backend g = Group::scalar();
    Matrix d = Matrix::Zero(f.n(), f.n());
    for (int j = 0; j < f.n(); ++j) d(j, j) = -f.values[static_cast<std::size_t>(j)];
    return CochainComplex({{g, f.n()}, {g, f.n()}}, {EquivariantMap::scalar(g, d)});
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Convergent: return "CONVERGENT";
        case Verdict::Divergent: return "DIVERGENT";
        default: return "INCONCLUSIVE";
    }
}

DivergenceResult divergence_probe(const Family& f, const std::vector<int>& grids, double tol) {
    if (grids.size() < 3) throw ValidationError("divergence probe needs at least three grids");
    for (std::size_t i = 1; i < grids.size(); ++i)
        if (grids[i] <= grids[i - 1]) throw ValidationError("grid sizes must increase");
    DivergenceResult r;
    r.grids = grids;
    for (int n : grids) r.values.push_back(partial_logdet(sample(f, n)));
    const std::size_t k = r.values.size();
    bool divergent = k >= 4;
    for (std::size_t i = k >= 4 ? k - 3 : k; i < k; ++i) divergent = divergent && r.values[i] - r.values[i - 1] <= -tol;
    bool cauchy = true;
    for (std::size_t i = k - 3; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) cauchy = cauchy && std::abs(r.values[i] - r.values[j]) <= tol;
    r.verdict = divergent ? Verdict::Divergent : cauchy ? Verdict::Convergent : Verdict::Inconclusive;
    return r;
}

std::vector<DetclassRow> detclass_sweep(const Family& f, const std::vector<int>& grids, int threads) {
    sample(f, 2);
    for (int n : grids)
        if (n < 2) throw ValidationError("grid needs at least two points");
    std::vector<DetclassRow> rows(grids.size());
    auto work = [&](std::size_t begin, std::size_t step) {
        for (std::size_t i = begin; i < grids.size(); i += step) {
            const GridFunction g = sample(f, grids[i]);
            rows[i] = {grids[i], partial_logdet(g), circle_torsion(g, ZeroPolicy::OffKernel)};
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
    return rows;
}

}  // namespace rt
