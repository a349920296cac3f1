#include "rt/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "rt/errors.hpp"
#include "rt/special.hpp"

namespace rt {

double SpectralData::kernel_dim() const {
    double k = 0.0;
    for (const auto& p : pairs)
        if (p.value == 0.0) k += p.multiplicity;
    return k;
}

double SpectralData::positive_dim() const { return ambient_dim - kernel_dim(); }

double SpectralData::max_value() const { return pairs.empty() ? 0.0 : pairs.back().value; }

SpectralData make_spectrum(const std::vector<double>& values, double multiplicity) {
    SpectralData s;
    s.ambient_dim = multiplicity * static_cast<double>(values.size());
    if (values.empty()) return s;
    std::vector<double> v = values;
    std::sort(v.begin(), v.end());
    const double top = std::max(0.0, v.back());
    const double tol = la::zero_tolerance(static_cast<Eigen::Index>(v.size())) * top;
    for (double x : v) {
        const double val = x <= tol ? 0.0 : x;
        if (!s.pairs.empty() && val - s.pairs.back().value <= tol) {
            s.pairs.back().multiplicity += multiplicity;
        } else {
            s.pairs.push_back({val, multiplicity});
        }
    }
    return s;
}

SpectralData spectral_data(const EquivariantMap& phi) {
    const RealVector sv = la::singular_values(phi.expanded());
    std::vector<double> v(sv.data(), sv.data() + sv.size());
    v.resize(static_cast<std::size_t>(phi.expanded().cols()), 0.0);
    return make_spectrum(v, 1.0 / phi.backend()->order());
}

SpectralData self_adjoint_spectrum(const EquivariantMap& phi) {
    if (!la::is_hermitian(phi.expanded(), 1e-9)) throw ValidationError("map is not self-adjoint");
    const la::Eigensystem es = la::hermitian_eig(phi.expanded());
    std::vector<double> v(es.values.data(), es.values.data() + es.values.size());
    const double top = v.empty() ? 0.0 : std::max(std::abs(v.front()), std::abs(v.back()));
    const double tol = la::zero_tolerance(static_cast<Eigen::Index>(v.size())) * top;
    for (double& x : v) {
        if (x < -tol) throw ValidationError("map is not nonnegative");
        x = std::max(x, 0.0);
    }
    return make_spectrum(v, 1.0 / phi.backend()->order());
}

double F_plus(const SpectralData& s, double lambda) {
    double c = 0.0;
    for (const auto& p : s.pairs)
        if (p.value > 0.0 && p.value < lambda) c += p.multiplicity;
    return c;
}

double F(const SpectralData& s, double lambda) {
    double c = 0.0;
    for (const auto& p : s.pairs)
        if (p.value < lambda) c += p.multiplicity;
    return c;
}

double heat_trace(const SpectralData& s, double t) {
    if (!(t > 0)) throw NumericalError("heat trace needs t > 0");
    double h = 0.0;
    for (const auto& p : s.pairs)
        if (p.value > 0.0) h += p.multiplicity * std::exp(-t * p.value);
    return h;
}

namespace {

void require_positive(const SpectralData& s) {
    for (const auto& p : s.pairs)
        if (p.value > 0.0) return;
    throw NumericalError("spectrum has no positive part");
}

// Below this the continued fraction converges slowly; above the other the series overflows.
constexpr double kFractionFloor = 0.5;
constexpr double kSeriesCeiling = 50.0;

cplx lower_part(cplx z, double lambda) {
    if (lambda <= kSeriesCeiling) return special::lower_scaled(z, lambda);
    return std::exp(-z * std::log(lambda)) - special::rgamma(z) * special::upper_scaled(z, lambda);
}

cplx upper_part(cplx z, double lambda) {
    if (lambda >= kFractionFloor) return special::rgamma(z) * special::upper_scaled(z, lambda);
    return std::exp(-z * std::log(lambda)) - special::lower_scaled(z, lambda);
}

}  // namespace

cplx zeta(const SpectralData& s, cplx z) {
    require_positive(s);
    cplx acc = 0.0;
    for (const auto& p : s.pairs)
        if (p.value > 0.0) acc += p.multiplicity * std::exp(-z * std::log(p.value));
    return acc;
}

cplx zeta_I(const SpectralData& s, cplx z) {
    require_positive(s);
    cplx acc = 0.0;
    for (const auto& p : s.pairs)
        if (p.value > 0.0) acc += p.multiplicity * lower_part(z, p.value);
    return acc;
}

cplx zeta_II(const SpectralData& s, cplx z) {
    require_positive(s);
    cplx acc = 0.0;
    for (const auto& p : s.pairs)
        if (p.value > 0.0) acc += p.multiplicity * upper_part(z, p.value);
    return acc;
}

cplx zeta_derivative(const SpectralData& s, cplx z) {
    require_positive(s);
    cplx acc = 0.0;
    for (const auto& p : s.pairs)
        if (p.value > 0.0) {
            const double l = std::log(p.value);
            acc -= p.multiplicity * l * std::exp(-z * l);
        }
    return acc;
}

double log_vol(const SpectralData& s) {
    double acc = 0.0;
    for (const auto& p : s.pairs)
        if (p.value > 0.0) acc += p.multiplicity * std::log(p.value);
    return acc;
}

double log_vol(const EquivariantMap& phi) { return log_vol(spectral_data(phi)); }

double trace_norm(const EquivariantMap& phi) {
    double acc = 0.0;
    for (const auto& p : spectral_data(phi).pairs) acc += p.multiplicity * p.value;
    return acc;
}

double operator_norm(const EquivariantMap& phi) { return spectral_data(phi).max_value(); }

namespace {

double bump(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

double smooth_step(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = bump(x), b = bump(1.0 - x);
    return a / (a + b);
}

}  // namespace

double shift_profile(double lambda, double a, double b) {
    if (!(a < b)) throw NumericalError("spectral shift needs a < b");
    return a + (lambda - a) * smooth_step((lambda - a) / (b - a));
}

EquivariantMap spectral_shift(const EquivariantMap& phi, double a, double b) {
    if (!(a < b)) throw NumericalError("spectral shift needs a < b");
    self_adjoint_spectrum(phi);
    return hermitian_function(phi, [a, b](double l) { return shift_profile(l, a, b) - l; });
}

namespace {

// int_0^inf e^{-us} R(e^{-u}) du by composite Gauss-Legendre on [0, U].
double remainder_integral(const AsymptoticProfile& p, double s) {
    static const double xs[] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                0.9061798459386640};
    static const double ws[] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                                0.2369268850561891};
    const double rate = p.remainder_order + s;
    const double upper = 60.0 / rate;
    const int pieces = 2000;
    const double h = upper / pieces;
    double acc = 0.0;
    for (int k = 0; k < pieces; ++k) {
        const double mid = (k + 0.5) * h;
        for (int j = 0; j < 5; ++j) {
            const double u = mid + 0.5 * h * xs[j];
            acc += 0.5 * h * ws[j] * std::exp(-u * s) * p.remainder(std::exp(-u));
        }
    }
    return acc;
}

void validate_profile(const AsymptoticProfile& p) {
    for (const auto& [alpha, coeff] : p.singular) {
        (void)coeff;
        if (!(alpha < 0.0)) throw ValidationError("singular exponents must be negative");
    }
    if (!p.remainder) return;
    if (!(p.remainder_order > 0.0)) throw ValidationError("remainder order must be positive");
    double early = 0.0;
    for (int k = 1; k <= 4; ++k) {
        const double t = std::pow(10.0, -k);
        early = std::max(early, std::abs(p.remainder(t)) / std::pow(t, p.remainder_order));
    }
    for (int k = 6; k <= 12; ++k) {
        const double t = std::pow(10.0, -k);
        const double r = std::abs(p.remainder(t));
        if (!std::isfinite(r) || r / std::pow(t, p.remainder_order) > 1e3 * std::max(early, 1e-300) + 1e-12)
            throw NumericalError("remainder does not decay at the declared rate");
    }
}

}  // namespace

double mellin_transform(const AsymptoticProfile& p, double s) {
    validate_profile(p);
    double acc = p.constant * special::rgamma(s + 1.0).real();
    const double rg = special::rgamma(s).real();
    for (const auto& [alpha, coeff] : p.singular) acc += coeff * rg / (s - alpha);
    if (p.remainder) {
        if (!(s > -p.remainder_order)) throw NumericalError("remainder integral diverges at this s");
        acc += rg * remainder_integral(p, s);
    }
    return acc;
}

double mellin_free_term(const AsymptoticProfile& p) {
    validate_profile(p);
    if (p.remainder) {
        const double r = remainder_integral(p, 0.0);
        if (!std::isfinite(r)) throw NumericalError("remainder integral is not finite");
    }
    return mellin_transform(p, 0.0);
}

ZetaDifference zeta_difference_at_zero(const EquivariantMap& phi, const EquivariantMap& u) {
    const SpectralData a = self_adjoint_spectrum(phi);
    const SpectralData b = self_adjoint_spectrum(phi + u);
    auto count = [](const SpectralData& s) { return s.positive_dim() > 0 ? zeta_I(s, 0.0).real() : 0.0; };
    return {count(a) - count(b), a.kernel_dim() - b.kernel_dim()};
}

}  // namespace rt
