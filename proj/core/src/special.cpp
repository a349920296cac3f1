#include "rt/special.hpp"

#include <cmath>
#include <numbers>

#include "rt/errors.hpp"

namespace rt::special {

namespace {

constexpr double kLanczos[] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                               771.32342877765313,   -176.61502916214059,   12.507343278686905,
                               -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

cplx log_gamma_right(cplx z) {
    z -= 1.0;
    cplx x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
    const cplx t = z + 7.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace

cplx rgamma(cplx z) {
    if (z.real() < 0.5) {
        if (z.imag() == 0.0 && z.real() == std::round(z.real())) return 0.0;
        return std::sin(std::numbers::pi * z) * std::exp(log_gamma_right(1.0 - z)) / std::numbers::pi;
    }
    return std::exp(-log_gamma_right(z));
}

cplx lower_scaled(cplx s, double x) {
    if (x < 0) throw NumericalError("incomplete gamma needs a non-negative argument");
    cplx term = rgamma(s + 1.0);
    cplx sum = term;
    for (int k = 1; k < 100000; ++k) {
        term *= x / (s + static_cast<double>(k));
        sum += term;
        if (k > x && std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return std::exp(-x) * sum;
}

cplx upper_scaled(cplx s, double x) {
    if (!(x > 0)) throw NumericalError("continued fraction needs a positive argument");
    constexpr double tiny = 1e-300;
    cplx b = x + 1.0 - s;
    cplx c = 1.0 / tiny;
    cplx d = 1.0 / b;
    cplx h = d;
    for (int i = 1; i < 100000; ++i) {
        const cplx an = -static_cast<double>(i) * (static_cast<double>(i) - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const cplx del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x) * h;
}

}  // namespace rt::special
