#pragma once

#include "rt/linalg.hpp"

namespace rt::special {

// 1/Gamma(z); entire, exactly zero at non-positive integers.
cplx rgamma(cplx z);

// x^{-s} P(s, x) = e^{-x} sum_k x^k / Gamma(s + k + 1), with P the regularized lower incomplete gamma.
cplx lower_scaled(cplx s, double x);

// x^{-s} Gamma(s, x) by continued fraction; x > 0.
cplx upper_scaled(cplx s, double x);

}  // namespace rt::special
