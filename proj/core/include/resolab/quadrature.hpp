#pragma once

#include <vector>

namespace resolab {

struct QuadratureRule {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1].
const QuadratureRule& gauss_legendre(int n);

// Clenshaw-Curtis rule with n+1 nodes cos(k pi / n) on [-1, 1]; n even.
QuadratureRule clenshaw_curtis(int n);

// Si(x) = int_0^x sin(t)/t dt, accurate to a few ulps for all real x.
double sine_integral(double x);

} // namespace resolab
