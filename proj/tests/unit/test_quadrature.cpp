#include "resolab/quadrature.hpp"

#include <doctest.h>

#include <cmath>

using namespace resolab;

TEST_CASE("gauss-legendre integrates polynomials of degree 2n-1 exactly")
{
    for (int n : {2, 4, 8, 16}) {
        const auto& r = gauss_legendre(n);
        for (int d = 0; d <= 2 * n - 1; ++d) {
            double s = 0.0;
            for (size_t k = 0; k < r.nodes.size(); ++k) s += r.weights[k] * std::pow(r.nodes[k], d);
            const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
            CHECK(s == doctest::Approx(exact).epsilon(1e-13));
        }
    }
}

TEST_CASE("clenshaw-curtis weights sum to 2 and integrate exp")
{
    const auto r = clenshaw_curtis(16);
    REQUIRE(r.nodes.size() == 17);
    double w = 0.0, s = 0.0;
    for (size_t k = 0; k < r.nodes.size(); ++k) {
        w += r.weights[k];
        s += r.weights[k] * std::exp(r.nodes[k]);
    }
    CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(s == doctest::Approx(std::exp(1.0) - std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("sine integral reference values")
{
    // values from a 30-digit evaluation
    CHECK(sine_integral(0.0) == 0.0);
    CHECK(sine_integral(1.0) == doctest::Approx(0.946083070367183015).epsilon(1e-15));
    CHECK(sine_integral(2.0) == doctest::Approx(1.605412976802694849).epsilon(1e-15));
    CHECK(sine_integral(10.0) == doctest::Approx(1.658347594218874049).epsilon(1e-15));
    CHECK(sine_integral(100.0) == doctest::Approx(1.562225466889056293).epsilon(1e-15));
    CHECK(sine_integral(-3.0) == doctest::Approx(-1.848652527999468256).epsilon(1e-15));
    CHECK(sine_integral(1e8) == doctest::Approx(M_PI / 2).epsilon(1e-8));
}
