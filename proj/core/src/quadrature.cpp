#include "resolab/quadrature.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace resolab {

namespace {

QuadratureRule build_gauss_legendre(int n)
{
    QuadratureRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) { p1 = x; p0 = 1.0; }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

} // namespace

const QuadratureRule& gauss_legendre(int n)
{
    if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<QuadratureRule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<QuadratureRule>(build_gauss_legendre(n));
    return *slot;
}

QuadratureRule clenshaw_curtis(int n)
{
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("clenshaw_curtis: n must be even and >= 2");
    QuadratureRule r;
    r.nodes.resize(n + 1);
    r.weights.resize(n + 1);
    for (int k = 0; k <= n; ++k) {
        double theta = M_PI * k / n;
        r.nodes[k] = std::cos(theta);
        double s = 0.0;
        for (int j = 1; j <= n / 2; ++j) {
            double b = (j == n / 2) ? 1.0 : 2.0;
            s += b / (4.0 * j * j - 1.0) * std::cos(2.0 * j * theta);
        }
        double c = (k == 0 || k == n) ? 1.0 : 2.0;
        r.weights[k] = c / n * (1.0 - s);
    }
    return r;
}

double sine_integral(double x)
{
    if (x < 0) return -sine_integral(-x);
    if (x == 0) return 0.0;
    const double eps = 1e-16;
    if (x > 2.0) {
        // continued fraction for E1(ix), modified Lentz
        const double tiny = 1e-300;
        std::complex<double> b(1.0, x);
        std::complex<double> c(1.0 / tiny, 0.0);
        std::complex<double> d = 1.0 / b;
        std::complex<double> h = d;
        for (int i = 2; i < 100000; ++i) {
            double a = -(i - 1.0) * (i - 1.0);
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            std::complex<double> del = c * d;
            h *= del;
            if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < eps) break;
        }
        h *= std::complex<double>(std::cos(x), -std::sin(x));
        return M_PI / 2 + h.imag();
    }
    double sum = 0.0, term = x;
    for (int k = 0; k < 60; ++k) {
        double add = term / (2 * k + 1);
        sum += add;
        if (std::abs(add) < eps * std::abs(sum)) break;
        term *= -x * x / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
    }
    return sum;
}

} // namespace resolab
