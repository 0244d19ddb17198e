#include "resolab/bounds.hpp"
#include "resolab/kernels.hpp"
#include "resolab/reconstruction.hpp"

#include "support/kernel_checks.hpp"

#include <doctest.h>

#include <cmath>

using namespace resolab;

namespace {

Potential four_chi() { return Potential::constant(4.0, 0.0, 0.25); }

} // namespace

TEST_CASE("mesh validation")
{
    CHECK(mesh_size(1.0 / 16) == 16);
    CHECK(mesh_size(1.0 / 128) == 128);
    CHECK_THROWS_AS(mesh_size(1.0 / 8), PreconditionError);
    CHECK_THROWS_AS(mesh_size(1.0 / 24), PreconditionError);
    CHECK_THROWS_AS(k_kernel(Potential(), Potential::constant(1.0), 1.0 / 16, 1e-13), PreconditionError);
}

TEST_CASE("equal potentials give the zero kernel")
{
    const auto K = k_kernel(four_chi(), four_chi(), 1.0 / 32);
    CHECK(K.sup_norm() == 0.0);
    CHECK(l_kernel(K).sup_norm() == 0.0);
}

TEST_CASE("first series term for 0 -> 1")
{
    for (double x : {0.0, 0.25, 0.5})
        for (double t : {x, 0.75, 1.2})
            CHECK(std::abs(k0_value(Potential(), Potential::constant(1.0), x, t) - 0.5 * std::max(0.0, 1.0 - 0.5 * (t + x))) < 1e-15);
}

TEST_CASE("diagonal identity")
{
    CHECK(diagonal(TriangularKernelGrid(KernelKind::K, 16))(0.3) == cplx(0.0));
    for (int M : {32, 64}) {
        const double h = 1.0 / M;
        const auto K = k_kernel(Potential(), Potential::constant(1.0), h);
        const auto d = diagonal(K);
        double err = 0.0;
        for (int k = 0; k <= 100; ++k) {
            const double x = k / 100.0;
            err = std::max(err, std::abs(d(x) - 0.5 * (1.0 - x)));
        }
        CHECK(err <= 5.0 * h * h);
    }
    const auto K4 = k_kernel(Potential(), four_chi(), 1.0 / 64);
    CHECK(std::abs(diagonal(K4)(0.125) - 0.25) <= 5.0 / (64.0 * 64.0) * (1.0 + std::exp(2.0)));
}

TEST_CASE("kernel support and sup bound")
{
    const std::vector<std::pair<Potential, Potential>> pairs{
        {Potential(), Potential::constant(1.0)},
        {Potential(), four_chi()},
        {Potential::constant(1.0), add(Potential::constant(1.0), Potential::constant(0.1))},
        {Potential::constant(cplx(0.0, 1.0)), Potential::constant(cplx(1.0, 1.0), 0.0, 0.5)},
    };
    const double h = 1.0 / 32;
    for (const auto& [q1, q2] : pairs) {
        const auto K = k_kernel(q1, q2, h);
        CHECK(kcheck::support_vanishes(K));
        const double Q = std::max(l1_norm(q1), l1_norm(q2));
        const double diff = l1_norm(subtract(q2, q1));
        CHECK(K.sup_norm() <= 0.5 * diff * std::exp(2.0 * Q) * (1.0 + 10.0 * h));
        CHECK(K.sup_norm() <= Q * std::exp(2.0 * Q) * (1.0 + 10.0 * h));
        CHECK(K.q_budget == doctest::Approx(Q));
    }
}

TEST_CASE("inverse kernel")
{
    const auto K = k_kernel(Potential(), Potential::constant(1.0), 1.0 / 32);
    const auto L = l_kernel(K);
    for (int i = 0; i < 32; ++i) CHECK(L(i, i) == -K(i, i));
    CHECK(kcheck::support_vanishes(L));
    CHECK(l_kernel(TriangularKernelGrid(KernelKind::K, 16)).sup_norm() == 0.0);
}

TEST_CASE("composition residual is second order")
{
    const auto Kf = k_kernel(Potential(), Potential::constant(1.0), 1.0 / 256);
    double prev = 0.0;
    for (int M : {16, 32, 64}) {
        const auto K = k_kernel(Potential(), Potential::constant(1.0), 1.0 / M);
        const double res = kcheck::composition_residual(Kf, l_kernel(K));
        const double h = 1.0 / M;
        CHECK(res <= 10.0 * h * h * std::pow(1.0 + K.sup_norm(), 2));
        if (prev > 0.0) CHECK(prev / res >= 3.5);
        prev = res;
    }
}

TEST_CASE("compose_B special cases")
{
    const double h = 1.0 / 32;
    const auto Kq = k_kernel(Potential(), Potential::constant(1.0), h);
    const auto L = l_kernel(Kq);
    // q~ = q: B must vanish up to discretisation
    const auto B = compose_B(Kq, L);
    CHECK(B.sup_norm() <= 10.0 * h * h * std::pow(1.0 + Kq.sup_norm(), 2));
    // K~ = 0 gives B = L
    CHECK(kcheck::sup_difference(compose_B(TriangularKernelGrid(KernelKind::K, 32), L), L) == 0.0);
    // free reference: L = 0, B = K~
    CHECK(kcheck::sup_difference(compose_B(Kq, TriangularKernelGrid(KernelKind::L, 32)), Kq) == 0.0);
    CHECK_THROWS_AS(compose_B(Kq, TriangularKernelGrid(KernelKind::L, 16)), PreconditionError);
}

TEST_CASE("boundary values of B")
{
    const double h = 1.0 / 32;
    const int M = 32;
    const auto L = l_kernel(k_kernel(Potential(), Potential::constant(1.0), h));
    const std::vector<cplx> zero(2 * M + 1, 0.0);
    for (cplx v : boundary_B0(zero, L)) CHECK(v == cplx(0.0));
    std::vector<cplx> D(2 * M + 1);
    for (int j = 0; j <= 2 * M; ++j) D[j] = cplx(std::cos(j * h), j * h);
    D[2 * M] = 0.0;
    const auto same = boundary_B0(D, TriangularKernelGrid(KernelKind::L, M));
    for (int j = 0; j <= 2 * M; ++j) CHECK(same[j] == D[j]);

    // cross route: q = 1 -> q~ = 1.1
    const Potential q = Potential::constant(1.0), qt = Potential::constant(1.1);
    const auto Kq = k_kernel(Potential(), q, h), Kt = k_kernel(Potential(), qt, h);
    const auto Lq = l_kernel(Kq);
    std::vector<cplx> Dx(2 * M + 1);
    for (int j = 0; j <= 2 * M; ++j) Dx[j] = Kt(0, j) - Kq(0, j);
    const auto B0 = boundary_B0(Dx, Lq);
    const auto B = compose_B(Kt, Lq);
    double err = 0.0;
    for (int j = 0; j <= 2 * M; ++j) err = std::max(err, std::abs(B0[j] - B(0, j)));
    CHECK(err <= 10.0 * h * h * (1.0 + Kt.sup_norm()));
}

TEST_CASE("characteristic boundary iteration")
{
    const double h = 1.0 / 32;
    const Potential q = Potential::constant(1.0);
    CHECK(b_from_boundary([](double) { return cplx(0.0); }, q, four_chi(), h).sup_norm() == 0.0);

    // q~ = q: all corrections vanish on x = 0
    auto B0 = [](double t) { return t < 2.0 ? cplx(0.3 * (2.0 - t), 0.1 * t * (2.0 - t)) : cplx(0.0); };
    const auto B = b_from_boundary(B0, q, q, h);
    for (int j = 0; j < 64; ++j) CHECK(std::abs(B(0, j) - B0(j * h)) < 1e-15);
    CHECK(kcheck::support_vanishes(B));
    CHECK_THROWS_AS(b_from_boundary(B0, q, q, 1.0 / 24), PreconditionError);
}

TEST_CASE("route equivalence and factorial envelope of the iterates")
{
    struct Fixture {
        Potential q, qt;
    };
    const std::vector<Fixture> fx{{Potential(), Potential::constant(1.0)},
                                  {Potential::constant(1.0), add(Potential::constant(1.0), Potential::constant(0.1))}};
    for (const auto& f : fx) {
        for (int M : {32, 64}) {
            const double h = 1.0 / M;
            const auto Lq = l_kernel(k_kernel(Potential(), f.q, h));
            const auto Kt = k_kernel(Potential(), f.qt, h);
            const auto B = compose_B(Kt, Lq);
            const auto it = b_from_boundary_detailed(kcheck::row0_function(B), f.q, f.qt, h, 1e-12, true);
            CHECK(kcheck::sup_difference(B, it.grid) <= 20.0 * h * h);

            double C1 = 0.0;
            for (int j = 0; j <= 2 * M; ++j) C1 = std::max(C1, std::abs(B(0, j)));
            const double Q = std::max(l1_norm(f.q), l1_norm(f.qt));
            for (size_t n = 1; n < it.terms.size(); ++n) {
                const auto& Bn = it.terms[n];
                for (int i = 0; i <= M; ++i)
                    for (int j = i; i + j < 2 * M; ++j)
                        CHECK(std::abs(Bn(i, j)) <= series_term_bound(C1, Q, static_cast<int>(n), i * h, j * h) + 1e-12);
            }
        }
    }
}

TEST_CASE("K(0,0) agrees with the Fourier route")
{
    const ForwardJost f(Potential::constant(1.0));
    const std::vector<double> t0{0.0};
    const auto D = fourier_invert_diff([&](double z) { return f.value(cplx(z)) - 1.0; }, 200.0, t0);
    const auto K = k_kernel(Potential(), Potential::constant(1.0), 1.0 / 64);
    CHECK(std::abs(D.values[0] - K(0, 0)) < 0.01);
}

TEST_CASE("H_t at the boundary is finite and small for a smooth pair")
{
    const auto K = k_kernel(Potential(), Potential::constant(1.0), 1.0 / 64);
    const auto ht = h_t_boundary(K, Potential(), Potential::constant(1.0));
    REQUIRE(ht.size() == 129);
    for (cplx v : ht) CHECK(std::abs(v) < 2.0);
}

TEST_CASE("grid dump format")
{
    const auto K = k_kernel(Potential(), Potential::constant(1.0), 1.0 / 16);
    const std::string s = format_kernel_grid(K);
    CHECK(s.rfind("# kernelgrid kind=K h=0.0625\n", 0) == 0);
    size_t rows = 0;
    for (char c : s) rows += c == '\n';
    // nodes with x + t < 2: sum over i of (2M - 2i) for i = 0..M-1
    CHECK(rows == 1 + 16 * 17);
}
