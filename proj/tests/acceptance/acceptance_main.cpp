// Acceptance driver: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.

#include "resolab/bounds.hpp"
#include "resolab/factorization.hpp"
#include "resolab/harness.hpp"
#include "resolab/jost.hpp"
#include "resolab/kernels.hpp"
#include "resolab/reconstruction.hpp"
#include "resolab/zeros.hpp"

#include "support/kernel_checks.hpp"
#include "support/oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

using namespace resolab;
namespace fs = std::filesystem;

namespace {

constexpr cplx I(0.0, 1.0);

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string list(const std::vector<double>& v)
{
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt("%.4g", v[i]);
    return s + "]";
}

// psi(z; n) for n chi_[0,1/n], transcribed literally
cplx chi_step_formula(int n, cplx z)
{
    const cplx k = std::sqrt(z * z - static_cast<double>(n));
    const double nn = n;
    if (std::abs(k) < 1e-7) return std::exp(I * z / nn) * (1.0 - I * z / nn);
    return std::exp(I * z / nn) * (std::cos(k / nn) - I * z / k * std::sin(k / nn));
}

Outcome criterion1()
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> U(-50.0, 50.0);
    double worst = 0.0;
    for (int n : {1, 4, 9}) {
        const Potential q = Potential::constant(static_cast<double>(n), 0.0, 1.0 / n);
        for (int k = 0; k < 500; ++k) {
            cplx z;
            do z = cplx(U(rng), U(rng));
            while (std::abs(z) > 50.0);
            const cplx ref = chi_step_formula(n, z);
            worst = std::max(worst, std::abs(jost_function(q, z) - ref) / std::abs(ref));
        }
    }
    return {worst <= 1e-10, "max relative error " + fmt("%.3g", worst) + " (tol 1e-10)"};
}

Outcome criterion2()
{
    const Potential zero;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-100.0, 100.0);
    double psi_dev = 0.0;
    for (int k = 0; k < 500; ++k) psi_dev = std::max(psi_dev, std::abs(jost_function(zero, cplx(U(rng), U(rng))) - 1.0));
    const ZeroSet zs = find_zeros(ForwardJost(zero), 100.0);
    double ker = 0.0;
    for (double h : {1.0 / 16, 1.0 / 64}) {
        const auto K = k_kernel(zero, zero, h);
        const auto L = l_kernel(K);
        ker = std::max({ker, K.sup_norm(), L.sup_norm(), compose_B(K, L).sup_norm(),
                        b_from_boundary([](double) { return cplx(0.0); }, zero, zero, h).sup_norm()});
    }
    const bool ok = psi_dev <= 1e-12 && zs.zeros.empty() && ker <= 1e-12;
    return {ok, "max|psi-1| " + fmt("%.3g", psi_dev) + ", zeros in |z|<100: " + std::to_string(zs.zeros.size()) +
                    ", max kernel sup " + fmt("%.3g", ker)};
}

struct Pair {
    Potential q1, q2;
    const char* name;
};

Outcome criterion3()
{
    const std::vector<Pair> fixtures{
        {Potential(), Potential::constant(1.0), "0->1"},
        {Potential(), Potential::constant(4.0, 0.0, 0.25), "0->4chi"},
        {Potential::constant(1.0), add(Potential::constant(1.0), Potential::constant(0.1)), "1->1.1"},
        {Potential(), Potential::constant(cplx(1.0, 1.0)), "0->(1+i)"},
    };
    bool ok = true;
    double worst_diag_ratio = 0.0, worst_comp_ratio = 0.0, min_order_ratio = 1e300;
    bool support_ok = true;
    for (const auto& f : fixtures) {
        const double Q = std::max(l1_norm(f.q1), l1_norm(f.q2));
        const auto Kf = k_kernel(f.q1, f.q2, 1.0 / 256);
        double prev = 0.0;
        for (int M : {16, 32, 64}) {
            const double h = 1.0 / M;
            const auto K = k_kernel(f.q1, f.q2, h);
            const auto d = diagonal(K);
            double diag = 0.0;
            for (int i = 0; i <= 4 * M; ++i) {
                const double x = i / (4.0 * M);
                const cplx exact = 0.5 * (tail_integral(f.q2, x) - tail_integral(f.q1, x));
                diag = std::max(diag, std::abs(d(x) - exact));
            }
            const double diag_tol = 5.0 * h * h * (1.0 + Q * std::exp(2.0 * Q));
            worst_diag_ratio = std::max(worst_diag_ratio, diag / diag_tol);
            const auto L = l_kernel(K);
            support_ok = support_ok && kcheck::support_vanishes(K) && kcheck::support_vanishes(L);
            const double res = kcheck::composition_residual(Kf, L);
            const double comp_tol = 10.0 * h * h * std::pow(1.0 + K.sup_norm(), 2);
            worst_comp_ratio = std::max(worst_comp_ratio, res / comp_tol);
            if (prev > 0.0) min_order_ratio = std::min(min_order_ratio, prev / res);
            prev = res;
        }
    }
    ok = worst_diag_ratio <= 1.0 && worst_comp_ratio <= 1.0 && min_order_ratio >= 3.5 && support_ok;
    return {ok, "diag err/tol " + fmt("%.3g", worst_diag_ratio) + ", composition res/tol " +
                    fmt("%.3g", worst_comp_ratio) + ", min halving ratio " + fmt("%.3g", min_order_ratio) +
                    ", support " + (support_ok ? "exact" : "VIOLATED")};
}

Outcome criterion4()
{
    const std::vector<Pair> fixtures{
        {Potential(), Potential::constant(1.0), "0->1"},
        {Potential::constant(1.0), add(Potential::constant(1.0), Potential::constant(0.1)), "1->1.1"},
    };
    double worst = 0.0;
    for (const auto& f : fixtures) {
        for (int M : {16, 32, 64}) {
            const double h = 1.0 / M;
            const auto B = compose_B(k_kernel(Potential(), f.q2, h), l_kernel(k_kernel(Potential(), f.q1, h)));
            const auto Bb = b_from_boundary(kcheck::row0_function(B), f.q1, f.q2, h);
            worst = std::max(worst, kcheck::sup_difference(B, Bb) / (20.0 * h * h));
        }
    }
    return {worst <= 1.0, "max sup|B_compose - B_boundary| / 20h^2 = " + fmt("%.3g", worst)};
}

Outcome criterion5()
{
    const std::vector<std::pair<Potential, const char*>> fixtures{
        {Potential::constant(1.0), "q=1"},
        {Potential::constant(4.0, 0.0, 0.25), "4chi"},
        {Potential::constant(cplx(1.0, 1.0)), "(1+i)chi"},
    };
    bool ok = true;
    std::string detail;
    for (const auto& [q, name] : fixtures) {
        const double k = kappa(l1_norm(q)), rho = 2.0 * k;
        const cplx c(0.0, 3.0 * rho);
        const double rmax = 5.0 * rho;
        const ZeroSet zs = find_zeros(ForwardJost(q), rmax, 1e-10, c);
        std::vector<double> rs;
        for (int i = 0; i <= 60; ++i) rs.push_back(rmax * i / 60.0 * (1.0 - 1e-9));
        const auto N = counting_function(zs, c, rs);
        double margin = -1e300;
        for (size_t i = 0; i < rs.size(); ++i) margin = std::max(margin, N[i] - jensen_bound(rho, k, rs[i]));
        ok = ok && margin <= 0.0;
        detail += std::string(detail.empty() ? "" : ", ") + name + ": N(5rho)=" + std::to_string(N.back()) +
                  " max(N-bound)=" + fmt("%.4g", margin);
    }
    return {ok, detail};
}

Outcome criterion6()
{
    const std::vector<double> Rs{30.0, 60.0, 120.0, 240.0};
    bool ok = true;
    std::string detail;
    for (const auto& [q, name] : std::vector<std::pair<Potential, const char*>>{{Potential::constant(1.0), "q=1"},
                                                                              {Potential::constant(0.5), "q=0.5"}}) {
        const ForwardJost psi(q);
        const ZeroSet all = find_zeros(psi, Rs.back());
        std::vector<double> scaled;
        for (double R : Rs) {
            ZeroSet zs = all;
            zs.zeros.clear();
            zs.R = R;
            for (const auto& z : all.zeros)
                if (std::abs(z.z) < R) zs.zeros.push_back(z);
            const FactorizedJost model = normalize(zs, unit_target(), R);
            const double w = std::cbrt(R);
            double err = 0.0;
            for (int i = 0; i <= 400; ++i) {
                const cplx z(-w + 2.0 * w * i / 400.0, 0.0);
                err = std::max(err, std::abs(model.value(z) - psi.value(z)));
            }
            scaled.push_back(err * w);
        }
        std::vector<double> s = scaled;
        std::sort(s.begin(), s.end());
        const double med = 0.5 * (s[1] + s[2]);
        for (double v : scaled) ok = ok && v <= 3.0 * med && v >= med / 3.0;
        detail += std::string(detail.empty() ? "" : "; ") + name + " err*R^(1/3)=" + list(scaled) + " median " +
                  fmt("%.4g", med);
    }
    return {ok, detail};
}

fs::path workdir()
{
    const fs::path d = fs::path(RESOLAB_ACCEPTANCE_WORKDIR);
    fs::create_directories(d);
    return d;
}

StabilityReport sweep(const std::string& name, const std::string& body)
{
    const fs::path d = workdir() / name;
    fs::create_directories(d);
    std::ofstream(d / "ref.pot") << "piece 0 1 const 0 0\n";
    std::ofstream(d / "true.pot") << "piece 0 1 const 0.5 0\n";
    std::ofstream(d / "sweep.cfg") << "potential_ref = ref.pot\npotential_true = true.pot\nout_dir = .\nseed = 1\n"
                                   << body;
    const SweepConfig cfg = load_config((d / "sweep.cfg").string());
    cmd_sweep(cfg);
    return run_sweep(cfg);
}

Outcome criterion7()
{
    const StabilityReport rep = sweep("stability", "R_list = 30, 60, 120, 240\neps_list = 0\n");
    std::vector<double> e;
    std::vector<std::pair<double, double>> pairs;
    bool ok = rep.rows.size() == 4;
    for (const auto& r : rep.rows) {
        ok = ok && r.status == "ok";
        e.push_back(r.empirical_sup_error);
        pairs.emplace_back(stability_shape(r.R, 2.0), r.empirical_sup_error);
    }
    for (size_t k = 1; k < e.size(); ++k) ok = ok && e[k] <= 1.2 * e[k - 1];
    const ConstantFit fit = fit_constant(pairs);
    ok = ok && fit.relative_residual < 0.5;
    return {ok, "errors " + list(e) + ", fitted C " + fmt("%.4g", fit.C) + ", relative residual " +
                    fmt("%.3g", fit.relative_residual)};
}

Outcome criterion8()
{
    const StabilityReport rep = sweep("perturbation", "R_list = 120\neps_list = 0, 0.005, 0.01, 0.02\n");
    std::vector<double> e, eps;
    bool ok = rep.rows.size() == 4;
    for (const auto& r : rep.rows) {
        ok = ok && r.status == "ok";
        e.push_back(r.empirical_sup_error);
        eps.push_back(r.eps);
    }
    if (!ok) return {false, "sweep rows missing or failed"};
    const double noise = 0.2 * e[0];
    for (size_t k = 1; k < e.size(); ++k) ok = ok && e[k] >= e[k - 1] - noise;
    std::vector<std::pair<double, double>> pairs;
    for (size_t k = 1; k < e.size(); ++k) pairs.emplace_back(perturbation_shape(120.0, eps[k]), std::max(0.0, e[k] - e[0]));
    const ConstantFit fit = fit_constant(pairs);
    double worst = -1e300;
    for (size_t k = 1; k < e.size(); ++k)
        worst = std::max(worst, (e[k] - e[0]) - (fit.C * perturbation_shape(120.0, eps[k]) + noise));
    ok = ok && worst <= 0.0;

    // informational: the perturbation-only change sup|est_eps - est_0| for the same draw, against its own fit
    const Potential qt = Potential::constant(0.5);
    const ZeroSet zs = find_zeros(ForwardJost(qt), 120.0, 1e-10);
    ReconstructionOptions opt;
    opt.q_true = qt;
    const auto base = reconstruct_from_zeros(zs, Potential(), 2.0, 1.0 / 64, opt);
    std::vector<double> shift;
    std::vector<std::pair<double, double>> spairs;
    for (size_t k = 1; k < eps.size(); ++k) {
        const auto r = reconstruct_from_zeros(perturb_zeros(zs, eps[k], 1), Potential(), 2.0, 1.0 / 64, opt);
        double d = 0.0;
        for (size_t i = 0; i < r.estimate_values.size(); ++i)
            d = std::max(d, std::abs(r.estimate_values[i] - base.estimate_values[i]));
        shift.push_back(d);
        spairs.emplace_back(perturbation_shape(120.0, eps[k]), d);
    }
    const ConstantFit sfit = fit_constant(spairs);
    return {ok, "errors " + list(e) + ", fitted C " + fmt("%.4g", fit.C) + ", max(increment - envelope) " +
                    fmt("%.3g", worst) + "; info: sup|est_eps - est_0| " + list(shift) + " fit C " +
                    fmt("%.4g", sfit.C) + " rel. residual " + fmt("%.3g", sfit.relative_residual)};
}

Outcome criterion9()
{
    bool ok = true;
    std::string detail;
    for (const auto& [q, name] : std::vector<std::pair<Potential, const char*>>{{Potential::constant(1.0), "q=1"},
                                                                              {Potential::constant(0.5), "q=0.5"}}) {
        const ZeroSet all = find_zeros(ForwardJost(q), 240.0);
        double e30 = 0.0, e240 = 0.0;
        for (double R : {30.0, 240.0}) {
            ZeroSet zs = all;
            zs.zeros.clear();
            zs.R = R;
            for (const auto& z : all.zeros)
                if (std::abs(z.z) < R) zs.zeros.push_back(z);
            ReconstructionOptions opt;
            opt.q_true = q;
            const auto r = reconstruct_from_zeros(zs, q, 2.0, 1.0 / 64, opt);
            (R == 30.0 ? e30 : e240) = r.diagnostics.truth_error;
        }
        ok = ok && e240 < e30 / 3.0;
        detail += std::string(detail.empty() ? "" : "; ") + name + " R=30: " + fmt("%.4g", e30) + " R=240: " +
                  fmt("%.4g", e240) + " ratio " + fmt("%.3g", e240 / e30);
    }
    return {ok, detail};
}

Outcome criterion10()
{
    double worst = 0.0, C1 = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double t = 0.02 + (2.0 - 0.02) * i / 19.0;
        for (int j = 0; j < 20; ++j) {
            const double Rband = std::pow(10.0, 1.3 + 6.7 * j / 19.0);
            const double v = pv_tail_kernel(Rband, t);
            worst = std::max(worst, std::abs(v - oracle::brute_pv(std::pow(Rband, 1.0 / 6.0), t)));
            C1 = std::max(C1, std::abs(v) / pv_envelope(t, Rband));
        }
    }
    const bool ok = worst <= 1e-6 && C1 <= 2.0 / pi;
    return {ok, "max |pv - brute| " + fmt("%.3g", worst) + " (tol 1e-6), fitted C1 " + fmt("%.4g", C1) +
                    " (analytic cap 2/pi)"};
}

} // namespace

int main()
{
    using Fn = Outcome (*)();
    const std::vector<std::pair<const char*, Fn>> criteria{
        {"analytic step-potential oracle", criterion1},
        {"free-case exactness", criterion2},
        {"kernel identities", criterion3},
        {"route equivalence", criterion4},
        {"Jensen counting bound", criterion5},
        {"factorized model error shape", criterion6},
        {"conditional stability sweep", criterion7},
        {"perturbation response", criterion8},
        {"uniqueness probe", criterion9},
        {"principal-value kernel", criterion10},
    };
    int failed = 0;
    for (size_t k = 0; k < criteria.size(); ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %zu: %s  %s: %s [%.1fs]\n", k + 1, o.pass ? "PASS" : "FAIL", criteria[k].first,
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
