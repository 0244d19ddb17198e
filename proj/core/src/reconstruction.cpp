#include "resolab/reconstruction.hpp"

#include "resolab/bounds.hpp"
#include "resolab/jost.hpp"
#include "resolab/kernels.hpp"
#include "resolab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace resolab {

namespace {

constexpr cplx I(0.0, 1.0);

std::vector<cplx> tail_integral_samples(const Potential& q_true, const Potential& q_ref, const std::vector<double>& xs)
{
    const Potential d = subtract(q_true, q_ref);
    std::vector<cplx> out(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) out[i] = tail_integral(d, xs[i]);
    return out;
}

double sup_diff(const std::vector<cplx>& a, const std::vector<cplx>& b)
{
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
    return s;
}

} // namespace

double pv_window_kernel(double Z, double t)
{
    if (t == 0.0) return 0.0;
    const double s = t > 0.0 ? 1.0 : -1.0;
    return s * (0.5 * pi - sine_integral(Z * std::abs(t))) / pi;
}

double pv_tail_kernel(double Rband, double t)
{
    if (!(Rband > 0.0)) throw PreconditionError("pv_tail_kernel: Rband must be positive");
    return pv_window_kernel(std::pow(Rband, 1.0 / 6.0), t);
}

BoundaryKernelDiff fourier_invert_diff(const RealLineFn& df, double Z, const std::vector<double>& t_grid,
                                       const InversionOptions& opt)
{
    if (!(Z > 0.0)) throw PreconditionError("fourier_invert_diff: Z must be positive");
    if (t_grid.empty()) throw PreconditionError("fourier_invert_diff: empty t grid");
    for (double t : t_grid)
        if (!(t >= 0.0)) throw PreconditionError("fourier_invert_diff: t must be >= 0");
    const double t_max = *std::max_element(t_grid.begin(), t_grid.end());
    const double width = 0.5 * pi / std::max(1.0, t_max);
    const int panels = std::max(1, static_cast<int>(std::ceil(2.0 * Z / width)));
    const QuadratureRule cc = clenshaw_curtis(opt.cc_order);

    std::vector<double> nodes;
    std::vector<cplx> wf;
    nodes.reserve(static_cast<size_t>(panels) * cc.nodes.size());
    const double pw = 2.0 * Z / panels;
    for (int k = 0; k < panels; ++k) {
        const double mid = -Z + (k + 0.5) * pw;
        for (size_t n = 0; n < cc.nodes.size(); ++n) {
            const double z = mid + 0.5 * pw * cc.nodes[n];
            nodes.push_back(z);
            wf.push_back(0.5 * pw * cc.weights[n] * df(z));
        }
    }

    BoundaryKernelDiff out;
    out.t_grid = t_grid;
    out.window = Z;
    out.values.resize(t_grid.size());

    if (opt.tail_correction) {
        const cplx a = Z * df(Z), b = -Z * df(-Z);
        out.c0 = (a + b) / (2.0 * I);
        const double lo = std::min(std::abs(a), std::abs(b)), hi = std::max(std::abs(a), std::abs(b));
        if (hi > 3.0 * lo && hi > 1e-12) {
            std::ostringstream msg;
            msg << "tail estimate inconsistent between +Z and -Z (|Z df(Z)| = " << std::abs(a)
                << ", |Z df(-Z)| = " << std::abs(b) << "); Z = " << Z << " may be too small";
            out.warnings.push_back(msg.str());
        }
    }

    for (size_t k = 0; k < t_grid.size(); ++k) {
        const double t = t_grid[k];
        if (t >= 2.0) {
            out.values[k] = 0.0;
            continue;
        }
        cplx s = 0.0;
        for (size_t n = 0; n < nodes.size(); ++n) s += wf[n] * std::exp(-I * (nodes[n] * t));
        s /= 2.0 * pi;
        if (opt.tail_correction) {
            if (t > 0.0)
                s += out.c0 * pv_window_kernel(Z, t);
            else if (opt.one_sided_origin)
                s += 0.5 * out.c0;
        }
        out.values[k] = s;
    }
    return out;
}

BandSplit band_split_diff(const RealLineFn& df, double Rband, const std::vector<double>& t_grid, double p)
{
    if (!(Rband > 0.0)) throw PreconditionError("band_split_diff: Rband must be positive");
    InversionOptions opt;
    opt.tail_correction = false;
    opt.one_sided_origin = false;
    BandSplit out;
    out.I_part = fourier_invert_diff(df, std::pow(Rband, 1.0 / 6.0), t_grid, opt);
    out.I_part.tail_R = Rband;
    out.nu = nu_exponent(p);
    out.tail_envelope = [Rband, p](double t) { return band_tail_envelope(t, Rband, p); };
    return out;
}

cplx ReconstructionResult::estimate(double x) const
{
    if (x_grid.empty()) throw PreconditionError("estimate: empty result");
    if (!(x >= 0.0 && x <= 1.0)) throw PreconditionError("estimate: x must lie in [0, 1]");
    if (x >= 1.0) return estimate_values.back();
    const auto it = std::upper_bound(x_grid.begin(), x_grid.end(), x);
    const size_t i = static_cast<size_t>(it - x_grid.begin()) - 1;
    if (i + 1 >= x_grid.size()) return estimate_values.back();
    const double w = (x - x_grid[i]) / (x_grid[i + 1] - x_grid[i]);
    return (1.0 - w) * estimate_values[i] + w * estimate_values[i + 1];
}

ReconstructionResult reconstruct_from_zeros(const ZeroSet& zs_tilde, const Potential& q_ref, double p, double h,
                                            const ReconstructionOptions& opt)
{
    const double R = zs_tilde.R;
    if (!(R >= 20.0)) throw PreconditionError("reconstruct_from_zeros: requires R >= 20");
    if (!(p > 1.0 && p <= 2.0)) throw PreconditionError("reconstruct_from_zeros: p must lie in (1, 2]");
    const int M = mesh_size(h);
    const int N = 2 * M;

    ReconstructionResult res;
    auto& dg = res.diagnostics;
    dg.R = R;
    dg.eps = zs_tilde.eps;
    dg.p = p;
    dg.h = h;
    dg.Z = std::pow(R, 1.0 / 6.0);
    dg.nu = nu_exponent(p);
    dg.gamma = gamma_exponent(p);

    const AxisTarget target = opt.target ? opt.target : unit_target();
    const FactorizedJost model = opt.extended_calibration ? calibrate(zs_tilde, target, R, opt.calibration)
                                                          : normalize(zs_tilde, target, R);
    const ForwardJost ref(q_ref);
    auto df = [&](double z) { return model.value(cplx(z)) - ref.value(cplx(z)); };

    std::vector<double> ts(N + 1);
    for (int j = 0; j <= N; ++j) ts[j] = j * h;
    const BoundaryKernelDiff D = fourier_invert_diff(df, dg.Z, ts, opt.inversion);
    dg.c0 = D.c0;
    dg.warnings = D.warnings;

    const TriangularKernelGrid L = l_kernel(k_kernel(Potential(), q_ref, h, opt.kernel_tol));
    const std::vector<cplx> B0 = boundary_B0(D.values, L);

    res.x_grid.resize(M + 1);
    res.estimate_values.resize(M + 1);
    for (int i = 0; i <= M; ++i) {
        res.x_grid[i] = i * h;
        res.estimate_values[i] = 2.0 * B0[2 * i];
    }
    res.x_grid[M] = 1.0;

    double Q = opt.q_budget;
    if (Q <= 0.0) {
        Q = l1_norm(q_ref);
        if (opt.q_true) Q = std::max(Q, l1_norm(*opt.q_true));
    }
    dg.q_budget = Q;
    double C1 = 0.0;
    for (const cplx& b : B0) C1 = std::max(C1, std::abs(b));
    dg.correction_envelope = correction_envelope_bound(C1, Q);

    if (opt.refine) {
        auto b0fn = [&B0, h, N](double t) {
            const double u = t / h;
            const int j = std::clamp(static_cast<int>(std::floor(u)), 0, N - 1);
            const double w = u - j;
            return (1.0 - w) * B0[j] + w * B0[j + 1];
        };
        const std::vector<cplx> zeroth = res.estimate_values;
        std::vector<cplx> est = zeroth;
        std::vector<double> deriv_x(M + 1);
        std::vector<cplx> qs(M + 1);
        Potential q_tilde = q_ref;
        for (int k = 0; k < opt.max_refinements; ++k) {
            const TriangularKernelGrid B = b_from_boundary(b0fn, q_ref, q_tilde, h, opt.kernel_tol);
            std::vector<cplx> next(M + 1);
            for (int i = 0; i <= M; ++i) next[i] = 2.0 * B(i, i);
            next[M] = 0.0;
            const double step = sup_diff(next, est);
            dg.refinement_steps.push_back(step);
            dg.refinements = k + 1;
            if (k >= 1 && step > dg.refinement_steps[k - 1] * (1.0 + 1e-9) + 1e-14) {
                dg.diverged = true;
                dg.warnings.push_back("fixed-point refinement diverged; returning the zeroth-order estimate");
                est = zeroth;
                break;
            }
            est = std::move(next);
            if (step < opt.refine_tol) break;
            for (int i = 0; i <= M; ++i) {
                const int a = std::max(0, i - 1), b = std::min(M, i + 1);
                const cplx d = (est[b] - est[a]) / ((b - a) * h);
                deriv_x[i] = i * h;
                qs[i] = q_ref(std::min(i * h, 1.0 - 1e-15)) - d;
            }
            q_tilde = Potential::from_samples(deriv_x, qs);
        }
        res.estimate_values = est;
    }
    res.estimate_values[M] = 0.0;

    for (const cplx& v : res.estimate_values) dg.sup_estimate = std::max(dg.sup_estimate, std::abs(v));
    if (opt.q_true) {
        res.truth_values = tail_integral_samples(*opt.q_true, q_ref, res.x_grid);
        dg.truth_error = sup_diff(res.estimate_values, res.truth_values);
    }
    if (dg.eps < 0.75) dg.bound_shape = stability_envelope(R, dg.eps, p);
    return res;
}

std::string format_reconstruction_csv(const ReconstructionResult& r)
{
    const auto& d = r.diagnostics;
    std::ostringstream os;
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "# reconstruction R=%.17g eps=%.17g p=%.17g h=%.17g Z=%.17g sup=%.17g bound_shape=%.17g "
                  "truth_error=%.17g refinements=%d diverged=%d\n",
                  d.R, d.eps, d.p, d.h, d.Z, d.sup_estimate, d.bound_shape, d.truth_error, d.refinements,
                  d.diverged ? 1 : 0);
    os << buf;
    const bool truth = !r.truth_values.empty();
    os << (truth ? "x,est_re,est_im,truth_re,truth_im\n" : "x,est_re,est_im\n");
    for (size_t i = 0; i < r.x_grid.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g", r.x_grid[i], r.estimate_values[i].real(),
                      r.estimate_values[i].imag());
        os << buf;
        if (truth) {
            std::snprintf(buf, sizeof buf, ",%.17g,%.17g", r.truth_values[i].real(), r.truth_values[i].imag());
            os << buf;
        }
        os << '\n';
    }
    return os.str();
}

void save_reconstruction_csv(const ReconstructionResult& r, const std::string& path)
{
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write " + path);
    f << format_reconstruction_csv(r);
}

} // namespace resolab
