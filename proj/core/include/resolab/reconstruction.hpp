#pragma once

#include "resolab/factorization.hpp"
#include "resolab/potential.hpp"
#include "resolab/zeros.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace resolab {

using RealLineFn = std::function<cplx(double)>;

struct BoundaryKernelDiff {
    std::vector<double> t_grid;
    std::vector<cplx> values;
    double window = 0.0;  // Z: the transform is integrated over [-Z, Z]
    double tail_R = 0.0;  // band parameter when produced by band_split_diff, else 0
    cplx c0 = 0.0;        // tail amplitude used in the PV correction
    std::vector<std::string> warnings;
};

struct InversionOptions {
    int cc_order = 16;              // Clenshaw-Curtis points per panel minus one (even)
    bool tail_correction = true;    // add c0 times the PV tail kernel
    bool one_sided_origin = true;   // at t = 0 use c0/2 instead of the symmetric limit 0
};

// (1/pi) sign(t) (pi/2 - Si(Z |t|)), 0 at t = 0
double pv_window_kernel(double Z, double t);
// pv_window_kernel with Z = Rband^{1/6}
double pv_tail_kernel(double Rband, double t);

// D(t) = (1/2 pi) int_{-Z}^{Z} df(z) e^{-izt} dz plus the PV tail, t in [0, 2]; D = 0 for t >= 2.
BoundaryKernelDiff fourier_invert_diff(const RealLineFn& df, double Z, const std::vector<double>& t_grid,
                                       const InversionOptions& opt = {});

struct BandSplit {
    BoundaryKernelDiff I_part;                  // |z| <= Rband^{1/6} part, no tail correction
    std::function<double(double)> tail_envelope;  // t -> min(1, 1/(t Rband^nu))
    double nu = 0.0;
};

BandSplit band_split_diff(const RealLineFn& df, double Rband, const std::vector<double>& t_grid, double p = 2.0);

struct ReconstructionOptions {
    bool extended_calibration = true;  // false: two-point normalization with window R^{1/3}
    CalibrationOptions calibration;
    AxisTarget target;                 // empty: unit target
    InversionOptions inversion;
    double kernel_tol = 1e-12;
    bool refine = false;
    int max_refinements = 5;
    double refine_tol = 1e-4;
    double q_budget = 0.0;             // 0: max(||q_ref||_1, ||q_true||_1)
    std::optional<Potential> q_true;
};

struct ReconstructionDiagnostics {
    double R = 0.0, eps = 0.0, p = 2.0, h = 0.0;
    double Z = 0.0, nu = 0.0, gamma = 0.0;
    cplx c0 = 0.0;
    double sup_estimate = 0.0;
    double truth_error = -1.0;        // sup |est - truth| on the grid, -1 without truth
    double bound_shape = 0.0;         // stability plus perturbation envelope
    double correction_envelope = 0.0; // C1 (1 + 8 Q e^{2Q}), C1 = sup |B(0, .)|
    double q_budget = 0.0;
    int refinements = 0;
    bool diverged = false;
    std::vector<double> refinement_steps;
    std::vector<std::string> warnings;
};

struct ReconstructionResult {
    std::vector<double> x_grid;
    std::vector<cplx> estimate_values;
    std::vector<cplx> truth_values;   // empty without truth
    ReconstructionDiagnostics diagnostics;

    // Linear interpolation on x_grid, x in [0, 1].
    cplx estimate(double x) const;
};

// Integrated difference int_x^1 (q - q_ref) from the perturbed zeros of the Jost function of q.
ReconstructionResult reconstruct_from_zeros(const ZeroSet& zs_tilde, const Potential& q_ref, double p, double h,
                                            const ReconstructionOptions& opt = {});

std::string format_reconstruction_csv(const ReconstructionResult& r);
void save_reconstruction_csv(const ReconstructionResult& r, const std::string& path);

} // namespace resolab
