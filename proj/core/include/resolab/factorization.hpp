#pragma once

#include "resolab/jost.hpp"
#include "resolab/zeros.hpp"

#include <functional>
#include <vector>

namespace resolab {

// E(w) = (1 - w) e^w
cplx elementary_factor(cplx w);
// E(w) - 1 without cancellation for small w.
cplx elementary_factor_minus_1(cplx w);
// log(1 - w) + w, principal branch of log(1 - w); series for small |w|.
cplx log_elementary_factor(cplx w);

// prod_n E(z / z_n)^{m_n}; zeros at the origin are rejected.
cplx truncated_product(const ZeroSet& zs, cplx z);
// sum_n m_n log E(z / z_n) with principal logs (continuous only up to 2 pi i jumps).
cplx log_truncated_product(const ZeroSet& zs, cplx z);

// z^{n0} exp(sum_k c_k z^k) prod E(z / z_n). c_0 = a0, c_1 = a1.
class FactorizedJost final : public JostModel {
public:
    FactorizedJost() = default;
    FactorizedJost(ZeroSet zs, int n0, std::vector<cplx> exponent, double window);

    cplx value(cplx z) const override;
    std::pair<cplx, cplx> value_and_derivative(cplx z) const override;

    const ZeroSet& zeros() const { return zs_; }
    int n0() const { return n0_; }
    cplx a0() const { return exponent_.empty() ? cplx(0.0) : exponent_[0]; }
    cplx a1() const { return exponent_.size() < 2 ? cplx(0.0) : exponent_[1]; }
    const std::vector<cplx>& exponent() const { return exponent_; }
    double window() const { return window_; }

private:
    ZeroSet zs_;  // nonzero zeros only
    int n0_ = 0;
    std::vector<cplx> exponent_;
    double window_ = 0.0;
};

// target(y) is the calibration value at z = i y.
using AxisTarget = std::function<cplx(double)>;
AxisTarget unit_target();

// Continuous branch of log(target(iy) / ((iy)^{n0} prod E(iy / z_n))) at the given heights,
// unwrapped by stepping down the imaginary axis from y = max(10 max(1, R^{1/3}), max height).
std::vector<cplx> axis_log_residual(const ZeroSet& nonzero, int n0, const AxisTarget& target, double R,
                                    const std::vector<double>& heights);

// Two-point fit of g(z) = a1 z + a0 at y = 3R^{1/3} and 6R^{1/3}.
FactorizedJost normalize(const ZeroSet& zs, const AxisTarget& target, double R);

struct CalibrationOptions {
    double height_exponent = 0.5;  // heights start at R^height_exponent
    double span = 2.0;             // ... and end at span * R^height_exponent
    int heights = 16;
    int poly_degree = 4;           // exponent polynomial degree kept in the model
    int laurent_terms = 2;         // 1/z, ..., 1/z^L nuisance terms, fitted but not kept
};

// Least-squares calibration of the exponent polynomial on many axis heights.
FactorizedJost calibrate(const ZeroSet& zs, const AxisTarget& target, double R,
                         const CalibrationOptions& opt = {});

// W(z) = prod (z - z_n) / (z - w_n), sets paired index by index.
cplx ratio_W(const ZeroSet& zs, const ZeroSet& zs_tilde, cplx z);

// 72|z|^2/R exp(72|z|^2/R), valid for |z| <= R/2 and R >= 18 kappa.
double tail_bound_pi(double R, cplx z, double kappa);

} // namespace resolab
