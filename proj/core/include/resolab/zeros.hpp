#pragma once

#include "resolab/jost.hpp"
#include "resolab/types.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace resolab {

enum class ZeroKind { eigenvalue, resonance, real_axis };

ZeroKind classify_zero(cplx z);
const char* to_string(ZeroKind k);

struct Zero {
    cplx z;
    int multiplicity = 1;
    ZeroKind kind = ZeroKind::resonance;
};

struct ZeroSet {
    std::vector<Zero> zeros;
    double R = 0.0;
    double residual = 0.0;  // max |f| over listed zeros
    cplx center = 0.0;
    double eps = 0.0;       // perturbation level applied, 0 for computed sets

    int total_multiplicity() const;
    std::vector<cplx> expanded() const;  // each zero repeated by multiplicity
};

// A contour passes too close to a zero of f.
class ContourError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

struct ContourCount {
    int count = 0;
    double radius = 0.0;    // radius actually used (after nudges)
    double max_abs = 0.0;   // max |f| seen on the contour
    long evaluations = 0;
};

// Winding number of f around the circle |z - center| = r.
int count_zeros(const JostModel& f, cplx center, double r);
ContourCount count_zeros_detailed(const JostModel& f, cplx center, double r);

// Winding number around the axis-parallel box [x0, x1] x [y0, y1].
ContourCount count_zeros_box(const JostModel& f, double x0, double x1, double y0, double y1);

struct NewtonResult {
    cplx z;
    bool converged = false;
    std::vector<double> residuals;  // |f| at each iterate, starting with the initial point
};

NewtonResult newton_polish(const JostModel& f, cplx z0, double abs_tol, int max_iter = 60);

ZeroSet find_zeros(const JostModel& f, double R, double tol = 1e-10, cplx center = 0.0);

// Zeros with |z - center| < r, cumulative over ascending radii.
std::vector<int> counting_function(const ZeroSet& zs, cplx center, std::span<const double> radii);

ZeroSet perturb_zeros(const ZeroSet& zs, double eps, std::uint64_t seed);

// Minimal-weight perfect matching: result[i] is the index in b paired with a.zeros[i].
std::vector<size_t> pair_zeros(const ZeroSet& a, const ZeroSet& b);
// b reordered so that b'.zeros[i] pairs with a.zeros[i].
ZeroSet reorder_paired(const ZeroSet& a, const ZeroSet& b);

std::string format_zeroset(const ZeroSet& zs);
ZeroSet parse_zeroset(std::string_view text);
void save_zeroset(const ZeroSet& zs, const std::string& path);
ZeroSet load_zeroset(const std::string& path);

} // namespace resolab
