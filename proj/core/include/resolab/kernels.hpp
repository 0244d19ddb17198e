#pragma once

#include "resolab/potential.hpp"
#include "resolab/types.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace resolab {

enum class KernelKind { K, L, B };
const char* to_string(KernelKind k);

// Kernel sampled at x = i h, t = j h with 0 <= i <= j and i + j <= 2M (h = 1/M).
class TriangularKernelGrid {
public:
    TriangularKernelGrid() = default;
    TriangularKernelGrid(KernelKind kind, int M);

    KernelKind kind() const { return kind_; }
    int M() const { return M_; }
    double h() const { return 1.0 / M_; }

    bool in_triangle(int i, int j) const { return i >= 0 && i <= j && i + j <= 2 * M_; }
    // 0 outside the triangle and on x + t = 2.
    cplx operator()(int i, int j) const;
    void set(int i, int j, cplx v);

    double sup_norm() const;
    std::vector<cplx> row(int i) const;  // j = i .. 2M - i

    std::string meta;        // provenance of the grid, free text
    double q_budget = 0.0;   // L1 budget of the potentials that produced it

private:
    size_t offset(int i) const
    {
        const long long ii = i;
        return static_cast<size_t>(ii * (2 * M_ + 1) - ii * (ii - 1));
    }

    KernelKind kind_ = KernelKind::K;
    int M_ = 0;
    std::vector<cplx> values_;
};

// M = 1/h, checked to be a power of two with h <= 1/16.
int mesh_size(double h);

// K_0(x, t) = 1/2 int_{(x+t)/2}^1 (q2 - q1)
cplx k0_value(const Potential& q1, const Potential& q2, double x, double t);

struct SeriesInfo {
    std::vector<double> term_sups;  // sup |K_n| or sup |B_n|, n = 0, 1, ...
};

// Transformation kernel between q1 and q2 by the characteristic series.
TriangularKernelGrid k_kernel(const Potential& q1, const Potential& q2, double h, double tol = 1e-12,
                              SeriesInfo* info = nullptr);

// x -> K(x, x) with linear interpolation between nodes.
std::function<cplx(double)> diagonal(const TriangularKernelGrid& grid);

// Solves 0 = K + L + int_x^t K(x,s) L(s,t) ds by marching in t - x.
TriangularKernelGrid l_kernel(const TriangularKernelGrid& K);

// B = K~ + L + int_x^t K~(x,s) L(s,t) ds.
TriangularKernelGrid compose_B(const TriangularKernelGrid& K_tilde, const TriangularKernelGrid& L);

// B(0, t_j) = D_j + int_0^{t_j} D(s) L(s, t_j) ds on the grid's t-nodes, D given at t_j = j h, j = 0..2M.
std::vector<cplx> boundary_B0(std::span<const cplx> D, const TriangularKernelGrid& L);

struct BoundaryIteration {
    TriangularKernelGrid grid;
    std::vector<double> term_sups;
    std::vector<TriangularKernelGrid> terms;  // B_0, B_1, ... when requested
};

// Characteristic-boundary solution of the B equation from B(0, .); B0 is sampled on t = j h, j < 2M.
BoundaryIteration b_from_boundary_detailed(const std::function<cplx(double)>& B0, const Potential& q,
                                           const Potential& q_tilde, double h, double tol, bool keep_terms);
TriangularKernelGrid b_from_boundary(const std::function<cplx(double)>& B0, const Potential& q,
                                     const Potential& q_tilde, double h, double tol = 1e-12);

// H_t(0, t_j) for H = K - K_0, centered differences (one-sided at the ends).
std::vector<cplx> h_t_boundary(const TriangularKernelGrid& K, const Potential& q1, const Potential& q2);

std::string format_kernel_grid(const TriangularKernelGrid& grid);
void save_kernel_grid(const TriangularKernelGrid& grid, const std::string& path);

} // namespace resolab
