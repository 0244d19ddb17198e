#include "resolab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace resolab {

const char* to_string(KernelKind k)
{
    switch (k) {
    case KernelKind::K: return "K";
    case KernelKind::L: return "L";
    case KernelKind::B: return "B";
    }
    return "?";
}

TriangularKernelGrid::TriangularKernelGrid(KernelKind kind, int M) : kind_(kind), M_(M)
{
    if (M < 1) throw PreconditionError("kernel grid: M must be positive");
    values_.assign(offset(M + 1), cplx(0.0));
}

cplx TriangularKernelGrid::operator()(int i, int j) const
{
    if (i < 0 || i > j || i + j >= 2 * M_) return 0.0;
    return values_[offset(i) + (j - i)];
}

void TriangularKernelGrid::set(int i, int j, cplx v)
{
    if (!in_triangle(i, j)) throw PreconditionError("kernel grid: node outside the triangle");
    if (i + j == 2 * M_) return;  // support boundary stays exactly zero
    values_[offset(i) + (j - i)] = v;
}

double TriangularKernelGrid::sup_norm() const
{
    double s = 0.0;
    for (auto v : values_) s = std::max(s, std::abs(v));
    return s;
}

std::vector<cplx> TriangularKernelGrid::row(int i) const
{
    std::vector<cplx> r;
    for (int j = i; j <= 2 * M_ - i; ++j) r.push_back((*this)(i, j));
    return r;
}

int mesh_size(double h)
{
    if (!(h > 0.0) || h > 1.0 / 16.0) throw PreconditionError("kernel mesh: h must satisfy 0 < h <= 1/16");
    const double m = 1.0 / h;
    const long M = std::lround(m);
    if (std::abs(m - M) > 1e-9 * m || (M & (M - 1)) != 0)
        throw PreconditionError("kernel mesh: 1/h must be a power of two");
    return static_cast<int>(M);
}

cplx k0_value(const Potential& q1, const Potential& q2, double x, double t)
{
    const double a = 0.5 * (x + t);
    if (a >= 1.0) return 0.0;
    return 0.5 * (q2.integral(a, 1.0) - q1.integral(a, 1.0));
}

namespace {

// Values on the characteristic lattice alpha = A eta, beta = B eta, 0 <= B <= A <= N, eta = 1/N.
class Lattice {
public:
    explicit Lattice(int N) : N_(N), v_(static_cast<size_t>(N + 1) * (N + 2) / 2, cplx(0.0)) {}
    cplx& at(int A, int B) { return v_[static_cast<size_t>(A) * (A + 1) / 2 + B]; }
    cplx at(int A, int B) const { return v_[static_cast<size_t>(A) * (A + 1) / 2 + B]; }
    int N() const { return N_; }
    double sup() const
    {
        double s = 0.0;
        for (auto x : v_) s = std::max(s, std::abs(x));
        return s;
    }
    void add(const Lattice& o)
    {
        for (size_t k = 0; k < v_.size(); ++k) v_[k] += o.v_[k];
    }

private:
    int N_;
    std::vector<cplx> v_;
};

// Weights of int_{b eta}^{(b+1) eta} [cm qm(alpha - beta) + cp qp(alpha + beta)] f(beta) dbeta
// for f linear between lattice values f_b, f_{b+1}; exact for polynomial pieces.
class CellWeights {
public:
    CellWeights(int N, const Potential& qm, cplx cm, const Potential& qp, cplx cp)
        : N_(N), lo_(static_cast<size_t>(N) * (N + 1) / 2), hi_(lo_.size())
    {
        const double eta = 1.0 / N;
        for (int A = 1; A <= N; ++A) {
            const double alpha = A * eta;
            for (int b = 0; b < A; ++b) {
                const double b0 = b * eta, b1 = (b + 1) * eta;
                cplx wl = 0.0, wh = 0.0;
                if (!qm.is_zero()) {
                    const auto [m0, m1] = qm.moments(alpha - b1, alpha - b0);
                    wl += cm * m1;
                    wh += cm * (m0 - m1);
                }
                if (!qp.is_zero() && alpha + b0 < 1.0) {
                    const auto [m0, m1] = qp.moments(alpha + b0, alpha + b1);
                    wl += cp * (m0 - m1);
                    wh += cp * m1;
                }
                lo_[idx(A, b)] = wl;
                hi_[idx(A, b)] = wh;
            }
        }
    }

    // Cumulative cell sums C(A, c) = sum_{b < c} cell(A, b) applied to f = prev(A, .), c = 0..A.
    void cumulative_row(const Lattice& prev, int A, std::vector<cplx>& out) const
    {
        out.assign(A + 1, cplx(0.0));
        cplx s = 0.0;
        for (int b = 0; b < A; ++b) {
            s += lo_[idx(A, b)] * prev.at(A, b) + hi_[idx(A, b)] * prev.at(A, b + 1);
            out[b + 1] = s;
        }
    }

private:
    static size_t idx(int A, int b) { return static_cast<size_t>(A) * (A - 1) / 2 + b; }
    int N_;
    std::vector<cplx> lo_, hi_;
};

// T(A, c) = trapezoid int_{alpha_A}^1 C(alpha, c) dalpha for c <= A.
Lattice integrate_from_top(const CellWeights& w, const Lattice& prev)
{
    const int N = prev.N();
    const double eta = 1.0 / N;
    Lattice T(N);
    std::vector<cplx> upper, cur;
    w.cumulative_row(prev, N, upper);
    for (int A = N - 1; A >= 0; --A) {
        w.cumulative_row(prev, A, cur);
        for (int c = 0; c <= A; ++c) T.at(A, c) = T.at(A + 1, c) + 0.5 * eta * (cur[c] + upper[c]);
        std::swap(upper, cur);
    }
    return T;
}

TriangularKernelGrid to_grid(const Lattice& lat, KernelKind kind, int M)
{
    TriangularKernelGrid g(kind, M);
    for (int i = 0; i <= M; ++i)
        for (int j = i; i + j < 2 * M; ++j) g.set(i, j, lat.at(i + j, j - i));
    return g;
}

void check_same_mesh(const TriangularKernelGrid& a, const TriangularKernelGrid& b)
{
    if (a.M() != b.M()) throw PreconditionError("kernel grids on different meshes");
}

} // namespace

TriangularKernelGrid k_kernel(const Potential& q1, const Potential& q2, double h, double tol, SeriesInfo* info)
{
    const int M = mesh_size(h);
    if (!(tol >= 1e-12)) throw PreconditionError("k_kernel: tol must be >= 1e-12");
    const int N = 2 * M;
    const double eta = 1.0 / N;

    Lattice term(N);
    for (int A = 0; A <= N; ++A) {
        const cplx k0 = 0.5 * (q2.integral(A * eta, 1.0) - q1.integral(A * eta, 1.0));
        for (int B = 0; B <= A; ++B) term.at(A, B) = k0;
    }
    Lattice total = term;
    std::vector<double> sups{term.sup()};

    if (q1 == q2) {
        total = Lattice(N);
        sups.assign(1, 0.0);
    } else if (sups.back() >= tol) {
        const CellWeights w(N, q2, 1.0, q1, -1.0);
        int n = 1;
        for (; n <= 60; ++n) {
            term = integrate_from_top(w, term);
            total.add(term);
            sups.push_back(term.sup());
            if (sups.back() < tol) break;
        }
        if (n > 60) throw NumericalError("k_kernel: series did not converge by n = 60");
    }
    if (info) info->term_sups = sups;

    TriangularKernelGrid g = to_grid(total, KernelKind::K, M);
    g.q_budget = std::max(l1_norm(q1), l1_norm(q2));
    g.meta = "K from q1 -> q2";
    return g;
}

std::function<cplx(double)> diagonal(const TriangularKernelGrid& grid)
{
    const int M = grid.M();
    std::vector<cplx> d(M + 1);
    for (int i = 0; i <= M; ++i) d[i] = grid(i, i);
    return [d, M](double x) -> cplx {
        if (!(x >= 0.0) || x >= 1.0) return 0.0;
        const double s = x * M;
        const int i = std::min(static_cast<int>(s), M - 1);
        const double f = s - i;
        return (1.0 - f) * d[i] + f * d[i + 1];
    };
}

TriangularKernelGrid l_kernel(const TriangularKernelGrid& K)
{
    if (K.kind() != KernelKind::K) throw PreconditionError("l_kernel: input must be a K grid");
    const int M = K.M();
    const double h = K.h();
    TriangularKernelGrid L(KernelKind::L, M);
    L.q_budget = K.q_budget;
    L.meta = "L inverse of " + K.meta;
    for (int i = 0; 2 * i < 2 * M; ++i) L.set(i, i, -K(i, i));
    for (int d = 1; d < 2 * M; ++d) {
        for (int i = 0; 2 * i + d < 2 * M; ++i) {
            const int j = i + d;
            cplx sum = 0.0;
            for (int s = i + 1; s < j; ++s) sum += K(i, s) * L(s, j);
            const cplx num = K(i, j) + h * sum + 0.5 * h * K(i, j) * L(j, j);
            L.set(i, j, -num / (1.0 + 0.5 * h * K(i, i)));
        }
    }
    return L;
}

TriangularKernelGrid compose_B(const TriangularKernelGrid& K_tilde, const TriangularKernelGrid& L)
{
    check_same_mesh(K_tilde, L);
    const int M = L.M();
    const double h = L.h();
    TriangularKernelGrid B(KernelKind::B, M);
    B.q_budget = std::max(K_tilde.q_budget, L.q_budget);
    B.meta = "B composed";
    for (int i = 0; i <= M; ++i) {
        for (int j = i; i + j < 2 * M; ++j) {
            cplx sum = 0.5 * (K_tilde(i, i) * L(i, j) + K_tilde(i, j) * L(j, j));
            if (j == i) sum = 0.0;
            for (int s = i + 1; s < j; ++s) sum += K_tilde(i, s) * L(s, j);
            B.set(i, j, K_tilde(i, j) + L(i, j) + h * sum);
        }
    }
    return B;
}

std::vector<cplx> boundary_B0(std::span<const cplx> D, const TriangularKernelGrid& L)
{
    const int M = L.M();
    if (static_cast<int>(D.size()) != 2 * M + 1) throw PreconditionError("boundary_B0: D must be sampled at t_j, j=0..2M");
    const double h = L.h();
    std::vector<cplx> out(D.size());
    for (int j = 0; j <= 2 * M; ++j) {
        cplx sum = 0.0;
        if (j > 0) {
            sum = 0.5 * (D[0] * L(0, j) + D[j] * L(j, j));
            for (int s = 1; s < j; ++s) sum += D[s] * L(s, j);
        }
        out[j] = D[j] + h * sum;
    }
    return out;
}

BoundaryIteration b_from_boundary_detailed(const std::function<cplx(double)>& B0, const Potential& q,
                                           const Potential& q_tilde, double h, double tol, bool keep_terms)
{
    const int M = mesh_size(h);
    const int N = 2 * M;
    const double hh = 1.0 / M;
    Lattice term(N);
    for (int A = 0; A < N; ++A) {
        const cplx b0 = B0(A * hh);
        for (int B = 0; B <= A; ++B) term.at(A, B) = b0;
    }
    Lattice total = term;
    BoundaryIteration out;
    out.term_sups.push_back(term.sup());
    if (keep_terms) out.terms.push_back(to_grid(term, KernelKind::B, M));

    if (out.term_sups.back() > 0.0) {
        const CellWeights w(N, q_tilde, -1.0, q, 1.0);
        int n = 1;
        for (; n <= 60; ++n) {
            const Lattice T = integrate_from_top(w, term);
            Lattice next(N);
            for (int A = 0; A <= N; ++A)
                for (int B = 0; B <= A; ++B) next.at(A, B) = T.at(A, A) - T.at(A, B);
            term = std::move(next);
            total.add(term);
            out.term_sups.push_back(term.sup());
            if (keep_terms) out.terms.push_back(to_grid(term, KernelKind::B, M));
            if (out.term_sups.back() < tol) break;
        }
        if (n > 60) throw NumericalError("b_from_boundary: series did not converge by n = 60");
    }
    out.grid = to_grid(total, KernelKind::B, M);
    out.grid.q_budget = std::max(l1_norm(q), l1_norm(q_tilde));
    out.grid.meta = "B from boundary data";
    return out;
}

TriangularKernelGrid b_from_boundary(const std::function<cplx(double)>& B0, const Potential& q,
                                     const Potential& q_tilde, double h, double tol)
{
    return b_from_boundary_detailed(B0, q, q_tilde, h, tol, false).grid;
}

std::vector<cplx> h_t_boundary(const TriangularKernelGrid& K, const Potential& q1, const Potential& q2)
{
    const int M = K.M();
    const double h = K.h();
    const int n = 2 * M + 1;
    std::vector<cplx> H(n), out(n);
    for (int j = 0; j < n; ++j) H[j] = K(0, j) - k0_value(q1, q2, 0.0, j * h);
    for (int j = 0; j < n; ++j) {
        if (j == 0)
            out[j] = (H[1] - H[0]) / h;
        else if (j == n - 1)
            out[j] = (H[j] - H[j - 1]) / h;
        else
            out[j] = (H[j + 1] - H[j - 1]) / (2.0 * h);
    }
    return out;
}

std::string format_kernel_grid(const TriangularKernelGrid& grid)
{
    std::string out;
    char buf[160];
    std::snprintf(buf, sizeof buf, "# kernelgrid kind=%s h=%.17g\n", to_string(grid.kind()), grid.h());
    out += buf;
    const int M = grid.M();
    for (int i = 0; i <= M; ++i) {
        for (int j = i; i + j < 2 * M; ++j) {
            const cplx v = grid(i, j);
            std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g\n", i * grid.h(), j * grid.h(), v.real(), v.imag());
            out += buf;
        }
    }
    return out;
}

void save_kernel_grid(const TriangularKernelGrid& grid, const std::string& path)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw PreconditionError("cannot write kernel grid '" + path + "'");
    f << format_kernel_grid(grid);
}

} // namespace resolab
