#pragma once

#include "resolab/types.hpp"

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace resolab {

// One polynomial piece on [lo, hi]; coeffs[k] multiplies (x - lo)^k.
struct Piece {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<cplx> coeffs;

    cplx eval(double x) const;
    bool is_constant() const;
};

// Piecewise polynomial potential supported in [0, 1]; zero on gaps and outside.
class Potential {
public:
    static constexpr int max_degree = 4;

    Potential() = default;
    explicit Potential(std::vector<Piece> pieces);

    static Potential constant(cplx c, double lo = 0.0, double hi = 1.0);
    // Piecewise-linear interpolant of samples at increasing nodes inside [0, 1].
    static Potential from_samples(std::span<const double> xs, std::span<const cplx> values);

    cplx operator()(double x) const;
    const std::vector<Piece>& pieces() const { return pieces_; }
    std::vector<double> breakpoints() const;
    bool is_zero() const { return pieces_.empty(); }
    bool is_piecewise_constant() const;

    // Exact integral over [a, b] (clipped to the support).
    cplx integral(double a, double b) const;
    // (int_a^b q, int_a^b q(s) (s - a) / (b - a) ds), both exact.
    std::pair<cplx, cplx> moments(double a, double b) const;

    bool operator==(const Potential& other) const;

private:
    std::vector<Piece> pieces_;
};

// Grammar: `piece <lo> <hi> const <re> <im>` or `piece <lo> <hi> poly <c0re> <c0im> ...`.
class PotentialParseError : public PreconditionError {
public:
    enum class Kind { malformed, overlap, support, empty_interval };
    PotentialParseError(Kind kind, int line, const std::string& what);
    Kind kind() const { return kind_; }
    int line() const { return line_; }

private:
    Kind kind_;
    int line_;
};

Potential parse_potential(std::string_view text);
Potential load_potential(const std::string& path);
std::string format_potential(const Potential& q);

double l1_norm(const Potential& q);
double lp_norm(const Potential& q, double p);
cplx tail_integral(const Potential& q, double x);

Potential add(const Potential& a, const Potential& b);
Potential subtract(const Potential& a, const Potential& b);
Potential scale(const Potential& q, cplx c);

} // namespace resolab
