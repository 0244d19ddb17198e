#include "resolab/potential.hpp"

#include "resolab/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace resolab {

namespace {

// p(x) = sum c_k (x - a)^k re-expanded about b.
std::vector<cplx> shift_poly(const std::vector<cplx>& c, double a, double b)
{
    const double d = b - a;
    std::vector<cplx> out(c.size(), cplx(0.0));
    for (size_t k = 0; k < c.size(); ++k) {
        // (y + d)^k with y = x - b
        double binom = 1.0;
        for (size_t j = 0; j <= k; ++j) {
            out[j] += c[k] * binom * std::pow(d, static_cast<double>(k - j));
            binom = binom * static_cast<double>(k - j) / static_cast<double>(j + 1);
        }
    }
    return out;
}

bool all_zero(const std::vector<cplx>& c)
{
    return std::all_of(c.begin(), c.end(), [](cplx v) { return v == cplx(0.0); });
}

cplx poly_antideriv(const std::vector<cplx>& c, double u)
{
    cplx s = 0.0;
    for (size_t k = c.size(); k-- > 0;) s = s * u + c[k] / static_cast<double>(k + 1);
    return s * u;
}

std::string fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

cplx Piece::eval(double x) const
{
    const double u = x - lo;
    cplx s = 0.0;
    for (size_t k = coeffs.size(); k-- > 0;) s = s * u + coeffs[k];
    return s;
}

bool Piece::is_constant() const
{
    for (size_t k = 1; k < coeffs.size(); ++k)
        if (coeffs[k] != cplx(0.0)) return false;
    return true;
}

Potential::Potential(std::vector<Piece> pieces)
{
    for (auto& p : pieces) {
        if (!(p.lo < p.hi)) throw PreconditionError("potential piece with lo >= hi");
        if (p.lo < 0.0 || p.hi > 1.0) throw PreconditionError("potential piece outside [0,1]");
        if (p.coeffs.empty()) p.coeffs.push_back(0.0);
        if (static_cast<int>(p.coeffs.size()) > max_degree + 1)
            throw PreconditionError("potential piece degree exceeds 4");
        for (auto c : p.coeffs)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                throw PreconditionError("potential piece with non-finite coefficient");
    }
    std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
    for (size_t i = 1; i < pieces.size(); ++i)
        if (pieces[i].lo < pieces[i - 1].hi) throw PreconditionError("overlapping potential pieces");
    for (auto& p : pieces) {
        while (p.coeffs.size() > 1 && p.coeffs.back() == cplx(0.0)) p.coeffs.pop_back();
        if (!all_zero(p.coeffs)) pieces_.push_back(std::move(p));
    }
}

Potential Potential::constant(cplx c, double lo, double hi)
{
    if (c == cplx(0.0)) return Potential();
    return Potential({Piece{lo, hi, {c}}});
}

Potential Potential::from_samples(std::span<const double> xs, std::span<const cplx> values)
{
    if (xs.size() != values.size() || xs.size() < 2)
        throw PreconditionError("from_samples: need >= 2 matching samples");
    std::vector<Piece> pieces;
    for (size_t k = 0; k + 1 < xs.size(); ++k) {
        const double len = xs[k + 1] - xs[k];
        pieces.push_back(Piece{xs[k], xs[k + 1], {values[k], (values[k + 1] - values[k]) / len}});
    }
    return Potential(std::move(pieces));
}

cplx Potential::operator()(double x) const
{
    if (!(x >= 0.0 && x <= 1.0) || pieces_.empty()) return 0.0;
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                               [](double v, const Piece& p) { return v < p.lo; });
    if (it == pieces_.begin()) return 0.0;
    --it;
    if (x < it->hi || (x == it->hi && (std::next(it) == pieces_.end() || std::next(it)->lo > x)))
        return it->eval(x);
    return 0.0;
}

std::vector<double> Potential::breakpoints() const
{
    std::vector<double> b;
    for (const auto& p : pieces_) {
        if (b.empty() || b.back() != p.lo) b.push_back(p.lo);
        b.push_back(p.hi);
    }
    return b;
}

bool Potential::is_piecewise_constant() const
{
    return std::all_of(pieces_.begin(), pieces_.end(), [](const Piece& p) { return p.is_constant(); });
}

cplx Potential::integral(double a, double b) const
{
    if (b < a) return -integral(b, a);
    cplx s = 0.0;
    for (const auto& p : pieces_) {
        const double lo = std::max(a, p.lo), hi = std::min(b, p.hi);
        if (hi <= lo) continue;
        s += poly_antideriv(p.coeffs, hi - p.lo) - poly_antideriv(p.coeffs, lo - p.lo);
    }
    return s;
}

std::pair<cplx, cplx> Potential::moments(double a, double b) const
{
    cplx m0 = 0.0, m1 = 0.0;
    const double len = b - a;
    if (len <= 0.0 || pieces_.empty() || b <= pieces_.front().lo || a >= pieces_.back().hi) return {m0, m1};
    const auto& gl = gauss_legendre(4);
    auto first = std::upper_bound(pieces_.begin(), pieces_.end(), a,
                                  [](double v, const Piece& p) { return v < p.lo; });
    if (first != pieces_.begin()) --first;
    for (auto it = first; it != pieces_.end() && it->lo < b; ++it) {
        const double lo = std::max(a, it->lo), hi = std::min(b, it->hi);
        if (hi <= lo) continue;
        if (it->coeffs.size() == 1) {
            const cplx c = it->coeffs[0];
            m0 += c * (hi - lo);
            m1 += c * ((hi - a) * (hi - a) - (lo - a) * (lo - a)) / (2.0 * len);
            continue;
        }
        const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
        for (size_t k = 0; k < gl.nodes.size(); ++k) {
            const double s = mid + half * gl.nodes[k];
            const cplx v = it->eval(s) * (gl.weights[k] * half);
            m0 += v;
            m1 += v * ((s - a) / len);
        }
    }
    return {m0, m1};
}

bool Potential::operator==(const Potential& other) const
{
    if (pieces_.size() != other.pieces_.size()) return false;
    for (size_t i = 0; i < pieces_.size(); ++i) {
        const auto& a = pieces_[i];
        const auto& b = other.pieces_[i];
        if (a.lo != b.lo || a.hi != b.hi || a.coeffs != b.coeffs) return false;
    }
    return true;
}

PotentialParseError::PotentialParseError(Kind kind, int line, const std::string& what)
    : PreconditionError("potential line " + std::to_string(line) + ": " + what), kind_(kind), line_(line)
{
}

Potential parse_potential(std::string_view text)
{
    using K = PotentialParseError::Kind;
    std::vector<Piece> pieces;
    std::vector<int> lines;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        auto num = [&](const std::string& s) {
            char* end = nullptr;
            double v = std::strtod(s.c_str(), &end);
            if (end == s.c_str() || *end != '\0' || !std::isfinite(v))
                throw PotentialParseError(K::malformed, lineno, "bad number '" + s + "'");
            return v;
        };
        if (tok[0] != "piece" || tok.size() < 4)
            throw PotentialParseError(K::malformed, lineno, "expected 'piece <lo> <hi> const|poly ...'");
        Piece p;
        p.lo = num(tok[1]);
        p.hi = num(tok[2]);
        const size_t nvals = tok.size() - 4;
        if (tok[3] == "const") {
            if (nvals != 2) throw PotentialParseError(K::malformed, lineno, "const needs <re> <im>");
        } else if (tok[3] == "poly") {
            if (nvals < 2 || nvals % 2 != 0 || nvals > 2 * (Potential::max_degree + 1))
                throw PotentialParseError(K::malformed, lineno, "poly needs 1..5 (re, im) pairs");
        } else {
            throw PotentialParseError(K::malformed, lineno, "unknown piece kind '" + tok[3] + "'");
        }
        for (size_t k = 0; k < nvals; k += 2) p.coeffs.emplace_back(num(tok[4 + k]), num(tok[5 + k]));
        if (!(p.lo < p.hi)) throw PotentialParseError(K::empty_interval, lineno, "x_lo >= x_hi");
        if (p.lo < 0.0 || p.hi > 1.0) throw PotentialParseError(K::support, lineno, "piece outside [0,1]");
        pieces.push_back(std::move(p));
        lines.push_back(lineno);
    }
    std::vector<size_t> order(pieces.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return pieces[a].lo < pieces[b].lo; });
    for (size_t k = 1; k < order.size(); ++k)
        if (pieces[order[k]].lo < pieces[order[k - 1]].hi)
            throw PotentialParseError(K::overlap, lines[order[k]], "overlapping pieces");
    return Potential(std::move(pieces));
}

Potential load_potential(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw PreconditionError("cannot open potential file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_potential(ss.str());
}

std::string format_potential(const Potential& q)
{
    std::string out;
    for (const auto& p : q.pieces()) {
        out += "piece " + fmt17(p.lo) + " " + fmt17(p.hi);
        out += p.coeffs.size() == 1 ? " const" : " poly";
        for (auto c : p.coeffs) out += " " + fmt17(c.real()) + " " + fmt17(c.imag());
        out += "\n";
    }
    return out;
}

namespace {

// Sign changes of Re p and Im p on a sample grid, refined by bisection. |p| can only kink or dip
// sharply at such points, so they are used as extra quadrature breakpoints.
std::vector<double> component_roots(const Piece& p)
{
    constexpr int samples = 64;
    std::vector<double> out;
    for (int part = 0; part < 2; ++part) {
        auto g = [&](double x) { const cplx v = p.eval(x); return part == 0 ? v.real() : v.imag(); };
        double a = p.lo, ga = g(a);
        for (int k = 1; k <= samples; ++k) {
            const double b = p.lo + (p.hi - p.lo) * k / samples;
            const double gb = g(b);
            if ((ga < 0.0) != (gb < 0.0)) {
                double lo = a, hi = b, glo = ga;
                for (int it = 0; it < 60 && hi - lo > 1e-15; ++it) {
                    const double m = 0.5 * (lo + hi), gm = g(m);
                    if ((gm < 0.0) == (glo < 0.0)) { lo = m; glo = gm; } else hi = m;
                }
                out.push_back(0.5 * (lo + hi));
            }
            a = b;
            ga = gb;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

double abs_power_integral(const Piece& p, double power)
{
    const double len = p.hi - p.lo;
    if (p.is_constant()) return std::pow(std::abs(p.coeffs[0]), power) * len;
    auto f = [&](double x) { return std::pow(std::abs(p.eval(x)), power); };
    std::vector<double> cuts{p.lo};
    for (double r : component_roots(p))
        if (r > cuts.back() && r < p.hi) cuts.push_back(r);
    cuts.push_back(p.hi);
    double s = 0.0;
    for (size_t k = 0; k + 1 < cuts.size(); ++k) {
        double err = 0.0;
        s += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, cuts[k], cuts[k + 1], 12, 1e-13, &err);
    }
    return s;
}

Potential combine(const Potential& a, const Potential& b, cplx sb)
{
    std::vector<double> cuts;
    for (double x : a.breakpoints()) cuts.push_back(x);
    for (double x : b.breakpoints()) cuts.push_back(x);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    auto local = [](const Potential& q, double lo, double hi) -> std::vector<cplx> {
        const double mid = 0.5 * (lo + hi);
        for (const auto& p : q.pieces())
            if (p.lo <= mid && mid < p.hi) return shift_poly(p.coeffs, p.lo, lo);
        return {};
    };
    std::vector<Piece> out;
    for (size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double lo = cuts[k], hi = cuts[k + 1];
        auto ca = local(a, lo, hi);
        auto cb = local(b, lo, hi);
        if (ca.empty() && cb.empty()) continue;
        std::vector<cplx> c(std::max(ca.size(), cb.size()), cplx(0.0));
        for (size_t i = 0; i < ca.size(); ++i) c[i] += ca[i];
        for (size_t i = 0; i < cb.size(); ++i) c[i] += sb * cb[i];
        out.push_back(Piece{lo, hi, std::move(c)});
    }
    return Potential(std::move(out));
}

} // namespace

double l1_norm(const Potential& q)
{
    double s = 0.0;
    for (const auto& p : q.pieces()) s += abs_power_integral(p, 1.0);
    return s;
}

double lp_norm(const Potential& q, double p)
{
    if (!(p > 1.0 && p <= 2.0)) throw PreconditionError("lp_norm: p must lie in (1, 2]");
    double s = 0.0;
    for (const auto& piece : q.pieces()) s += abs_power_integral(piece, p);
    return std::pow(s, 1.0 / p);
}

cplx tail_integral(const Potential& q, double x)
{
    return q.integral(x, 1.0);
}

Potential add(const Potential& a, const Potential& b)
{
    return combine(a, b, 1.0);
}

Potential subtract(const Potential& a, const Potential& b)
{
    return combine(a, b, -1.0);
}

Potential scale(const Potential& q, cplx c)
{
    std::vector<Piece> out = q.pieces();
    for (auto& p : out)
        for (auto& v : p.coeffs) v *= c;
    return Potential(std::move(out));
}

} // namespace resolab
