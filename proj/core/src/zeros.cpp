#include "resolab/zeros.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

namespace resolab {

ZeroKind classify_zero(cplx z)
{
    if (z.imag() > 0.0) return ZeroKind::eigenvalue;
    if (z.imag() < 0.0) return ZeroKind::resonance;
    return ZeroKind::real_axis;
}

const char* to_string(ZeroKind k)
{
    switch (k) {
    case ZeroKind::eigenvalue: return "eigenvalue";
    case ZeroKind::resonance: return "resonance";
    case ZeroKind::real_axis: return "real-axis";
    }
    return "?";
}

int ZeroSet::total_multiplicity() const
{
    int n = 0;
    for (const auto& z : zeros) n += z.multiplicity;
    return n;
}

std::vector<cplx> ZeroSet::expanded() const
{
    std::vector<cplx> out;
    for (const auto& z : zeros)
        for (int k = 0; k < z.multiplicity; ++k) out.push_back(z.z);
    return out;
}

namespace {

constexpr double quarter_pi = pi / 4.0;

class PhaseTracker {
public:
    explicit PhaseTracker(const JostModel& f) : f_(f) {}

    // Total continuous change of arg f along path(s), s in [0, 1].
    double track(const std::function<cplx(double)>& path, double length)
    {
        length_ = std::max(length, 1e-300);
        const int n = 8 + static_cast<int>(std::ceil(3.0 * length));
        double total = 0.0;
        double s0 = 0.0;
        cplx f0 = eval(path(0.0));
        for (int k = 1; k <= n; ++k) {
            const double s1 = static_cast<double>(k) / n;
            const cplx f1 = eval(path(s1));
            total += refine(path, s0, s1, f0, f1);
            s0 = s1;
            f0 = f1;
        }
        return total;
    }

    double max_abs() const { return max_abs_; }
    long evaluations() const { return evals_; }

private:
    cplx eval(cplx z)
    {
        ++evals_;
        const cplx v = f_.value(z);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            std::ostringstream msg;
            msg << "contour: non-finite function value at z=" << z;
            throw NumericalError(msg.str());
        }
        const double a = std::abs(v);
        if (a == 0.0) {
            std::ostringstream msg;
            msg << "contour passes through a zero at z=" << z;
            throw ContourError(msg.str());
        }
        max_abs_ = std::max(max_abs_, a);
        return v;
    }

    double refine(const std::function<cplx(double)>& path, double s0, double s1, cplx f0, cplx f1)
    {
        const double sm = 0.5 * (s0 + s1);
        const cplx zm = path(sm);
        const cplx fm = eval(zm);
        if (std::abs(fm) < 1e-8 * std::max(std::abs(f0), std::abs(f1))) {
            std::ostringstream msg;
            msg << "contour too close to a zero near z=" << zm;
            throw ContourError(msg.str());
        }
        const double d1 = std::arg(fm / f0);
        const double d2 = std::arg(f1 / fm);
        if (std::abs(d1) < quarter_pi && std::abs(d2) < quarter_pi) return d1 + d2;
        if ((s1 - s0) * length_ < 1e-10 * std::max(1.0, length_)) {
            std::ostringstream msg;
            msg << "contour too close to a zero near z=" << zm << " (phase step unresolved)";
            throw ContourError(msg.str());
        }
        return refine(path, s0, sm, f0, fm) + refine(path, sm, s1, fm, f1);
    }

    const JostModel& f_;
    double length_ = 1.0;
    double max_abs_ = 0.0;
    long evals_ = 0;
};

int winding_from_phase(double total)
{
    const double w = total / (2.0 * pi);
    const double k = std::round(w);
    if (std::abs(w - k) > 0.1) {
        std::ostringstream msg;
        msg << "non-integer winding number " << w;
        throw NumericalError(msg.str());
    }
    if (k < 0) {
        std::ostringstream msg;
        msg << "negative winding number " << k << " for an entire function";
        throw NumericalError(msg.str());
    }
    return static_cast<int>(k);
}

ContourCount circle_count(const JostModel& f, cplx center, double r)
{
    PhaseTracker tr(f);
    auto path = [&](double s) { return center + std::polar(r, 2.0 * pi * s); };
    const double total = tr.track(path, 2.0 * pi * r);
    return ContourCount{winding_from_phase(total), r, tr.max_abs(), tr.evaluations()};
}

} // namespace

ContourCount count_zeros_detailed(const JostModel& f, cplx center, double r)
{
    if (!(r > 0.0) || !std::isfinite(r)) throw PreconditionError("count_zeros: radius must be positive");
    std::string last;
    for (int attempt = 0; attempt <= 3; ++attempt) {
        const double rr = r + attempt * 1e-6 * r;
        try {
            return circle_count(f, center, rr);
        } catch (const ContourError& e) {
            last = e.what();
        }
    }
    throw ContourError("count_zeros: contour too close to a zero after 3 nudges: " + last);
}

int count_zeros(const JostModel& f, cplx center, double r)
{
    return count_zeros_detailed(f, center, r).count;
}

ContourCount count_zeros_box(const JostModel& f, double x0, double x1, double y0, double y1)
{
    if (!(x0 < x1 && y0 < y1)) throw PreconditionError("count_zeros_box: empty box");
    PhaseTracker tr(f);
    const std::array<cplx, 5> c{cplx(x0, y0), cplx(x1, y0), cplx(x1, y1), cplx(x0, y1), cplx(x0, y0)};
    double total = 0.0;
    for (int e = 0; e < 4; ++e) {
        const cplx a = c[e], b = c[e + 1];
        total += tr.track([&](double s) { return a + (b - a) * s; }, std::abs(b - a));
    }
    return ContourCount{winding_from_phase(total), 0.0, tr.max_abs(), tr.evaluations()};
}

NewtonResult newton_polish(const JostModel& f, cplx z0, double abs_tol, int max_iter)
{
    NewtonResult res;
    cplx z = z0;
    for (int it = 0; it < max_iter; ++it) {
        const auto [v, d] = f.value_and_derivative(z);
        const double r = std::abs(v);
        res.residuals.push_back(r);
        res.z = z;
        if (r == 0.0 || !std::isfinite(r) || d == cplx(0.0) || !std::isfinite(std::abs(d))) break;
        // roundoff floor reached: residual stopped decreasing
        if (res.residuals.size() >= 3 && r < abs_tol && r >= res.residuals[res.residuals.size() - 2]) break;
        const cplx dz = v / d;
        z -= dz;
        if (std::abs(dz) <= 4e-16 * std::max(1.0, std::abs(z))) {
            res.residuals.push_back(std::abs(f.value(z)));
            res.z = z;
            break;
        }
    }
    res.converged = !res.residuals.empty() && res.residuals.back() < abs_tol;
    return res;
}

namespace {

struct Box {
    double x0, x1, y0, y1;
    double diameter() const { return std::hypot(x1 - x0, y1 - y0); }
    bool contains(cplx z) const { return z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1; }
};

class ZeroSearch {
public:
    ZeroSearch(const JostModel& f, double tol) : f_(f), tol_(tol) {}

    void run(const Box& b, int count, double scale, int depth)
    {
        if (count == 0) return;
        if (depth > max_depth) throw NumericalError("find_zeros: subdivision depth exceeded");
        if (count == 1) {
            const cplx z0(0.5 * (b.x0 + b.x1), 0.5 * (b.y0 + b.y1));
            const double abs_tol = tol_ * (1.0 + scale);
            const auto nr = newton_polish(f_, z0, abs_tol);
            if (nr.converged && b.contains(nr.z)) {
                found_.push_back(Zero{nr.z, 1, classify_zero(nr.z)});
                residual_ = std::max(residual_, nr.residuals.back());
                return;
            }
        }
        if (count > 1 && b.diameter() < 1e-6) {
            const cplx zc(0.5 * (b.x0 + b.x1), 0.5 * (b.y0 + b.y1));
            found_.push_back(Zero{zc, count, classify_zero(zc)});
            residual_ = std::max(residual_, std::abs(f_.value(zc)));
            return;
        }
        static constexpr std::array<double, 6> fx{0.5123, 0.4829, 0.5391, 0.4617, 0.5713, 0.4271};
        static constexpr std::array<double, 6> fy{0.4907, 0.5161, 0.4633, 0.5447, 0.4379, 0.5589};
        std::string last;
        for (size_t a = 0; a < fx.size(); ++a) {
            const double xm = b.x0 + fx[a] * (b.x1 - b.x0);
            const double ym = b.y0 + fy[a] * (b.y1 - b.y0);
            const std::array<Box, 4> kids{Box{b.x0, xm, b.y0, ym}, Box{xm, b.x1, b.y0, ym},
                                          Box{b.x0, xm, ym, b.y1}, Box{xm, b.x1, ym, b.y1}};
            std::array<ContourCount, 4> cc;
            try {
                for (int k = 0; k < 4; ++k) cc[k] = count_zeros_box(f_, kids[k].x0, kids[k].x1, kids[k].y0, kids[k].y1);
            } catch (const ContourError& e) {
                last = e.what();
                continue;
            }
            int sum = 0;
            for (const auto& c : cc) sum += c.count;
            if (sum != count) {
                last = "children count mismatch";
                continue;
            }
            for (int k = 0; k < 4; ++k) run(kids[k], cc[k].count, cc[k].max_abs, depth + 1);
            return;
        }
        throw NumericalError("find_zeros: could not subdivide box: " + last);
    }

    std::vector<Zero> found_;
    double residual_ = 0.0;

private:
    static constexpr int max_depth = 80;
    const JostModel& f_;
    double tol_;
};

std::string fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& s, const char* what)
{
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw PreconditionError(std::string("zeroset: bad ") + what + " '" + s + "'");
    return v;
}

} // namespace

ZeroSet find_zeros(const JostModel& f, double R, double tol, cplx center)
{
    if (!(R >= 1.0)) throw PreconditionError("find_zeros: R must be >= 1");
    if (!(tol >= 1e-12)) throw PreconditionError("find_zeros: tol must be >= 1e-12");
    const ContourCount disc = count_zeros_detailed(f, center, R);
    ZeroSet out;
    out.R = disc.radius;
    out.center = center;
    if (disc.count == 0) return out;

    ZeroSearch search(f, tol);
    std::string last;
    bool done = false;
    for (int attempt = 0; attempt < 4 && !done; ++attempt) {
        const double W = disc.radius * (1.0001 + 1e-3 * attempt);
        const Box top{center.real() - W * 1.00013, center.real() + W * 1.00007,
                      center.imag() - W * 1.00011, center.imag() + W * 1.00017};
        try {
            const auto cc = count_zeros_box(f, top.x0, top.x1, top.y0, top.y1);
            search.run(top, cc.count, cc.max_abs, 0);
            done = true;
        } catch (const ContourError& e) {
            last = e.what();
            search.found_.clear();
            search.residual_ = 0.0;
        }
    }
    if (!done) throw NumericalError("find_zeros: bounding square unusable: " + last);

    for (const auto& z : search.found_)
        if (std::abs(z.z - center) < disc.radius) out.zeros.push_back(z);
    std::sort(out.zeros.begin(), out.zeros.end(), [](const Zero& a, const Zero& b) {
        if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
        return a.z.imag() < b.z.imag();
    });
    out.residual = 0.0;
    for (const auto& z : out.zeros) out.residual = std::max(out.residual, std::abs(f.value(z.z)));
    if (out.total_multiplicity() != disc.count) {
        std::ostringstream msg;
        msg << "find_zeros: located multiplicity " << out.total_multiplicity()
            << " differs from the disc count " << disc.count << " (R=" << disc.radius << ")";
        throw NumericalError(msg.str());
    }
    return out;
}

std::vector<int> counting_function(const ZeroSet& zs, cplx center, std::span<const double> radii)
{
    for (size_t k = 1; k < radii.size(); ++k)
        if (radii[k] < radii[k - 1]) throw PreconditionError("counting_function: radii must be ascending");
    std::vector<int> out;
    out.reserve(radii.size());
    for (double r : radii) {
        int n = 0;
        for (const auto& z : zs.zeros)
            if (std::abs(z.z - center) < r) n += z.multiplicity;
        out.push_back(n);
    }
    return out;
}

ZeroSet perturb_zeros(const ZeroSet& zs, double eps, std::uint64_t seed)
{
    if (!(eps >= 0.0)) throw PreconditionError("perturb_zeros: eps must be >= 0");
    ZeroSet out = zs;
    out.eps = eps;
    if (eps == 0.0) return out;
    constexpr double delta = 1e-3;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (auto& z : out.zeros) {
        const double r = eps * std::sqrt(U(rng));
        const double th = 2.0 * pi * U(rng);
        cplx w = z.z + std::polar(r, th);
        if (z.z.imag() > 0.0) {
            if (w.imag() < delta) w.imag(2.0 * delta - w.imag());
        } else {
            if (w.imag() > -delta) w.imag(-2.0 * delta - w.imag());
        }
        z.z = w;
        z.kind = classify_zero(w);
    }
    return out;
}

std::vector<size_t> pair_zeros(const ZeroSet& a, const ZeroSet& b)
{
    const size_t n = a.zeros.size();
    if (b.zeros.size() != n) throw PreconditionError("pair_zeros: sets differ in size");
    if (n == 0) return {};
    const double inf = std::numeric_limits<double>::infinity();
    auto cost = [&](size_t i, size_t j) { return std::abs(a.zeros[i - 1].z - b.zeros[j - 1].z); };
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<size_t> p(n + 1, 0), way(n + 1, 0);
    for (size_t i = 1; i <= n; ++i) {
        p[0] = i;
        size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const size_t i0 = p[j0];
            double delta = inf;
            size_t j1 = 0;
            for (size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0, j) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<size_t> out(n);
    for (size_t j = 1; j <= n; ++j) out[p[j] - 1] = j - 1;
    return out;
}

ZeroSet reorder_paired(const ZeroSet& a, const ZeroSet& b)
{
    const auto perm = pair_zeros(a, b);
    ZeroSet out = b;
    for (size_t i = 0; i < perm.size(); ++i) out.zeros[i] = b.zeros[perm[i]];
    return out;
}

std::string format_zeroset(const ZeroSet& zs)
{
    std::string out = "# zeroset R=" + fmt17(zs.R) + " center=" + fmt17(zs.center.real()) + "," +
                      fmt17(zs.center.imag()) + "\n";
    for (const auto& z : zs.zeros)
        out += fmt17(z.z.real()) + " " + fmt17(z.z.imag()) + " " + std::to_string(z.multiplicity) + "\n";
    return out;
}

ZeroSet parse_zeroset(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    ZeroSet zs;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (!header) {
            std::istringstream hs(line);
            std::string hash, tag, rpart, cpart;
            hs >> hash >> tag >> rpart >> cpart;
            if (hash != "#" || tag != "zeroset" || rpart.rfind("R=", 0) != 0 || cpart.rfind("center=", 0) != 0)
                throw PreconditionError("zeroset: missing '# zeroset R=<R> center=<re>,<im>' header");
            zs.R = parse_double(rpart.substr(2), "R");
            const auto c = cpart.substr(7);
            const auto comma = c.find(',');
            if (comma == std::string::npos) throw PreconditionError("zeroset: bad center");
            zs.center = cplx(parse_double(c.substr(0, comma), "center"), parse_double(c.substr(comma + 1), "center"));
            header = true;
            continue;
        }
        if (line[0] == '#') continue;
        std::istringstream ls(line);
        std::string re, im, mult;
        if (!(ls >> re >> im >> mult)) throw PreconditionError("zeroset: malformed line '" + line + "'");
        const cplx z(parse_double(re, "real part"), parse_double(im, "imaginary part"));
        const int m = static_cast<int>(parse_double(mult, "multiplicity"));
        if (m < 1) throw PreconditionError("zeroset: multiplicity must be positive");
        zs.zeros.push_back(Zero{z, m, classify_zero(z)});
    }
    if (!header) throw PreconditionError("zeroset: empty input");
    return zs;
}

void save_zeroset(const ZeroSet& zs, const std::string& path)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw PreconditionError("cannot write zeroset file '" + path + "'");
    f << format_zeroset(zs);
}

ZeroSet load_zeroset(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw PreconditionError("cannot open zeroset file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_zeroset(ss.str());
}

} // namespace resolab
