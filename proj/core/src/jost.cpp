#include "resolab/jost.hpp"

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <sstream>

namespace resolab {

namespace {

constexpr cplx I(0.0, 1.0);

// cos(sqrt w), sin(sqrt w)/sqrt w and their w-derivatives, all multiplied by exp(-log_scale).
struct EvenTrig {
    cplx C, S, Cw, Sw;
    double log_scale = 0.0;
};

EvenTrig even_trig(cplx w)
{
    EvenTrig t;
    if (std::abs(w) < 0.25) {
        // Taylor: C = sum (-w)^n/(2n)!, S = sum (-w)^n/(2n+1)!
        cplx pw = 1.0;
        double f2n = 1.0, f2n1 = 1.0;
        t.C = 0.0;
        t.S = 0.0;
        t.Sw = 0.0;
        for (int n = 0; n < 12; ++n) {
            if (n > 0) {
                f2n = f2n1 * (2.0 * n);
                f2n1 = f2n * (2.0 * n + 1.0);
            }
            const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
            t.C += sgn * pw / f2n;
            t.S += sgn * pw / f2n1;
            if (n + 1 < 12) {
                const double fa = f2n1 * (2.0 * n + 2.0) * (2.0 * n + 3.0);
                t.Sw += -sgn * (n + 1.0) * pw / fa;
            }
            pw *= w;
        }
        t.Cw = -0.5 * t.S;
        return t;
    }
    cplx s = std::sqrt(w);
    if (s.imag() < 0.0) s = -s;
    const double b = s.imag();
    if (b < 30.0) {
        t.C = std::cos(s);
        t.S = std::sin(s) / s;
    } else {
        const double a = s.real();
        const cplx ep = std::polar(std::exp(-2.0 * b), a);  // e^{is} e^{-b}
        const cplx em = std::polar(1.0, -a);                // e^{-is} e^{-b}
        t.C = 0.5 * (ep + em);
        t.S = (ep - em) / (2.0 * I) / s;
        t.log_scale = b;
    }
    t.Cw = -0.5 * t.S;
    t.Sw = (t.C - t.S) / (2.0 * w);
    return t;
}

struct State {
    cplx u, up, uz, upz;
    double sigma = 0.0;  // true values are these times exp(sigma)

    void renormalize()
    {
        const double m = std::max({std::abs(u), std::abs(up), std::abs(uz), std::abs(upz)});
        if (m > 0.0 && std::isfinite(m)) {
            u /= m;
            up /= m;
            uz /= m;
            upz /= m;
            sigma += std::log(m);
        }
    }
};

// Backward step over [x - ell, x] with constant potential value c.
void constant_step(State& s, cplx c, cplx z, double ell)
{
    const cplx w = (z * z - c) * (ell * ell);
    const EvenTrig t = even_trig(w);
    const cplx dwdz = 2.0 * z * ell * ell;
    const cplx Cz = t.Cw * dwdz, Sz = t.Sw * dwdz;
    const cplx wl = w / ell;
    const cplx u1 = t.C * s.u - ell * t.S * s.up;
    const cplx up1 = wl * t.S * s.u + t.C * s.up;
    const cplx uz1 = Cz * s.u + t.C * s.uz - ell * Sz * s.up - ell * t.S * s.upz;
    const cplx upz1 = (2.0 * z * ell * t.S + wl * Sz) * s.u + wl * t.S * s.uz + Cz * s.up + t.C * s.upz;
    s.u = u1;
    s.up = up1;
    s.uz = uz1;
    s.upz = upz1;
    s.sigma += t.log_scale;
}

using OdeState = std::array<double, 8>;

void ode_step(State& s, const Piece& p, cplx z, double x_hi, double x_lo)
{
    namespace odeint = boost::numeric::odeint;
    s.renormalize();
    OdeState y{s.u.real(), s.u.imag(), s.up.real(), s.up.imag(),
               s.uz.real(), s.uz.imag(), s.upz.real(), s.upz.imag()};
    const cplx z2 = z * z;
    auto rhs = [&](const OdeState& v, OdeState& dv, double x) {
        const cplx u(v[0], v[1]), up(v[2], v[3]), uz(v[4], v[5]);
        const cplx qz = p.eval(x) - z2;
        const cplx a = qz * u;
        const cplx b = qz * uz - 2.0 * z * u;
        dv[0] = up.real();
        dv[1] = up.imag();
        dv[2] = a.real();
        dv[3] = a.imag();
        dv[4] = v[6];
        dv[5] = v[7];
        dv[6] = b.real();
        dv[7] = b.imag();
    };
    auto stepper = odeint::make_controlled(1e-13, 1e-11, odeint::runge_kutta_fehlberg78<OdeState>());
    const double span = x_hi - x_lo;
    double x = x_hi;
    double dt = -std::min(span, 1.0 / (1.0 + std::abs(z))) / 4.0;
    int guard = 0;
    while (x > x_lo) {
        if (x + dt < x_lo) dt = x_lo - x;
        const auto res = stepper.try_step(rhs, y, x, dt);
        if (res == odeint::fail) {
            if (std::abs(dt) < 1e-14 * std::max(1.0, span)) {
                std::ostringstream msg;
                msg << "jost: integrator step underflow at x=" << x << " for z=" << z;
                throw NumericalError(msg.str());
            }
        }
        if (++guard > 10000000) throw NumericalError("jost: integrator did not finish");
        if (x - x_lo < 1e-15) break;
    }
    s.u = cplx(y[0], y[1]);
    s.up = cplx(y[2], y[3]);
    s.uz = cplx(y[4], y[5]);
    s.upz = cplx(y[6], y[7]);
}

} // namespace

JostEvaluation jost_eval(const Potential& q, cplx z, double x)
{
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw PreconditionError("jost: non-finite z");
    if (!(x >= 0.0) || !std::isfinite(x)) throw PreconditionError("jost: x must be finite and >= 0");
    JostEvaluation out{z, 0.0, 0.0, 0.0};
    const auto& pieces = q.pieces();
    // exp(izx) holds exactly above the support; starting at x = 1 instead would push the
    // recessive solution backwards through the free gap and lose it to cancellation
    const double top = pieces.empty() ? x : std::max(x, std::min(1.0, pieces.back().hi));
    if (x >= top) {
        const cplx e = std::exp(I * z * x);
        out.value = e;
        out.dx_value = I * z * e;
        out.dz_value = I * x * e;
        return out;
    }
    State s;
    const cplx m = std::polar(1.0, z.real() * top);
    s.sigma = -z.imag() * top;
    s.u = m;
    s.up = I * z * m;
    s.uz = I * top * m;
    s.upz = (I - z * top) * m;

    double cur = top;
    for (auto it = pieces.rbegin(); it != pieces.rend() && cur > x; ++it) {
        if (it->hi <= x) break;
        if (it->hi < cur) {
            const double lo = std::max(it->hi, x);
            constant_step(s, 0.0, z, cur - lo);
            cur = lo;
            if (cur <= x) break;
        }
        const double lo = std::max(it->lo, x);
        if (it->is_constant())
            constant_step(s, it->coeffs[0], z, cur - lo);
        else
            ode_step(s, *it, z, cur, lo);
        cur = lo;
        s.renormalize();
    }
    if (cur > x) constant_step(s, 0.0, z, cur - x);

    const double scale = std::exp(s.sigma);
    out.value = s.u * scale;
    out.dx_value = s.up * scale;
    out.dz_value = s.uz * scale;
    return out;
}

cplx jost_function(const Potential& q, cplx z)
{
    return jost_eval(q, z, 0.0).value;
}

std::vector<cplx> batch_jost(const Potential& q, std::span<const cplx> zs)
{
    std::vector<cplx> out(zs.size());
    for (size_t k = 0; k < zs.size(); ++k) {
        try {
            out[k] = jost_function(q, zs[k]);
        } catch (const std::exception& e) {
            throw NumericalError("batch_jost: element " + std::to_string(k) + ": " + e.what());
        }
    }
    return out;
}

cplx step_jost_closed_form(cplx c, double a, cplx z)
{
    State s;
    s.u = std::exp(I * z * a);
    s.up = I * z * s.u;
    s.uz = 0.0;
    s.upz = 0.0;
    constant_step(s, c, z, a);
    return s.u * std::exp(s.sigma);
}

cplx ForwardJost::value(cplx z) const
{
    return jost_eval(q_, z, 0.0).value;
}

std::pair<cplx, cplx> ForwardJost::value_and_derivative(cplx z) const
{
    const auto e = jost_eval(q_, z, 0.0);
    return {e.value, e.dz_value};
}

} // namespace resolab
