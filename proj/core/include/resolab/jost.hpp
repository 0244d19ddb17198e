#pragma once

#include "resolab/potential.hpp"
#include "resolab/types.hpp"

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace resolab {

struct JostEvaluation {
    cplx z;
    cplx value;     // psi(z, x)
    cplx dx_value;  // d/dx psi(z, x)
    cplx dz_value;  // d/dz psi(z, x)
};

// Anything that can be evaluated like a Jost function psi(z).
class JostModel {
public:
    virtual ~JostModel() = default;
    virtual cplx value(cplx z) const = 0;
    // (psi(z), d/dz psi(z))
    virtual std::pair<cplx, cplx> value_and_derivative(cplx z) const = 0;
};

JostEvaluation jost_eval(const Potential& q, cplx z, double x);
cplx jost_function(const Potential& q, cplx z);
std::vector<cplx> batch_jost(const Potential& q, std::span<const cplx> zs);

// Closed form for q = c on [0, a]: e^{iza}(cos(ka) - (iz/k) sin(ka)), k^2 = z^2 - c.
cplx step_jost_closed_form(cplx c, double a, cplx z);

class ForwardJost final : public JostModel {
public:
    explicit ForwardJost(Potential q) : q_(std::move(q)) {}
    cplx value(cplx z) const override;
    std::pair<cplx, cplx> value_and_derivative(cplx z) const override;
    const Potential& potential() const { return q_; }

private:
    Potential q_;
};

class FunctionJost final : public JostModel {
public:
    using Fn = std::function<cplx(cplx)>;
    FunctionJost(Fn f, Fn df) : f_(std::move(f)), df_(std::move(df)) {}
    cplx value(cplx z) const override { return f_(z); }
    std::pair<cplx, cplx> value_and_derivative(cplx z) const override { return {f_(z), df_(z)}; }

private:
    Fn f_, df_;
};

} // namespace resolab
