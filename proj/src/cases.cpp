#include "elastica/cases.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace elastica {

namespace {

constexpr double pi = std::numbers::pi;

struct Displacement
{
    std::function<Vec3(const Vec3&)> value;
    std::function<Mat3(const Vec3&)> grad;                      // G_ij = d_j u_i
    std::function<std::array<Mat3, 3>(const Vec3&)> hessian;    // H[i](j, k) = d_j d_k u_i
};

struct Lame
{
    std::function<double(const Vec3&)> lambda;
    std::function<Vec3(const Vec3&)> grad_lambda;
    std::function<double(const Vec3&)> mu;
    std::function<Vec3(const Vec3&)> grad_mu;
};

Lame constant_lame(double lambda, double mu)
{
    return {[lambda](const Vec3&) { return lambda; }, [](const Vec3&) { return Vec3::Zero().eval(); },
            [mu](const Vec3&) { return mu; }, [](const Vec3&) { return Vec3::Zero().eval(); }};
}

void fill(ManufacturedCase& mc, const Displacement& d, const Lame& m)
{
    mc.u = d.value;
    mc.grad_u = d.grad;
    mc.sigma = [d, m](const Vec3& x) -> Mat3 {
        const Mat3 g = d.grad(x);
        return 2.0 * m.mu(x) * sym(g) + m.lambda(x) * g.trace() * Mat3::Identity();
    };
    mc.p = [d](const Vec3& x) -> Mat3 { return skw(d.grad(x)); };
    mc.g = [d, m](const Vec3& x) -> Vec3 {
        const Mat3 g = d.grad(x);
        const auto h = d.hessian(x);
        const Mat3 e = sym(g);
        const double mu = m.mu(x);
        const double lambda = m.lambda(x);
        const Vec3 dmu = m.grad_mu(x);
        const Vec3 dlambda = m.grad_lambda(x);
        Vec3 out = Vec3::Zero();
        for (int i = 0; i < 3; ++i) {
            double s = dlambda(i) * g.trace();
            for (int j = 0; j < 3; ++j)
                s += 2.0 * dmu(j) * e(i, j) + mu * (h[i](j, j) + h[j](i, j)) + lambda * h[j](j, i);
            out(i) = s;
        }
        return out;
    };
    mc.compliance = [m](const Vec3& x, std::size_t) { return IsotropicCompliance{m.lambda(x), m.mu(x)}; };
}

Displacement trig_displacement()
{
    Displacement d;
    d.value = [](const Vec3& x) -> Vec3 {
        const double f = std::sin(pi * x(0)) * std::sin(pi * x(1)) * std::sin(pi * x(2));
        return Vec3(f, f, f);
    };
    d.grad = [](const Vec3& x) -> Mat3 {
        const Vec3 s(std::sin(pi * x(0)), std::sin(pi * x(1)), std::sin(pi * x(2)));
        const Vec3 c(std::cos(pi * x(0)), std::cos(pi * x(1)), std::cos(pi * x(2)));
        const Vec3 df(pi * c(0) * s(1) * s(2), pi * s(0) * c(1) * s(2), pi * s(0) * s(1) * c(2));
        Mat3 g;
        for (int i = 0; i < 3; ++i)
            g.row(i) = df.transpose();
        return g;
    };
    d.hessian = [](const Vec3& x) -> std::array<Mat3, 3> {
        const Vec3 s(std::sin(pi * x(0)), std::sin(pi * x(1)), std::sin(pi * x(2)));
        const Vec3 c(std::cos(pi * x(0)), std::cos(pi * x(1)), std::cos(pi * x(2)));
        Mat3 h;
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                double v = pi * pi;
                for (int l = 0; l < 3; ++l)
                    v *= (l == j || l == k) ? c(l) : s(l);
                h(j, k) = j == k ? -pi * pi * s(0) * s(1) * s(2) : v;
            }
        return {h, h, h};
    };
    return d;
}

} // namespace

Vec3 ManufacturedCase::w(const Vec3& x) const
{
    return vec_of(p(x));
}

ProblemSpec ManufacturedCase::problem() const
{
    ProblemSpec spec;
    spec.compliance = compliance;
    spec.variable_compliance = variable_compliance;
    spec.body_load = g;
    spec.boundary_displacement = u_D;
    return spec;
}

const std::vector<std::string>& manufactured_case_names()
{
    static const std::vector<std::string> names{"zero", "linear_patch", "trig", "trig_varcoef"};
    return names;
}

ManufacturedCase manufactured_case(const std::string& name, double lambda, double mu)
{
    IsotropicCompliance{lambda, mu}.validate();
    ManufacturedCase mc;
    mc.name = name;
    mc.lambda = lambda;
    mc.mu = mu;

    if (name == "zero") {
        Displacement d;
        d.value = [](const Vec3&) { return Vec3::Zero().eval(); };
        d.grad = [](const Vec3&) { return Mat3::Zero().eval(); };
        d.hessian = [](const Vec3&) { return std::array<Mat3, 3>{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()}; };
        fill(mc, d, constant_lame(lambda, mu));
        mc.g = {};
        return mc;
    }
    if (name == "linear_patch") {
        Mat3 b;
        b << 1, 2, 0, 0, -1, 3, 1, 0, 1;
        Displacement d;
        d.value = [b](const Vec3& x) -> Vec3 { return b * x; };
        d.grad = [b](const Vec3&) -> Mat3 { return b; };
        d.hessian = [](const Vec3&) { return std::array<Mat3, 3>{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()}; };
        fill(mc, d, constant_lame(lambda, mu));
        mc.u_D = mc.u;
        mc.g = {};
        return mc;
    }
    if (name == "trig") {
        fill(mc, trig_displacement(), constant_lame(lambda, mu));
        return mc;
    }
    if (name == "trig_varcoef") {
        Lame m;
        m.lambda = [lambda](const Vec3&) { return lambda; };
        m.grad_lambda = [](const Vec3&) { return Vec3::Zero().eval(); };
        m.mu = [mu](const Vec3& x) { return mu * (1.0 + 0.5 * std::sin(pi * x(0))); };
        m.grad_mu = [mu](const Vec3& x) { return Vec3(0.5 * mu * pi * std::cos(pi * x(0)), 0.0, 0.0); };
        fill(mc, trig_displacement(), m);
        mc.variable_compliance = true;
        return mc;
    }
    throw std::invalid_argument("unknown manufactured case '" + name +
                                "' (expected zero, linear_patch, trig or trig_varcoef)");
}

} // namespace elastica
