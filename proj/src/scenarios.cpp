#include "fsi/scenarios.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fsi {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kVAmp = 0.2;
constexpr double kBAmp = 1e-5;
constexpr double kB11 = 1.0, kB12 = 6.0, kB22 = 5.0;

struct Trig {
    double s, c;      // sin(pi t), cos(pi t)
    double sx, cx;    // sin(pi x), cos(pi x)
    double sy, cy;
};

Trig trig(Vec2 p, double t) {
    return {std::sin(kPi * t), std::cos(kPi * t),
            std::sin(kPi * p.x), std::cos(kPi * p.x),
            std::sin(kPi * p.y), std::cos(kPi * p.y)};
}

}  // namespace

double MMSCase::phi(Vec2 p, double t) const {
    const Trig g = trig(p, t);
    return g.s * g.cx * g.cy;
}

Vec2 MMSCase::grad_phi(Vec2 p, double t) const {
    const Trig g = trig(p, t);
    return {-kPi * g.s * g.sx * g.cy, -kPi * g.s * g.cx * g.sy};
}

double MMSCase::lap_phi(Vec2 p, double t) const { return -2.0 * kPi * kPi * phi(p, t); }

double MMSCase::dphi_dt(Vec2 p, double t) const {
    const Trig g = trig(p, t);
    return kPi * g.c * g.cx * g.cy;
}

Mat2 MMSCase::hess_phi(Vec2 p, double t) const {
    const Trig g = trig(p, t);
    const double f = phi(p, t);
    Mat2 h;
    h.a[0][0] = -kPi * kPi * f;
    h.a[1][1] = -kPi * kPi * f;
    h.a[0][1] = h.a[1][0] = kPi * kPi * g.s * g.sx * g.sy;
    return h;
}

Vec2 MMSCase::velocity(Vec2 p, double t) const {
    const Trig g = trig(p, t);
    return {kVAmp * g.s * g.sx * g.cy, -kVAmp * g.s * g.cx * g.sy};
}

Mat2 MMSCase::grad_v(Vec2 p, double t) const {
    const Trig g = trig(p, t);
    const double a = kVAmp * kPi * g.s;
    Mat2 l;
    l.a[0][0] = a * g.cx * g.cy;
    l.a[0][1] = -a * g.sx * g.sy;
    l.a[1][0] = a * g.sx * g.sy;
    l.a[1][1] = -a * g.cx * g.cy;
    return l;
}

Vec2 MMSCase::dv_dt(Vec2 p, double t) const {
    const Trig g = trig(p, t);
    return {kVAmp * kPi * g.c * g.sx * g.cy, -kVAmp * kPi * g.c * g.cx * g.sy};
}

Vec2 MMSCase::lap_v(Vec2 p, double t) const {
    const Vec2 v = velocity(p, t);
    return {-2.0 * kPi * kPi * v.x, -2.0 * kPi * kPi * v.y};
}

namespace {

SymTensor2 scaled_b(double f) { return {f * kB11, f * kB12, f * kB22}; }

}  // namespace

SymTensor2 MMSCase::strain(Vec2 p, double t) const {
    const Trig g = trig(p, t);
    const double gx = (p.x + 10.0) * (p.x + 10.0), hy = (p.y + 10.0) * (p.y + 10.0);
    return scaled_b(kBAmp * g.s * gx * hy);
}

SymTensor2 MMSCase::dB_dt(Vec2 p, double t) const {
    const Trig g = trig(p, t);
    const double gx = (p.x + 10.0) * (p.x + 10.0), hy = (p.y + 10.0) * (p.y + 10.0);
    return scaled_b(kBAmp * kPi * g.c * gx * hy);
}

SymTensor2 MMSCase::dB_dx(Vec2 p, double t) const {
    const Trig g = trig(p, t);
    const double hy = (p.y + 10.0) * (p.y + 10.0);
    return scaled_b(kBAmp * g.s * 2.0 * (p.x + 10.0) * hy);
}

SymTensor2 MMSCase::dB_dy(Vec2 p, double t) const {
    const Trig g = trig(p, t);
    const double gx = (p.x + 10.0) * (p.x + 10.0);
    return scaled_b(kBAmp * g.s * gx * 2.0 * (p.y + 10.0));
}

SymTensor2 MMSCase::lap_B(Vec2 p, double t) const {
    const Trig g = trig(p, t);
    const double gx = (p.x + 10.0) * (p.x + 10.0), hy = (p.y + 10.0) * (p.y + 10.0);
    return scaled_b(kBAmp * g.s * 2.0 * (gx + hy));
}

Vec2 MMSCase::div_B(Vec2 p, double t) const {
    const SymTensor2 bx = dB_dx(p, t), by = dB_dy(p, t);
    return {bx.xx + by.xy, bx.xy + by.yy};
}

double MMSCase::chem_potential(Vec2 p, double t) const {
    const double f = phi(p, t);
    const MaterialParams& mp = params;
    return mp.gamma * (double_well_prime(f) / mp.epsilon - mp.epsilon * lap_phi(p, t));
}

Vec2 MMSCase::grad_m(Vec2 p, double t) const {
    const double f = phi(p, t);
    const Vec2 gp = grad_phi(p, t);
    // grad(lap phi) = -2 pi^2 grad(phi) for this reference
    const double factor =
        params.gamma * ((3.0 * f * f - 1.0) / params.epsilon + 2.0 * kPi * kPi * params.epsilon);
    return factor * gp;
}

double MMSCase::lap_m(Vec2 p, double t) const {
    const double f = phi(p, t);
    const Vec2 gp = grad_phi(p, t);
    const double lp = lap_phi(p, t);
    const double grad2 = dot(gp, gp);
    const double lap_wprime = (3.0 * f * f - 1.0) * lp + 6.0 * f * grad2;
    // bilaplacian of phi_ref is 4 pi^4 phi_ref
    const double bilap = 4.0 * kPi * kPi * kPi * kPi * f;
    return params.gamma * (lap_wprime / params.epsilon - params.epsilon * bilap);
}

double MMSCase::forcing_phi(Vec2 p, double t) const {
    return dphi_dt(p, t) + dot(velocity(p, t), grad_phi(p, t)) - params.mobility * lap_m(p, t);
}

SymTensor2 MMSCase::forcing_B(Vec2 p, double t) const {
    const double f = phi(p, t);
    const SymTensor2 b = strain(p, t);
    const SymTensor2 bt = dB_dt(p, t);
    const SymTensor2 bx = dB_dx(p, t), by = dB_dy(p, t);
    const Vec2 v = velocity(p, t);
    const Mat2 l = grad_v(p, t);

    // L B + B L^T = 2 sym(L B)
    const double m11 = 2.0 * (l.a[0][0] * b.xx + l.a[0][1] * b.xy);
    const double m12 = l.a[1][0] * b.xx + (l.a[0][0] + l.a[1][1]) * b.xy + l.a[0][1] * b.yy;
    const double m22 = 2.0 * (l.a[1][0] * b.xy + l.a[1][1] * b.yy);

    const double gphi = params.G(f);
    const double aphi = params.alpha(f);
    SymTensor2 out;
    out.xx = gphi * (bt.xx + v.x * bx.xx + v.y * by.xx - m11) + aphi * (b.xx - 1.0);
    out.xy = gphi * (bt.xy + v.x * bx.xy + v.y * by.xy - m12) + aphi * b.xy;
    out.yy = gphi * (bt.yy + v.x * bx.yy + v.y * by.yy - m22) + aphi * (b.yy - 1.0);
    return out;
}

Vec2 MMSCase::forcing_v(Vec2 p, double t) const {
    const MaterialParams& mp = params;
    const double f = phi(p, t);
    const double ft = dphi_dt(p, t);
    const Vec2 gp = grad_phi(p, t);
    const Vec2 v = velocity(p, t);
    const Mat2 l = grad_v(p, t);
    const Vec2 vt = dv_dt(p, t);
    const Vec2 lv = lap_v(p, t);
    const Vec2 gm = grad_m(p, t);
    const SymTensor2 b = strain(p, t);
    const Vec2 db = div_B(p, t);
    const Mat2 h = hess_phi(p, t);
    const double lp = lap_phi(p, t);

    const double rho = mp.rho(f), drho = mp.drho(f);
    const double mu = mp.mu(f), dmu = mp.dmu(f);
    const double g = mp.G(f), dg = mp.dG(f);
    const double crho = (mp.rho_f - mp.rho_s) / 2.0;

    auto matvec = [](const Mat2& m, Vec2 u) {
        return Vec2{m.a[0][0] * u.x + m.a[0][1] * u.y, m.a[1][0] * u.x + m.a[1][1] * u.y};
    };

    // d/dt (rho v) + (v . grad)(rho v)
    const Vec2 lv_conv = matvec(l, v);
    const double v_dot_gphi = dot(v, gp);
    Vec2 out{drho * ft * v.x + rho * vt.x + drho * v_dot_gphi * v.x + rho * lv_conv.x,
             drho * ft * v.y + rho * vt.y + drho * v_dot_gphi * v.y + rho * lv_conv.y};

    // mobility flux (rho_f - rho_s)/2 M (grad m . grad) v
    const Vec2 lgm = matvec(l, gm);
    out.x += crho * mp.mobility * lgm.x;
    out.y += crho * mp.mobility * lgm.y;

    // - div(2 mu D(v)) = -(mu lap v + 2 D(v) grad mu), div v = 0
    const Vec2 gmu = dmu * gp;
    const double d11 = l.a[0][0], d22 = l.a[1][1], d12 = 0.5 * (l.a[0][1] + l.a[1][0]);
    out.x -= mu * lv.x + 2.0 * (d11 * gmu.x + d12 * gmu.y);
    out.y -= mu * lv.y + 2.0 * (d12 * gmu.x + d22 * gmu.y);

    // - div(G B) = -(G div B + B grad G)
    const Vec2 gg = dg * gp;
    out.x -= g * db.x + b.xx * gg.x + b.xy * gg.y;
    out.y -= g * db.y + b.xy * gg.x + b.yy * gg.y;

    // + gamma eps div(grad phi x grad phi) = gamma eps (H grad phi + lap phi grad phi)
    const Vec2 hg = matvec(h, gp);
    out.x += mp.gamma * mp.epsilon * (hg.x + lp * gp.x);
    out.y += mp.gamma * mp.epsilon * (hg.y + lp * gp.y);
    return out;
}

MMSCase build_mms(int case_id, double epsilon) {
    if (case_id != 1 && case_id != 2) throw std::invalid_argument("build_mms: case must be 1 or 2");
    MMSCase c;
    c.case_id = case_id;
    MaterialParams& p = c.params;
    p.rho_f = p.rho_s = 1.0;
    p.mu_f = 1.0;
    p.g_s = 1.0;
    p.alpha_f = 1.0;
    p.gamma = 1e-4;
    p.mobility = 1.0;
    p.epsilon = epsilon;
    p.body_force = {0.0, 0.0};
    if (case_id == 1) {
        p.mu_s = 0.5;
        p.g_f = 0.5;
        p.delta_stab = 0.0;
    } else {
        p.mu_s = 0.0;
        p.g_f = 0.0;
        p.delta_stab = 1e-3;
    }
    p.validate();
    return c;
}

double ContactCase::initial_phi(Vec2 p) const {
    const double dx = p.x - center.x, dy = p.y - center.y;
    const double dist = std::sqrt(dx * dx + dy * dy) - radius;
    if (profile == InitProfile::Sharp) return dist <= 0.0 ? -1.0 : 1.0;
    return std::tanh(dist / (std::sqrt(2.0) * params.epsilon));
}

ContactCase build_contact(int case_id, InitProfile profile) {
    if (case_id != 1 && case_id != 2)
        throw std::invalid_argument("build_contact: case must be 1 or 2");
    ContactCase c;
    c.case_id = case_id;
    c.profile = profile;
    MaterialParams& p = c.params;
    p.rho_f = 1.0;
    p.rho_s = 10.0;
    p.g_f = 0.0;
    p.alpha_f = 5e4;
    p.gamma = 1e-3;
    p.epsilon = 2.5e-3;
    p.mobility = 1e-2;
    if (case_id == 1) {
        p.mu_f = 5e-4;
        p.mu_s = 200.0;
        p.g_s = 5e5;
        p.body_force = {0.0, -1e3};
        p.delta_stab = 1e-3;
    } else {
        p.mu_f = 0.04;
        p.mu_s = 100.0;
        p.g_s = 5e3;
        p.body_force = {0.0, -5e3};
        p.delta_stab = 1e-1;
    }
    p.validate();
    return c;
}

double center_of_mass_y(const FEFunction& phi) {
    const FESpace& s = *phi.space;
    const auto& rule = quadrature_rule(4);
    double num = 0.0, den = 0.0;
    for (int t = 0; t < s.mesh->triangle_count(); ++t) {
        const ElementBasis eb = tabulate(s, t, rule);
        const LocalField lp = gather(phi, eb, 0);
        for (int q = 0; q < eb.nq; ++q) {
            const double solid = 0.5 * (1.0 - lp.value(eb, q));
            num += eb.weights[q] * eb.points[q].y * solid;
            den += eb.weights[q] * solid;
        }
    }
    if (den <= 1e-12) throw std::domain_error("center_of_mass_y: empty solid phase");
    return num / den;
}

}  // namespace fsi
