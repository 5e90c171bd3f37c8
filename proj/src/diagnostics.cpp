#include "fsi/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "fsi/scenarios.hpp"

namespace fsi {

DiagnosticsRecord record_state(const SimState& state, const Stepper& stepper,
                               const StepStats& stats) {
    const MaterialParams& mp = stepper.params();
    const FESpace& phi_s = stepper.phi_space();
    const FESpace& b_s = stepper.b_space();

    DiagnosticsRecord r;
    r.step = state.step_index;
    r.t = state.t;
    r.subiters = stats.subiters;
    r.lin_solves = stats.lin_solves;
    r.lin_iters = stats.lin_iters;
    r.lin_residual_max = stats.lin_residual_max;
    r.min_phi = std::numeric_limits<double>::infinity();
    r.max_phi = -std::numeric_limits<double>::infinity();
    r.min_eig_b = std::numeric_limits<double>::infinity();

    double com_num = 0.0, com_den = 0.0;
    const auto& rule = quadrature_rule(4);
    for (int t = 0; t < phi_s.mesh->triangle_count(); ++t) {
        const ElementBasis e2 = tabulate(phi_s, t, rule);
        const ElementBasis e1 = tabulate(b_s, t, rule);
        const LocalField phi = gather(state.phi_curr, e2);
        const LocalField phi_prev = gather(state.phi_prev, e2);
        const LocalField phi_half = gather(state.phi_half, e2);
        const LocalField m = gather(state.m_curr, e2);
        const LocalField vx = gather(state.v_curr, e2, 0);
        const LocalField vy = gather(state.v_curr, e2, 1);
        const LocalField vhx = gather(state.v_half, e2, 0);
        const LocalField vhy = gather(state.v_half, e2, 1);
        const LocalField bxx = gather(state.b_curr, e1, 0);
        const LocalField bxy = gather(state.b_curr, e1, 1);
        const LocalField byy = gather(state.b_curr, e1, 2);

        for (int q = 0; q < e2.nq; ++q) {
            const double w = e2.weights[q];
            const double ph = phi.value(e2, q);
            const Vec2 gph = phi.grad(e2, q);
            const Vec2 v{vx.value(e2, q), vy.value(e2, q)};
            const Vec2 gvx = vx.grad(e2, q), gvy = vy.grad(e2, q);
            const Vec2 gm = m.grad(e2, q);
            const double trb = bxx.value(e1, q) + byy.value(e1, q);

            r.e_kin += w * 0.5 * mp.rho(ph) * dot(v, v);
            r.e_elastic += w * 0.5 * mp.G(ph) * trb;
            r.e_mix += w * (mp.gamma / mp.epsilon * double_well(ph) +
                            0.5 * mp.gamma * mp.epsilon * dot(gph, gph));
            const double d11 = gvx.x, d22 = gvy.y, d12 = 0.5 * (gvx.y + gvy.x);
            r.d_visc += w * 2.0 * mp.mu(ph) * (d11 * d11 + 2.0 * d12 * d12 + d22 * d22);
            r.d_mob += w * mp.mobility * dot(gm, gm);
            r.r_relax += w * 0.5 * mp.alpha(ph) * trb;
            r.power_body += w * mp.rho(ph) * dot(mp.body_force, v);
            if (const MMSCase* mms = stepper.mms()) {
                const Vec2 fv = mms->forcing_v(e2.points[q], state.t);
                const SymTensor2 fb = mms->forcing_B(e2.points[q], state.t);
                r.power_forcing += w * (dot(fv, v) + mms->forcing_phi(e2.points[q], state.t) *
                                                         m.value(e2, q) +
                                        0.5 * (fb.xx + fb.yy));
            }
            r.mass_phi += w * ph;
            r.norm_phi_w14 += w * (ph * ph * ph * ph + dot(gph, gph) * dot(gph, gph));

            r.min_phi = std::min(r.min_phi, ph);
            r.max_phi = std::max(r.max_phi, ph);
            const double b11 = bxx.value(e1, q), b12 = bxy.value(e1, q), b22 = byy.value(e1, q);
            const double disc = std::sqrt((b11 - b22) * (b11 - b22) + 4.0 * b12 * b12);
            r.min_eig_b = std::min(r.min_eig_b, 0.5 * (b11 + b22 - disc));
            const double gv_frob = std::sqrt(gvx.x * gvx.x + gvx.y * gvx.y + gvy.x * gvy.x +
                                             gvy.y * gvy.y);
            r.norm_grad_v_inf = std::max(r.norm_grad_v_inf, gv_frob);

            if (state.step_index > 0) {
                const Vec2 vh{vhx.value(e2, q), vhy.value(e2, q)};
                const double dtphi = (ph - phi_prev.value(e2, q)) / stepper.dt() +
                                     dot(vh, phi_half.grad(e2, q));
                r.norm_dtphi_inf = std::max(r.norm_dtphi_inf, std::abs(dtphi));
            }

            const double solid = 0.5 * (1.0 - ph);
            com_num += w * e2.points[q].y * solid;
            com_den += w * solid;
        }
    }
    r.min_phi_nodal = *std::min_element(state.phi_curr.coeffs.begin(), state.phi_curr.coeffs.end());
    r.com_y = com_den > 1e-12 ? com_num / com_den : std::numeric_limits<double>::quiet_NaN();
    r.clamp_active = r.min_phi < -1.0 || r.max_phi > 1.0;
    return r;
}

double energy_balance_residual(const DiagnosticsRecord& a, const DiagnosticsRecord& b, double dt,
                               double alpha_f, double mass_phi0) {
    const double de = (b.energy_total() - a.energy_total()) / dt;
    const double diss = 0.5 * (a.d_visc + b.d_visc) + 0.5 * (a.d_mob + b.d_mob) +
                        0.5 * (a.r_relax + b.r_relax);
    // sources: alpha_F d/4 (|Omega| + int phi_0) + int rho f . v, d = 2
    const double sources = 0.5 * alpha_f * (1.0 + mass_phi0) +
                           0.5 * (a.power_body + b.power_body) +
                           0.5 * (a.power_forcing + b.power_forcing);
    return de + diss - sources;
}

RelativeErrors relative_errors(const FEFunction& v, const FEFunction& b, const FEFunction& phi,
                               const MMSCase& mms, double t) {
    const FESpace& vs = *v.space;
    const FESpace& bs = *b.space;
    const FESpace& ps = *phi.space;
    double num_v = 0.0, den_v = 0.0, num_b = 0.0, den_b = 0.0, num_p = 0.0, den_p = 0.0;

    const auto& rule = quadrature_rule(6);
    for (int tri = 0; tri < vs.mesh->triangle_count(); ++tri) {
        const ElementBasis e2 = tabulate(vs, tri, rule);
        const ElementBasis e1 = tabulate(bs, tri, rule);
        const LocalField vx = gather(v, e2, 0);
        const LocalField vy = gather(v, e2, 1);
        const LocalField ph = gather(phi, e2);
        const LocalField bxx = gather(b, e1, 0);
        const LocalField bxy = gather(b, e1, 1);
        const LocalField byy = gather(b, e1, 2);
        (void)ps;

        for (int q = 0; q < e2.nq; ++q) {
            const double w = e2.weights[q];
            const Vec2 x = e2.points[q];
            const Vec2 v_ref = mms.velocity(x, t);
            const SymTensor2 b_ref = mms.strain(x, t);
            const double phi_ref = mms.phi(x, t);

            const double dvx = vx.value(e2, q) - v_ref.x;
            const double dvy = vy.value(e2, q) - v_ref.y;
            num_v += w * (dvx * dvx + dvy * dvy);
            den_v += w * (v_ref.x * v_ref.x + v_ref.y * v_ref.y);

            const double db1 = bxx.value(e1, q) - b_ref.xx;
            const double db2 = bxy.value(e1, q) - b_ref.xy;
            const double db3 = byy.value(e1, q) - b_ref.yy;
            num_b += w * (db1 * db1 + 2.0 * db2 * db2 + db3 * db3);
            den_b += w * (b_ref.xx * b_ref.xx + 2.0 * b_ref.xy * b_ref.xy + b_ref.yy * b_ref.yy);

            const double dp = ph.value(e2, q) - phi_ref;
            num_p += w * dp * dp;
            den_p += w * phi_ref * phi_ref;
        }
    }

    RelativeErrors e;
    auto finish = [](double num, double den, bool& absolute) {
        const double n = std::sqrt(num), d = std::sqrt(den);
        if (d < 1e-14) {
            absolute = true;
            return n;
        }
        return n / d;
    };
    e.e_v = finish(num_v, den_v, e.absolute_v);
    e.e_b = finish(num_b, den_b, e.absolute_b);
    e.e_phi = finish(num_p, den_p, e.absolute_phi);
    return e;
}

std::vector<double> convergence_rates(const std::vector<double>& errors) {
    if (errors.size() < 2)
        throw std::invalid_argument("convergence_rates: need at least two errors");
    std::vector<double> rates;
    for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
        if (errors[i] <= 0.0 || errors[i + 1] <= 0.0)
            rates.push_back(std::numeric_limits<double>::quiet_NaN());
        else
            rates.push_back(std::log2(errors[i] / errors[i + 1]));
    }
    return rates;
}

void write_diagnostics_csv(const std::vector<DiagnosticsRecord>& records, std::ostream& out) {
    out << "# fsi-diagnostics-v1\n";
    out << "step,t,E_kin,E_elastic,E_mix,D_visc,D_mob,R_relax,power_body,power_forcing,mass_phi,"
           "min_phi,max_phi,min_phi_nodal,min_eig_B,norm_grad_v_inf,norm_Dtphi_inf,norm_phi_W14,"
           "com_y,subiters,lin_solves,lin_iters,lin_residual_max,clamp_active\n";
    out << std::setprecision(17);
    for (const DiagnosticsRecord& r : records) {
        out << r.step << ',' << r.t << ',' << r.e_kin << ',' << r.e_elastic << ',' << r.e_mix
            << ',' << r.d_visc << ',' << r.d_mob << ',' << r.r_relax << ',' << r.power_body << ','
            << r.power_forcing << ','
            << r.mass_phi << ',' << r.min_phi << ',' << r.max_phi << ',' << r.min_phi_nodal
            << ',' << r.min_eig_b << ','
            << r.norm_grad_v_inf << ',' << r.norm_dtphi_inf << ',' << r.norm_phi_w14 << ','
            << r.com_y << ',' << r.subiters << ',' << r.lin_solves << ',' << r.lin_iters << ','
            << r.lin_residual_max << ',' << (r.clamp_active ? 1 : 0) << '\n';
    }
}

}  // namespace fsi
