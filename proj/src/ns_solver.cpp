#include "fsi/ns_solver.hpp"

#include <algorithm>
#include <stdexcept>

namespace fsi {

NSSolver::NSSolver(const FESpace& v_space, const FESpace& p_space, LinearSolveOptions opts)
    : v_space_(&v_space),
      p_space_(&p_space),
      cache_p2_(v_space, 4),
      cache_p1_(p_space, 4),
      solver_("navier-stokes", opts) {
    if (v_space.kind != ValueKind::Vector2 || v_space.degree != 2)
        throw std::invalid_argument("NSSolver: P2 vector velocity space expected");
    if (p_space.kind != ValueKind::Scalar || p_space.degree != 1)
        throw std::invalid_argument("NSSolver: P1 scalar pressure space expected");
    if (v_space.mesh != p_space.mesh) throw std::invalid_argument("NSSolver: mesh mismatch");
    p_integral_ = assemble_load(p_space, [](Vec2) { return 1.0; }, 2);
}

NSResult NSSolver::solve(const NSSubproblemInput& in) {
    const FESpace& vs = *v_space_;
    const FESpace& ps = *p_space_;
    const MaterialParams& mp = *in.params;
    const int sv = vs.scalar_dofs;
    const int sp = ps.scalar_dofs;
    const int n = 2 * sv + sp;
    const int p_off = 2 * sv;
    const double dt_half = in.dt / 2.0;
    const double crho = (mp.rho_f - mp.rho_s) / 2.0;

    MatrixBuilder builder(n, n);
    std::vector<double> rhs(n, 0.0);
    builder.add(p_off, p_off, 0.0);  // diagonal slot for the pressure pin

    // local blocks: velocity dofs (component b, scalar i) -> b * 6 + i,
    // pressure dofs appended after the 12 velocity slots
    double vv[144];   // 12 x 12 momentum block
    double vp[36];    // 12 x 3 pressure-gradient block
    double pv[36];    // 3 x 12 continuity block
    for (int t = 0; t < vs.mesh->triangle_count(); ++t) {
        const ElementBasis& e2 = cache_p2_[t];  // P2 scalar basis
        const ElementBasis& e1 = cache_p1_[t];  // P1 scalar basis
        const LocalField phi_new = gather(*in.phi_new, e2);
        const LocalField phi_n = gather(*in.phi_n, e2);
        const LocalField m_new = gather(*in.m_new, e2);
        const LocalField vgx = gather(*in.v_guess, e2, 0);
        const LocalField vgy = gather(*in.v_guess, e2, 1);
        const LocalField vnx = gather(*in.v_n, e2, 0);
        const LocalField vny = gather(*in.v_n, e2, 1);
        const LocalField bxx = gather(*in.b_new, e1, 0);
        const LocalField bxy = gather(*in.b_new, e1, 1);
        const LocalField byy = gather(*in.b_new, e1, 2);
        const int nl2 = e2.nloc, nl1 = e1.nloc;
        std::fill_n(vv, 4 * nl2 * nl2, 0.0);
        std::fill_n(vp, 2 * nl2 * nl1, 0.0);
        std::fill_n(pv, 2 * nl1 * nl2, 0.0);

        for (int q = 0; q < e2.nq; ++q) {
            const double w = e2.weights[q];
            const Vec2 x = e2.points[q];
            const double ph = phi_new.value(e2, q);
            const Vec2 gph = phi_new.grad(e2, q);
            const double rho_new = mp.rho(ph);
            const double rho_old = mp.rho(phi_n.value(e2, q));
            const double mu = mp.mu(ph);
            const double g = mp.G(ph);
            const Vec2 vg{vgx.value(e2, q), vgy.value(e2, q)};
            const Vec2 vn{vnx.value(e2, q), vny.value(e2, q)};
            const double div_vg = vgx.grad(e2, q).x + vgy.grad(e2, q).y;
            const Vec2 gm = m_new.grad(e2, q);

            // T = -G (B - I) + gamma eps grad(phi) x grad(phi), contracted
            // against grad(z). The isotropic part G I of the elastic stress
            // is a gradient absorbed into the pressure; assembling the
            // deviatoric form keeps the undeformed state exactly balanced on
            // coarse interfaces.
            const double bm[2][2] = {{bxx.value(e1, q), bxy.value(e1, q)},
                                     {bxy.value(e1, q), byy.value(e1, q)}};
            const double ge = mp.gamma * mp.epsilon;
            const double tmat[2][2] = {
                {-g * (bm[0][0] - 1.0) + ge * gph.x * gph.x, -g * bm[0][1] + ge * gph.x * gph.y},
                {-g * bm[1][0] + ge * gph.y * gph.x, -g * (bm[1][1] - 1.0) + ge * gph.y * gph.y}};

            Vec2 fv{mp.body_force.x * rho_new, mp.body_force.y * rho_new};
            if (in.mms) {
                const Vec2 f = in.mms->forcing_v(x, in.t_half);
                fv.x += f.x;
                fv.y += f.y;
            }

            for (int i = 0; i < nl2; ++i) {
                const double pi = e2.value(q, i);
                const Vec2 gi = e2.grad(q, i);
                const double gim[2] = {gi.x, gi.y};
                const double fvc[2] = {fv.x, fv.y};
                const double vnc[2] = {vn.x, vn.y};
                for (int c = 0; c < 2; ++c) {
                    const int row = c * sv + e2.dofs[i];
                    rhs[row] += w * ((rho_old / dt_half) * vnc[c] * pi + fvc[c] * pi +
                                     tmat[c][0] * gi.x + tmat[c][1] * gi.y);
                }

                for (int j = 0; j < nl2; ++j) {
                    const double pj = e2.value(q, j);
                    const Vec2 gj = e2.grad(q, j);
                    const double gjm[2] = {gj.x, gj.y};
                    // same-component scalar terms: time derivative, momentum
                    // convection (integrated by parts onto the test function,
                    // which needs no derivative of the clamped density
                    // blend), and the mobility flux
                    const double scalar_block =
                        (rho_new / dt_half) * pi * pj -
                        rho_new * (dot(vg, gi) + div_vg * pi) * pj +
                        crho * mp.mobility * dot(gm, gj) * pi;
                    const double gg = dot(gi, gj);
                    for (int b = 0; b < 2; ++b)
                        for (int a = 0; a < 2; ++a) {
                            double val = mu * gjm[b] * gim[a];
                            if (a == b) val += mu * gg + scalar_block;
                            vv[(b * nl2 + i) * 2 * nl2 + a * nl2 + j] += w * val;
                        }
                }

                // pressure gradient block: -int p div z
                for (int jp = 0; jp < nl1; ++jp) {
                    const double qj = e1.value(q, jp);
                    for (int c = 0; c < 2; ++c)
                        vp[(c * nl2 + i) * nl1 + jp] -= w * qj * gim[c];
                }
            }

            // continuity rows: + int q div v
            for (int ip = 0; ip < nl1; ++ip) {
                const double qi = e1.value(q, ip);
                for (int j = 0; j < nl2; ++j) {
                    const Vec2 gj = e2.grad(q, j);
                    pv[ip * 2 * nl2 + j] += w * qi * gj.x;
                    pv[ip * 2 * nl2 + nl2 + j] += w * qi * gj.y;
                }
            }
        }

        for (int b = 0; b < 2; ++b)
            for (int i = 0; i < nl2; ++i) {
                const int row = b * sv + e2.dofs[i];
                for (int a = 0; a < 2; ++a)
                    for (int j = 0; j < nl2; ++j)
                        builder.add(row, a * sv + e2.dofs[j],
                                    vv[(b * nl2 + i) * 2 * nl2 + a * nl2 + j]);
                for (int jp = 0; jp < nl1; ++jp)
                    builder.add(row, p_off + e1.dofs[jp], vp[(b * nl2 + i) * nl1 + jp]);
            }
        for (int ip = 0; ip < nl1; ++ip) {
            const int row = p_off + e1.dofs[ip];
            for (int j = 0; j < nl2; ++j) {
                builder.add(row, e2.dofs[j], pv[ip * 2 * nl2 + j]);
                builder.add(row, sv + e2.dofs[j], pv[ip * 2 * nl2 + nl2 + j]);
            }
        }
    }

    SparseMatrix a = builder.build(map_);

    std::vector<DirichletBC> bcs;
    for (int d : vs.boundary_scalar_dofs()) {
        Vec2 value{0.0, 0.0};
        if (in.mms) value = in.mms->velocity(vs.scalar_dof_point(d), in.t_half);
        bcs.push_back({d, value.x});
        bcs.push_back({sv + d, value.y});
    }
    bcs.push_back({p_off, 0.0});  // pressure gauge: pin one dof, shift later
    apply_dirichlet(a, rhs, bcs);

    NSResult out;
    out.v = FEFunction(vs);
    out.p = FEFunction(ps);
    const std::vector<double> x = solver_.solve(a, rhs, &out.report);
    std::copy(x.begin(), x.begin() + 2 * sv, out.v.coeffs.begin());
    std::copy(x.begin() + 2 * sv, x.end(), out.p.coeffs.begin());

    // discrete zero-mean pressure
    double mean = 0.0;
    for (int j = 0; j < sp; ++j) mean += p_integral_[j] * out.p.coeffs[j];
    for (double& c : out.p.coeffs) c -= mean;
    return out;
}

void add_mms_forcing_ns(std::vector<double>& rhs, const FESpace& v_space, const MMSCase& mms,
                        double t, int quad_order) {
    const std::vector<double> load =
        assemble_vector_load(v_space, [&](Vec2 p) { return mms.forcing_v(p, t); }, quad_order);
    for (std::size_t i = 0; i < load.size(); ++i) rhs[i] += load[i];
}

}  // namespace fsi
