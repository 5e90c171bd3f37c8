#include "fsi/ch_solver.hpp"

#include <algorithm>
#include <stdexcept>

namespace fsi {

CHSolver::CHSolver(const FESpace& phi_space, LinearSolveOptions opts)
    : space_(&phi_space), cache_(phi_space, 4), solver_("cahn-hilliard", opts) {
    if (phi_space.kind != ValueKind::Scalar || phi_space.degree != 2)
        throw std::invalid_argument("CHSolver: P2 scalar space expected");
}

CHResult CHSolver::solve(const CHSubproblemInput& in) {
    const FESpace& s = *space_;
    const MaterialParams& mp = *in.params;
    const int n = s.scalar_dofs;
    const double dt_half = in.dt / 2.0;
    const double gamma_eps = mp.gamma * mp.epsilon;
    const double gamma_over_eps = mp.gamma / mp.epsilon;

    // Unknowns: [m; phi]. Rows [0, n) test the transport equation, rows
    // [n, 2n) the potential equation. With this pairing the no-wetting
    // Dirichlet constraint on phi replaces potential rows, so every
    // transport equation stays in force and summing them (the kappa = 1
    // test) keeps the phase mass exactly conserved.
    MatrixBuilder builder(2 * n, 2 * n);
    std::vector<double> rhs(2 * n, 0.0);

    // local blocks of the (phi, m) pair: a_tp = transport row/phi column etc.
    double a_tp[36], a_tm[36], a_pp[36], a_pm[36];
    for (int t = 0; t < s.mesh->triangle_count(); ++t) {
        const ElementBasis& eb = cache_[t];
        const LocalField phi_n = gather(*in.phi_n, eb);
        const LocalField phi_g = gather(*in.phi_guess, eb);
        const LocalField vx = gather(*in.v_guess, eb, 0);
        const LocalField vy = gather(*in.v_guess, eb, 1);
        const int nloc = eb.nloc;
        std::fill_n(a_tp, nloc * nloc, 0.0);
        std::fill_n(a_tm, nloc * nloc, 0.0);
        std::fill_n(a_pp, nloc * nloc, 0.0);
        std::fill_n(a_pm, nloc * nloc, 0.0);

        for (int q = 0; q < eb.nq; ++q) {
            const double w = eb.weights[q];
            const Vec2 v{vx.value(eb, q), vy.value(eb, q)};
            const double pg = phi_g.value(eb, q);
            const double well = gamma_over_eps * (pg * pg - 1.0);  // W'_lin weight
            const double pn = phi_n.value(eb, q);
            const double f_phi = in.mms ? in.mms->forcing_phi(eb.points[q], in.t_half) : 0.0;

            for (int i = 0; i < nloc; ++i) {
                const double pi = eb.value(q, i);
                const Vec2 gi = eb.grad(q, i);
                rhs[eb.dofs[i]] += w * (pn / dt_half + f_phi) * pi;

                for (int j = 0; j < nloc; ++j) {
                    const double pj = eb.value(q, j);
                    const Vec2 gj = eb.grad(q, j);
                    double conv;
                    if (in.form == ConvectionForm::Convective)
                        conv = dot(v, gj) * pi;  // (v . grad phi) kappa
                    else
                        conv = -dot(v, gi) * pj;  // -phi (v . grad kappa)

                    a_tp[i * nloc + j] += w * (pi * pj / dt_half + conv);
                    a_tm[i * nloc + j] += w * mp.mobility * dot(gi, gj);
                    a_pp[i * nloc + j] += w * (well * pi * pj + gamma_eps * dot(gi, gj));
                    a_pm[i * nloc + j] -= w * pi * pj;
                }
            }
        }

        for (int i = 0; i < nloc; ++i)
            for (int j = 0; j < nloc; ++j) {
                builder.add(eb.dofs[i], n + eb.dofs[j], a_tp[i * nloc + j]);
                builder.add(eb.dofs[i], eb.dofs[j], a_tm[i * nloc + j]);
                builder.add(n + eb.dofs[i], n + eb.dofs[j], a_pp[i * nloc + j]);
                builder.add(n + eb.dofs[i], eb.dofs[j], a_pm[i * nloc + j]);
            }
    }

    SparseMatrix a = builder.build(map_);

    if (in.phi_dirichlet) {
        std::vector<DirichletBC> bcs;
        for (int d : s.boundary_scalar_dofs()) bcs.push_back({n + d, in.phi_bc_value});
        apply_dirichlet(a, rhs, bcs);
    }

    CHResult out;
    out.phi = FEFunction(s);
    out.m = FEFunction(s);
    const std::vector<double> x = solver_.solve(a, rhs, &out.report);
    std::copy(x.begin(), x.begin() + n, out.m.coeffs.begin());
    std::copy(x.begin() + n, x.end(), out.phi.coeffs.begin());
    return out;
}

void add_mms_forcing_phi(std::vector<double>& rhs, const FESpace& phi_space, const MMSCase& mms,
                         double t, int quad_order) {
    const std::vector<double> load =
        assemble_load(phi_space, [&](Vec2 p) { return mms.forcing_phi(p, t); }, quad_order);
    for (std::size_t i = 0; i < load.size(); ++i) rhs[i] += load[i];
}

}  // namespace fsi
