#include "fsi/b_solver.hpp"

#include <algorithm>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace fsi {

BSolver::BSolver(const FESpace& b_space, LinearSolveOptions opts)
    : space_(&b_space), cache_p1_(b_space, 4), solver_("b-transport", opts) {
    if (b_space.kind != ValueKind::SymTensor2 || b_space.degree != 1)
        throw std::invalid_argument("BSolver: P1 symmetric-tensor space expected");
}

BResult BSolver::solve(const BSubproblemInput& in) {
    const FESpace& s = *space_;
    const MaterialParams& mp = *in.params;
    const int n = s.scalar_dofs;
    const double dt_half = in.dt / 2.0;

    if (mp.mu_s == 0.0 && mp.delta_stab == 0.0 && !warned_unstabilized_) {
        std::cerr << "b-transport: mu_s = 0 with delta_stab = 0; the transport problem "
                     "is expected to be unstable\n";
        warned_unstabilized_ = true;
    }

    // Component layout (xx, xy, yy) with Frobenius multiplicities (1, 2, 1).
    MatrixBuilder builder(3 * n, 3 * n);
    std::vector<double> rhs(3 * n, 0.0);

    // In manufactured-solution mode the stabilization is cancelled against
    // the interpolated reference: delta (grad I_h B_ref, grad A) joins the
    // right-hand side, so the reference solves the stabilized problem without
    // any spurious boundary flux.
    FEFunction b_ref;
    if (in.mms && mp.delta_stab > 0.0)
        b_ref = interpolate_symtensor(s, [&](Vec2 p) { return in.mms->strain(p, in.t_half); });

    if (cache_p2_.empty()) cache_p2_ = BasisCache(*in.phi_new->space, 4);

    // local system over 9 dofs: component c, scalar dof i -> c * 3 + i
    double local[81];
    for (int t = 0; t < s.mesh->triangle_count(); ++t) {
        const ElementBasis& eb = cache_p1_[t];
        const ElementBasis& e2 = cache_p2_[t];
        const LocalField phi = gather(*in.phi_new, e2);
        const LocalField vx = gather(*in.v_guess, e2, 0);
        const LocalField vy = gather(*in.v_guess, e2, 1);
        const LocalField bxx = gather(*in.b_n, eb, 0);
        const LocalField bxy = gather(*in.b_n, eb, 1);
        const LocalField byy = gather(*in.b_n, eb, 2);
        LocalField ref[3];
        if (!b_ref.coeffs.empty())
            for (int c = 0; c < 3; ++c) ref[c] = gather(b_ref, eb, c);
        const int nloc = eb.nloc;
        const int width = 3 * nloc;
        std::fill_n(local, width * width, 0.0);

        for (int q = 0; q < eb.nq; ++q) {
            const double w = eb.weights[q];
            const double ph = phi.value(e2, q);
            const double g = mp.G(ph);
            const double alpha = mp.alpha(ph);
            const Vec2 v{vx.value(e2, q), vy.value(e2, q)};
            const Vec2 gvx = vx.grad(e2, q), gvy = vy.grad(e2, q);
            const double l[2][2] = {{gvx.x, gvx.y}, {gvy.x, gvy.y}};

            const double bn[3] = {bxx.value(eb, q), bxy.value(eb, q), byy.value(eb, q)};
            const double identity[3] = {1.0, 0.0, 1.0};
            const double mult[3] = {1.0, 2.0, 1.0};
            SymTensor2 fb{0.0, 0.0, 0.0};
            if (in.mms) fb = in.mms->forcing_B(eb.points[q], in.t_half);
            const double fload[3] = {fb.xx, fb.xy, fb.yy};

            // -G (L B + B L^T) : A; row c with its multiplicity folded in,
            // columns ordered (xx, xy, yy)
            const double couple[3][3] = {
                {-2.0 * g * l[0][0], -2.0 * g * l[0][1], 0.0},
                {-2.0 * g * l[1][0], -2.0 * g * (l[0][0] + l[1][1]), -2.0 * g * l[0][1]},
                {0.0, -2.0 * g * l[1][0], -2.0 * g * l[1][1]}};

            for (int i = 0; i < nloc; ++i) {
                const double pi = eb.value(q, i);
                const Vec2 gi = eb.grad(q, i);
                for (int c = 0; c < 3; ++c) {
                    const int row = c * n + eb.dofs[i];
                    rhs[row] +=
                        w * mult[c] * (g / dt_half * bn[c] + alpha * identity[c] + fload[c]) * pi;
                    if (!b_ref.coeffs.empty())
                        rhs[row] += w * mult[c] * mp.delta_stab * dot(ref[c].grad(eb, q), gi);
                }
                for (int j = 0; j < nloc; ++j) {
                    const double pj = eb.value(q, j);
                    const Vec2 gj = eb.grad(q, j);
                    const double mass_like = (g / dt_half + alpha) * pi * pj + g * dot(v, gj) * pi;
                    const double stab = mp.delta_stab * dot(gi, gj);
                    for (int c = 0; c < 3; ++c) {
                        double* row = local + (c * nloc + i) * width;
                        row[c * nloc + j] += w * mult[c] * (mass_like + stab);
                        for (int cc = 0; cc < 3; ++cc)
                            row[cc * nloc + j] += w * couple[c][cc] * pi * pj;
                    }
                }
            }
        }

        for (int ci = 0; ci < 3; ++ci)
            for (int i = 0; i < nloc; ++i)
                for (int cj = 0; cj < 3; ++cj)
                    for (int j = 0; j < nloc; ++j)
                        builder.add(ci * n + eb.dofs[i], cj * n + eb.dofs[j],
                                    local[(ci * nloc + i) * width + cj * nloc + j]);
    }

    SparseMatrix a = builder.build(map_);
    BResult out;
    out.b = FEFunction(s);
    try {
        const std::vector<double> x = solver_.solve(a, rhs, &out.report);
        std::copy(x.begin(), x.end(), out.b.coeffs.begin());
    } catch (const LinearSolveError& e) {
        std::ostringstream os;
        os << e.what() << " [g_f=" << mp.g_f << ", mu_s=" << mp.mu_s
           << ", delta_stab=" << mp.delta_stab << "]";
        throw LinearSolveError("b-transport", os.str());
    }
    return out;
}

void add_mms_forcing_b(std::vector<double>& rhs, const FESpace& b_space, const MMSCase& mms,
                       double t, int quad_order) {
    const std::vector<double> load =
        assemble_symtensor_load(b_space, [&](Vec2 p) { return mms.forcing_B(p, t); }, quad_order);
    for (std::size_t i = 0; i < load.size(); ++i) rhs[i] += load[i];
}

}  // namespace fsi
