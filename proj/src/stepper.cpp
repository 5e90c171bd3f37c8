#include "fsi/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace fsi {

namespace {

// Type-II Anderson mixing over the window of recent (x, g(x)) pairs: the
// next iterate combines the images g with weights that minimize the combined
// residual, solved through the difference normal equations.
class Anderson {
  public:
    explicit Anderson(int depth) : depth_(depth) {}

    std::vector<double> next(const std::vector<double>& x, const std::vector<double>& gx) {
        std::vector<double> f(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) f[i] = gx[i] - x[i];
        fs_.push_back(f);
        gs_.push_back(gx);
        if (static_cast<int>(fs_.size()) > depth_ + 1) {
            fs_.pop_front();
            gs_.pop_front();
        }
        const int m = static_cast<int>(fs_.size()) - 1;
        if (m == 0) return gx;

        // columns: df_j = f_{j+1} - f_j; solve min || f_k - DF gamma ||
        std::vector<std::vector<double>> df(m);
        for (int j = 0; j < m; ++j) {
            df[j].resize(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) df[j][i] = fs_[j + 1][i] - fs_[j][i];
        }
        double gram[25], rhs[5], gamma[5];
        for (int a = 0; a < m; ++a) {
            for (int b = 0; b < m; ++b) {
                double s = 0.0;
                for (std::size_t i = 0; i < x.size(); ++i) s += df[a][i] * df[b][i];
                gram[a * m + b] = s;
            }
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) s += df[a][i] * f[i];
            rhs[a] = s;
        }
        double scale = 0.0;
        for (int a = 0; a < m; ++a) scale = std::max(scale, gram[a * m + a]);
        if (scale <= 0.0) return gx;
        for (int a = 0; a < m; ++a) gram[a * m + a] += 1e-12 * scale;
        if (!solve_small(gram, rhs, gamma, m)) return gx;

        std::vector<double> out = gx;
        for (int j = 0; j < m; ++j)
            for (std::size_t i = 0; i < x.size(); ++i)
                out[i] -= gamma[j] * (gs_[j + 1][i] - gs_[j][i]);
        return out;
    }

  private:
    static bool solve_small(double* a, const double* b, double* x, int n) {
        int perm[5] = {0, 1, 2, 3, 4};
        double rhs[5];
        std::copy(b, b + n, rhs);
        for (int k = 0; k < n; ++k) {
            int piv = k;
            for (int i = k + 1; i < n; ++i)
                if (std::abs(a[perm[i] * n + k]) > std::abs(a[perm[piv] * n + k])) piv = i;
            std::swap(perm[k], perm[piv]);
            const double d = a[perm[k] * n + k];
            if (d == 0.0) return false;
            for (int i = k + 1; i < n; ++i) {
                const double fac = a[perm[i] * n + k] / d;
                for (int j = k; j < n; ++j) a[perm[i] * n + j] -= fac * a[perm[k] * n + j];
                rhs[perm[i]] -= fac * rhs[perm[k]];
            }
        }
        for (int i = n - 1; i >= 0; --i) {
            double s = rhs[perm[i]];
            for (int j = i + 1; j < n; ++j) s -= a[perm[i] * n + j] * x[j];
            x[i] = s / a[perm[i] * n + i];
        }
        return true;
    }

    int depth_;
    std::deque<std::vector<double>> fs_, gs_;
};

}  // namespace

Stepper::Stepper(const Mesh& mesh, MaterialParams params, double dt, FixedPointConfig fp,
                 SchemeOptions opts, const MMSCase* mms, LinearSolveOptions lin)
    : mesh_(&mesh),
      params_(params),
      dt_(dt),
      fp_(fp),
      opts_(opts),
      mms_(mms),
      v_space_(FESpace::create(mesh, 2, ValueKind::Vector2)),
      p_space_(FESpace::create(mesh, 1, ValueKind::Scalar)),
      phi_space_(FESpace::create(mesh, 2, ValueKind::Scalar)),
      b_space_(FESpace::create(mesh, 1, ValueKind::SymTensor2)),
      ch_(phi_space_, lin),
      b_(b_space_, lin),
      ns_(v_space_, p_space_, lin) {
    if (dt_ <= 0.0) throw std::invalid_argument("Stepper: dt must be positive");
    if (fp_.rel_tol <= 0.0 || fp_.max_iter < 1)
        throw std::invalid_argument("Stepper: invalid fixed-point configuration");
    params_.validate();
    mass_v_ = assemble_mass(v_space_, 1.0, 4);
    mass_phi_ = assemble_mass(phi_space_, 1.0, 4);
    mass_b_ = assemble_mass(b_space_, 1.0, 2);
}

SimState Stepper::initial_state(FEFunction v0, FEFunction phi0, FEFunction b0) const {
    SimState s;
    s.v_prev = v0;
    s.v_curr = std::move(v0);
    s.phi_prev = phi0;
    s.phi_curr = std::move(phi0);
    s.b_prev = b0;
    s.b_curr = std::move(b0);
    s.p_curr = FEFunction(p_space_);
    s.m_curr = FEFunction(phi_space_);
    s.v_half = s.v_curr;
    s.phi_half = s.phi_curr;
    return s;
}

FEFunction Stepper::extrapolate_guess(const FEFunction& curr, const FEFunction& prev) {
    FEFunction out = curr;
    for (std::size_t k = 0; k < out.coeffs.size(); ++k)
        out.coeffs[k] = 1.5 * curr.coeffs[k] - 0.5 * prev.coeffs[k];
    return out;
}

double Stepper::field_change(const SparseMatrix& mass, const FEFunction& next,
                             const FEFunction& prev) const {
    std::vector<double> diff(next.coeffs.size());
    for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = next.coeffs[k] - prev.coeffs[k];
    const std::vector<double> md = mass.multiply(diff);
    double nd = 0.0;
    for (std::size_t k = 0; k < diff.size(); ++k) nd += diff[k] * md[k];
    nd = std::sqrt(std::max(0.0, nd));
    const std::vector<double> mx = mass.multiply(next.coeffs);
    double nx = 0.0;
    for (std::size_t k = 0; k < next.coeffs.size(); ++k) nx += next.coeffs[k] * mx[k];
    nx = std::sqrt(std::max(0.0, nx));
    // Relative change with an absolute fallback for vanishing fields.
    return nx > 1e-12 ? nd / nx : nd;
}

StepStats Stepper::advance(SimState& state) {
    const double t_half = state.t + 0.5 * dt_;
    StepStats stats;

    ch_.begin_step();
    b_.begin_step();
    ns_.begin_step();

    FEFunction v_g = extrapolate_guess(state.v_curr, state.v_prev);
    FEFunction phi_g = extrapolate_guess(state.phi_curr, state.phi_prev);
    FEFunction b_g = extrapolate_guess(state.b_curr, state.b_prev);
    FEFunction m_half(phi_space_);
    FEFunction p_half(p_space_);

    std::vector<double> history;
    bool converged = false;

    // acceleration over the concatenated (v, phi, B) coefficients
    Anderson anderson(std::clamp(fp_.acceleration_depth, 1, 5));
    const std::size_t nv = v_g.coeffs.size(), nphi = phi_g.coeffs.size();

    for (int k = 0; k < fp_.max_iter; ++k) {
        FEFunction phi_next;
        FEFunction m_next;
        if (opts_.freeze_phi) {
            phi_next = state.phi_curr;
            m_next = FEFunction(phi_space_);
        } else {
            CHSubproblemInput ch_in;
            ch_in.phi_n = &state.phi_curr;
            ch_in.phi_guess = &phi_g;
            ch_in.v_guess = &v_g;
            ch_in.dt = dt_;
            ch_in.params = &params_;
            ch_in.phi_dirichlet = opts_.phi_bc == PhiBC::DirichletOne;
            ch_in.phi_bc_value = 1.0;
            ch_in.form = opts_.ch_form;
            ch_in.mms = mms_;
            ch_in.t_half = t_half;
            CHResult ch_out = ch_.solve(ch_in);
            phi_next = std::move(ch_out.phi);
            m_next = std::move(ch_out.m);
            ++stats.lin_solves;
            stats.lin_iters += ch_out.report.iterations;
            stats.lin_residual_max = std::max(stats.lin_residual_max, ch_out.report.residual_norm);
        }

        BSubproblemInput b_in;
        b_in.b_n = &state.b_curr;
        b_in.v_guess = &v_g;
        b_in.phi_new = &phi_next;
        b_in.dt = dt_;
        b_in.params = &params_;
        b_in.mms = mms_;
        b_in.t_half = t_half;
        BResult b_out = b_.solve(b_in);
        ++stats.lin_solves;
        stats.lin_iters += b_out.report.iterations;
        stats.lin_residual_max = std::max(stats.lin_residual_max, b_out.report.residual_norm);

        NSSubproblemInput ns_in;
        ns_in.v_n = &state.v_curr;
        ns_in.phi_n = &state.phi_curr;
        ns_in.phi_new = &phi_next;
        ns_in.m_new = &m_next;
        ns_in.b_new = &b_out.b;
        ns_in.v_guess = &v_g;
        ns_in.dt = dt_;
        ns_in.params = &params_;
        ns_in.mms = mms_;
        ns_in.t_half = t_half;
        NSResult ns_out = ns_.solve(ns_in);
        ++stats.lin_solves;
        stats.lin_iters += ns_out.report.iterations;
        stats.lin_residual_max = std::max(stats.lin_residual_max, ns_out.report.residual_norm);

        const double change = std::max({field_change(mass_v_, ns_out.v, v_g),
                                        field_change(mass_phi_, phi_next, phi_g),
                                        field_change(mass_b_, b_out.b, b_g)});
        history.push_back(change);
        stats.subiters = k + 1;

        if (!std::isfinite(change))
            throw SubiterationError(state.step_index, "divergence", history);
        if (history.size() > 1 && change > 1e4 * std::max(1.0, history.front()))
            throw SubiterationError(state.step_index, "divergence", history);

        if (change <= fp_.rel_tol) {
            v_g = std::move(ns_out.v);
            p_half = std::move(ns_out.p);
            phi_g = std::move(phi_next);
            m_half = std::move(m_next);
            b_g = std::move(b_out.b);
            converged = true;
            break;
        }

        p_half = std::move(ns_out.p);
        m_half = std::move(m_next);
        if (!fp_.acceleration) {
            v_g = std::move(ns_out.v);
            phi_g = std::move(phi_next);
            b_g = std::move(b_out.b);
            continue;
        }

        const std::size_t nb = b_g.coeffs.size();
        std::vector<double> x(nv + nphi + nb), gx(nv + nphi + nb);
        std::copy(v_g.coeffs.begin(), v_g.coeffs.end(), x.begin());
        std::copy(phi_g.coeffs.begin(), phi_g.coeffs.end(), x.begin() + nv);
        std::copy(b_g.coeffs.begin(), b_g.coeffs.end(), x.begin() + nv + nphi);
        std::copy(ns_out.v.coeffs.begin(), ns_out.v.coeffs.end(), gx.begin());
        std::copy(phi_next.coeffs.begin(), phi_next.coeffs.end(), gx.begin() + nv);
        std::copy(b_out.b.coeffs.begin(), b_out.b.coeffs.end(), gx.begin() + nv + nphi);
        const std::vector<double> mixed = anderson.next(x, gx);
        std::copy(mixed.begin(), mixed.begin() + nv, v_g.coeffs.begin());
        std::copy(mixed.begin() + nv, mixed.begin() + nv + nphi, phi_g.coeffs.begin());
        std::copy(mixed.begin() + nv + nphi, mixed.end(), b_g.coeffs.begin());
    }
    if (!converged) throw SubiterationError(state.step_index, "non-convergence", history);

    // Step 2: linear extrapolations to t^{n+1}. The momentum identity is
    // solved for the velocity pointwise at the P2 nodes.
    FEFunction phi_np1(phi_space_);
    for (int j = 0; j < phi_space_.scalar_dofs; ++j)
        phi_np1.coeffs[j] = 2.0 * phi_g.coeffs[j] - state.phi_curr.coeffs[j];

    FEFunction b_np1(b_space_);
    for (std::size_t k = 0; k < b_np1.coeffs.size(); ++k)
        b_np1.coeffs[k] = 2.0 * b_g.coeffs[k] - state.b_curr.coeffs[k];

    FEFunction v_np1(v_space_);
    const int sv = v_space_.scalar_dofs;
    for (int j = 0; j < sv; ++j) {
        const double rho_half = params_.rho(phi_g.coeffs[j]);
        const double rho_n = params_.rho(state.phi_curr.coeffs[j]);
        const double rho_np1 = params_.rho(phi_np1.coeffs[j]);
        for (int c = 0; c < 2; ++c) {
            const int d = c * sv + j;
            v_np1.coeffs[d] =
                (2.0 * rho_half * v_g.coeffs[d] - rho_n * state.v_curr.coeffs[d]) / rho_np1;
        }
    }

    state.v_prev = std::move(state.v_curr);
    state.v_curr = std::move(v_np1);
    state.phi_prev = std::move(state.phi_curr);
    state.phi_curr = std::move(phi_np1);
    state.b_prev = std::move(state.b_curr);
    state.b_curr = std::move(b_np1);
    state.p_curr = std::move(p_half);
    state.m_curr = std::move(m_half);
    state.v_half = std::move(v_g);
    state.phi_half = std::move(phi_g);
    ++state.step_index;
    state.t = state.step_index * dt_;  // avoids incremental accumulation
    return stats;
}

}  // namespace fsi
