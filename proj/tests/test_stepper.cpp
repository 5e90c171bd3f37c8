#include <cmath>

#include "doctest.h"
#include "fsi/diagnostics.hpp"
#include "fsi/stepper.hpp"

using namespace fsi;

namespace {

struct EquilibriumFixture {
    Mesh mesh = build_uniform(6, MeshPattern::UnionJack);
    MMSCase mms = build_mms(1, 0.3);
};

}  // namespace

TEST_CASE("extrapolated guesses") {
    EquilibriumFixture fx;
    Stepper stepper(fx.mesh, fx.mms.params, 0.01);
    const FESpace& s = stepper.phi_space();

    SUBCASE("constant sequence reproduces itself") {
        const FEFunction a = interpolate(s, [](Vec2) { return 0.7; });
        const FEFunction g = Stepper::extrapolate_guess(a, a);
        for (double c : g.coeffs) CHECK(c == doctest::Approx(0.7).epsilon(1e-15));
    }
    SUBCASE("3/2 curr - 1/2 prev") {
        const FEFunction curr = interpolate(s, [](Vec2) { return 2.0; });
        const FEFunction prev = interpolate(s, [](Vec2) { return 0.0; });
        const FEFunction g = Stepper::extrapolate_guess(curr, prev);
        for (double c : g.coeffs) CHECK(c == doctest::Approx(3.0).epsilon(1e-15));
    }
    SUBCASE("exact for fields linear in time") {
        auto field = [&](double t) {
            return interpolate(s, [t](Vec2 p) { return (1.0 + 2.0 * t) * p.x + t; });
        };
        const FEFunction g = Stepper::extrapolate_guess(field(0.2), field(0.1));
        const FEFunction want = field(0.25);  // half step beyond t = 0.2 with dt = 0.1
        for (std::size_t k = 0; k < g.coeffs.size(); ++k)
            CHECK(g.coeffs[k] == doctest::Approx(want.coeffs[k]).epsilon(1e-13));
    }
}

TEST_CASE("constant equilibrium states are fixed points of the step") {
    EquilibriumFixture fx;
    MaterialParams params = fx.mms.params;  // f = 0
    for (const double well : {1.0, -1.0}) {
        Stepper stepper(fx.mesh, params, 0.01);
        FEFunction v0(stepper.v_space());
        const FEFunction phi0 = interpolate(stepper.phi_space(), [&](Vec2) { return well; });
        const FEFunction b0 = interpolate_symtensor(stepper.b_space(),
                                                    [](Vec2) { return SymTensor2{1, 0, 1}; });
        SimState state = stepper.initial_state(v0, phi0, b0);
        for (int step = 0; step < 5; ++step) {
            const StepStats stats = stepper.advance(state);
            CHECK(stats.subiters == 1);
        }
        for (double c : state.v_curr.coeffs) CHECK(std::abs(c) < 1e-11);
        for (int j = 0; j < stepper.phi_space().scalar_dofs; ++j)
            CHECK(std::abs(state.phi_curr.coeffs[j] - well) < 1e-11);
        const int nb = stepper.b_space().scalar_dofs;
        for (int j = 0; j < nb; ++j) {
            CHECK(std::abs(state.b_curr.coeffs[j] - 1.0) < 1e-11);
            CHECK(std::abs(state.b_curr.coeffs[nb + j]) < 1e-11);
            CHECK(std::abs(state.b_curr.coeffs[2 * nb + j] - 1.0) < 1e-11);
        }
        CHECK(state.t == doctest::Approx(0.05).epsilon(1e-15));
    }
}

TEST_CASE("startup guesses equal the initial data") {
    EquilibriumFixture fx;
    Stepper stepper(fx.mesh, fx.mms.params, 0.01);
    const FEFunction phi0 =
        interpolate(stepper.phi_space(), [](Vec2 p) { return 0.2 * p.x - 0.5; });
    FEFunction v0(stepper.v_space());
    const FEFunction b0 =
        interpolate_symtensor(stepper.b_space(), [](Vec2) { return SymTensor2{1, 0, 1}; });
    const SimState state = stepper.initial_state(v0, phi0, b0);
    const FEFunction g = Stepper::extrapolate_guess(state.phi_curr, state.phi_prev);
    for (std::size_t k = 0; k < g.coeffs.size(); ++k)
        CHECK(g.coeffs[k] == doctest::Approx(phi0.coeffs[k]).epsilon(1e-15));
}

TEST_CASE("time is n * dt, not accumulated") {
    EquilibriumFixture fx;
    Stepper stepper(fx.mesh, fx.mms.params, 0.1);
    FEFunction v0(stepper.v_space());
    const FEFunction phi0 = interpolate(stepper.phi_space(), [](Vec2) { return 1.0; });
    const FEFunction b0 =
        interpolate_symtensor(stepper.b_space(), [](Vec2) { return SymTensor2{1, 0, 1}; });
    SimState state = stepper.initial_state(v0, phi0, b0);
    for (int step = 0; step < 10; ++step) stepper.advance(state);
    CHECK(state.t == 10 * 0.1);  // bitwise: computed as step_index * dt
}

TEST_CASE("momentum extrapolation identity holds pointwise at the dofs") {
    // rho_f != rho_s exercises the division in the velocity recovery
    Mesh mesh = build_uniform(4, MeshPattern::UnionJack);
    MMSCase mms = build_mms(1, 0.4);
    MaterialParams params = mms.params;
    params.rho_s = 3.0;
    params.body_force = {0.0, -0.5};
    Stepper stepper(mesh, params, 0.02, {}, {}, nullptr);
    FEFunction v0(stepper.v_space());
    const FEFunction phi0 =
        interpolate(stepper.phi_space(), [](Vec2 p) { return 0.8 * std::sin(3.0 * p.x) * p.y; });
    const FEFunction b0 =
        interpolate_symtensor(stepper.b_space(), [](Vec2) { return SymTensor2{1, 0, 1}; });
    SimState state = stepper.initial_state(v0, phi0, b0);
    stepper.advance(state);

    const int sv = stepper.v_space().scalar_dofs;
    for (int j = 0; j < sv; ++j) {
        const double rho_np1 = params.rho(state.phi_curr.coeffs[j]);
        const double rho_half = params.rho(state.phi_half.coeffs[j]);
        const double rho_n = params.rho(state.phi_prev.coeffs[j]);
        for (int c = 0; c < 2; ++c) {
            const int d = c * sv + j;
            const double lhs = rho_np1 * state.v_curr.coeffs[d];
            const double rhs =
                2.0 * rho_half * state.v_half.coeffs[d] - rho_n * state.v_prev.coeffs[d];
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
    }
}

TEST_CASE("tightening the tolerance changes the converged fields within the old one") {
    Mesh mesh = build_uniform(5, MeshPattern::UnionJack);
    const MMSCase mms = build_mms(1, 0.8);
    auto run_one_step = [&](double tol) {
        FixedPointConfig fp;
        fp.rel_tol = tol;
        Stepper stepper(mesh, mms.params, 0.2, fp, {}, &mms);
        FEFunction v0(stepper.v_space());
        FEFunction phi0(stepper.phi_space());
        FEFunction b0(stepper.b_space());
        SimState state = stepper.initial_state(v0, phi0, b0);
        stepper.advance(state);
        return state;
    };
    const double tol = 1e-6;
    const SimState coarse = run_one_step(tol);
    const SimState fine = run_one_step(tol / 2.0);
    const double denom = l2_norm(fine.v_curr) + 1e-14;
    CHECK(l2_diff(coarse.v_curr, fine.v_curr) / denom < tol);
}

TEST_CASE("non-convergence carries the residual history") {
    Mesh mesh = build_uniform(4, MeshPattern::UnionJack);
    const MMSCase mms = build_mms(1, 1.0);
    FixedPointConfig fp;
    fp.rel_tol = 1e-30;  // unreachable
    fp.max_iter = 3;
    Stepper stepper(mesh, mms.params, 0.1, fp, {}, &mms);
    FEFunction v0(stepper.v_space());
    FEFunction phi0(stepper.phi_space());
    FEFunction b0(stepper.b_space());
    SimState state = stepper.initial_state(v0, phi0, b0);
    try {
        stepper.advance(state);
        FAIL("expected SubiterationError");
    } catch (const SubiterationError& e) {
        CHECK(e.kind() == "non-convergence");
        CHECK(e.residual_history().size() == 3);
        CHECK(e.step() == 0);
    }
}

TEST_CASE("frozen phase stays bitwise fixed") {
    EquilibriumFixture fx;
    MaterialParams params = fx.mms.params;
    SchemeOptions opts;
    opts.freeze_phi = true;
    Stepper stepper(fx.mesh, params, 0.01, {}, opts);
    FEFunction v0 = interpolate_vector(stepper.v_space(), [](Vec2 p) {
        const double bx = p.x * p.x * (1 - p.x) * (1 - p.x);
        const double by = p.y * p.y * (1 - p.y) * (1 - p.y);
        (void)bx;
        return Vec2{0.05 * by, 0.05 * p.x};
    });
    const FEFunction phi0 = interpolate(stepper.phi_space(), [](Vec2 p) { return 0.3 * p.x; });
    const FEFunction b0 =
        interpolate_symtensor(stepper.b_space(), [](Vec2) { return SymTensor2{1, 0, 1}; });
    SimState state = stepper.initial_state(v0, phi0, b0);
    stepper.advance(state);
    stepper.advance(state);
    for (std::size_t k = 0; k < phi0.coeffs.size(); ++k)
        CHECK(state.phi_curr.coeffs[k] == phi0.coeffs[k]);
}

TEST_CASE("diagnostics of rest states") {
    EquilibriumFixture fx;
    MaterialParams params = fx.mms.params;
    params.g_s = 2.5;
    Stepper stepper(fx.mesh, params, 0.01);
    FEFunction v0(stepper.v_space());
    const FEFunction b0 =
        interpolate_symtensor(stepper.b_space(), [](Vec2) { return SymTensor2{1, 0, 1}; });

    SUBCASE("all-solid rest state") {
        const FEFunction phi0 = interpolate(stepper.phi_space(), [](Vec2) { return -1.0; });
        const SimState state = stepper.initial_state(v0, phi0, b0);
        const DiagnosticsRecord r = record_state(state, stepper);
        CHECK(r.e_kin == 0.0);
        // tr I = 2, so E_elastic = G_S |Omega|
        CHECK(r.e_elastic == doctest::Approx(params.g_s).epsilon(1e-13));
        CHECK(r.d_visc == 0.0);
        CHECK(r.d_mob == 0.0);
        CHECK(r.e_mix == doctest::Approx(0.0).epsilon(1e-13));
        CHECK(r.r_relax == doctest::Approx(0.0).epsilon(1e-13));
        CHECK(r.mass_phi == doctest::Approx(-1.0).epsilon(1e-13));
        CHECK(r.min_eig_b == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(!r.clamp_active);
    }
    SUBCASE("all-fluid state has no mixing energy") {
        const FEFunction phi0 = interpolate(stepper.phi_space(), [](Vec2) { return 1.0; });
        const SimState state = stepper.initial_state(v0, phi0, b0);
        const DiagnosticsRecord r = record_state(state, stepper);
        CHECK(r.e_mix == doctest::Approx(0.0).epsilon(1e-13));
        CHECK(r.r_relax == doctest::Approx(params.alpha_f).epsilon(1e-12));
    }
}

TEST_CASE("energy balance residual vanishes in equilibrium") {
    EquilibriumFixture fx;
    Stepper stepper(fx.mesh, fx.mms.params, 0.01);
    FEFunction v0(stepper.v_space());
    const FEFunction phi0 = interpolate(stepper.phi_space(), [](Vec2) { return 1.0; });
    const FEFunction b0 =
        interpolate_symtensor(stepper.b_space(), [](Vec2) { return SymTensor2{1, 0, 1}; });
    SimState state = stepper.initial_state(v0, phi0, b0);
    const DiagnosticsRecord r0 = record_state(state, stepper);
    stepper.advance(state);
    const DiagnosticsRecord r1 = record_state(state, stepper);
    // the relaxation sink of tr B = 2 cancels the alpha_F source exactly
    CHECK(std::abs(energy_balance_residual(r0, r1, 0.01, fx.mms.params.alpha_f, r0.mass_phi)) <
          1e-9);
}

TEST_CASE("convergence rate helper") {
    CHECK(convergence_rates({4.0, 1.0})[0] == doctest::Approx(2.0));
    CHECK(convergence_rates({1.0, 1.0})[0] == doctest::Approx(0.0));
    const auto r = convergence_rates({8.0, 2.0, 1.0});
    CHECK(r.size() == 2);
    CHECK(r[0] == doctest::Approx(2.0));
    CHECK(r[1] == doctest::Approx(1.0));
    // scaling invariance
    const auto s = convergence_rates({0.8, 0.2, 0.1});
    CHECK(s[0] == doctest::Approx(2.0));
    CHECK(s[1] == doctest::Approx(1.0));
    CHECK(std::isnan(convergence_rates({1.0, 0.0})[0]));
    CHECK_THROWS(convergence_rates({1.0}));
}

TEST_CASE("relative errors flag a vanishing reference") {
    Mesh mesh = build_uniform(4, MeshPattern::UnionJack);
    const MMSCase mms = build_mms(1, 0.4);
    const FESpace vs = FESpace::create(mesh, 2, ValueKind::Vector2);
    const FESpace ps = FESpace::create(mesh, 2, ValueKind::Scalar);
    const FESpace bs = FESpace::create(mesh, 1, ValueKind::SymTensor2);
    FEFunction v(vs), phi(ps), b(bs);
    v.coeffs[0] = 1e-3;
    // all references vanish at t = 0 (they are proportional to sin(pi t))
    const RelativeErrors e = relative_errors(v, b, phi, mms, 0.0);
    CHECK(e.absolute_v);
    CHECK(e.absolute_b);
    CHECK(e.absolute_phi);
    CHECK(e.e_v > 0.0);
    CHECK(e.e_phi == 0.0);
}

TEST_CASE("interpolant error bounds the scheme error from below") {
    Mesh mesh = build_uniform(10, MeshPattern::UnionJack);
    const MMSCase mms = build_mms(1, 4.0 / 10.0);
    const FESpace vs = FESpace::create(mesh, 2, ValueKind::Vector2);
    const FESpace ps = FESpace::create(mesh, 2, ValueKind::Scalar);
    const FESpace bs = FESpace::create(mesh, 1, ValueKind::SymTensor2);
    const double t = 0.8;
    const FEFunction vi =
        interpolate_vector(vs, [&](Vec2 p) { return mms.velocity(p, t); });
    const FEFunction phii = interpolate(ps, [&](Vec2 p) { return mms.phi(p, t); });
    const FEFunction bi =
        interpolate_symtensor(bs, [&](Vec2 p) { return mms.strain(p, t); });
    const RelativeErrors interp = relative_errors(vi, bi, phii, mms, t);

    // the full scheme on the same mesh
    FixedPointConfig fp;
    Stepper stepper(mesh, mms.params, 0.1, fp, {}, &mms);
    FEFunction v0(stepper.v_space());
    FEFunction phi0(stepper.phi_space());
    FEFunction b0(stepper.b_space());
    SimState state = stepper.initial_state(v0, phi0, b0);
    for (int s = 0; s < 8; ++s) stepper.advance(state);
    const RelativeErrors scheme =
        relative_errors(state.v_curr, state.b_curr, state.phi_curr, mms, t);

    CHECK(interp.e_v < scheme.e_v);
    CHECK(interp.e_b < scheme.e_b);
    CHECK(interp.e_phi < scheme.e_phi);
}

TEST_CASE("energy balance residual is bounded and decays under refinement") {
    auto max_residual = [](int level) {
        const Mesh mesh = build_uniform(5 * (1 << level), MeshPattern::UnionJack);
        const MMSCase mms = build_mms(1, 4.0 / (5 * (1 << level)));
        const double dt = 0.2 / (1 << level);
        Stepper stepper(mesh, mms.params, dt, {}, {}, &mms);
        FEFunction v0(stepper.v_space());
        FEFunction phi0(stepper.phi_space());
        FEFunction b0(stepper.b_space());
        SimState state = stepper.initial_state(v0, phi0, b0);
        std::vector<DiagnosticsRecord> records{record_state(state, stepper)};
        const int steps = static_cast<int>(std::lround(0.8 / dt));
        for (int s = 0; s < steps; ++s) {
            stepper.advance(state);
            records.push_back(record_state(state, stepper));
        }
        double worst = 0.0;
        for (std::size_t k = 0; k + 1 < records.size(); ++k)
            worst = std::max(worst,
                             std::abs(energy_balance_residual(records[k], records[k + 1], dt,
                                                              mms.params.alpha_f,
                                                              records.front().mass_phi)));
        return worst;
    };
    const double coarse = max_residual(0);
    const double fine = max_residual(1);
    CHECK(coarse < 1.0);  // bounded
    CHECK(fine < 0.6 * coarse);
}
