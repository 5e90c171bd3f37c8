#include "fsi/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "fsi/vtk.hpp"
#include "json.hpp"

namespace fsi {

namespace {

namespace fs = std::filesystem;

// write-then-rename so interrupted runs never leave truncated files
void atomic_write(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

MaterialParams apply_overrides(MaterialParams p,
                               const std::map<std::string, double>& overrides) {
    for (const auto& [key, value] : overrides) {
        if (key == "rho_f") p.rho_f = value;
        else if (key == "rho_s") p.rho_s = value;
        else if (key == "mu_f") p.mu_f = value;
        else if (key == "mu_s") p.mu_s = value;
        else if (key == "g_f") p.g_f = value;
        else if (key == "g_s") p.g_s = value;
        else if (key == "alpha_f") p.alpha_f = value;
        else if (key == "gamma") p.gamma = value;
        else if (key == "mobility") p.mobility = value;
        else if (key == "delta_stab") p.delta_stab = value;
        else if (key == "body_force_x") p.body_force.x = value;
        else if (key == "body_force_y") p.body_force.y = value;
    }
    return p;
}

std::string error_json(const RunResult& r) {
    nlohmann::json j;
    j["ok"] = false;
    j["failure_kind"] = r.failure_kind;
    j["failure_detail"] = r.failure_detail;
    j["failed_step"] = r.failed_step;
    j["validation"] = r.validation;
    return j.dump(2) + "\n";
}

std::string snapshot_name(int step) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "step_%06d.vtk", step);
    return buf;
}

std::string errors_csv_line(const LevelResult& lr) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << lr.level << ',' << lr.n << ',' << lr.dx << ',' << lr.dt << ',' << lr.epsilon << ','
       << lr.errors.e_v << ',' << lr.errors.e_b << ',' << lr.errors.e_phi << ','
       << (lr.errors.absolute_v ? 1 : 0) << ',' << (lr.errors.absolute_b ? 1 : 0) << ','
       << (lr.errors.absolute_phi ? 1 : 0) << '\n';
    return os.str();
}

}  // namespace

RunResult run(const RunConfig& config) {
    RunResult result;
    result.validation = config.validation_errors();
    if (!result.validation.empty()) {
        result.failure_kind = "validation";
        std::ostringstream os;
        for (const auto& e : result.validation) os << e << "; ";
        result.failure_detail = os.str();
        return result;  // nothing written
    }

    const Mesh mesh = build_uniform(config.mesh_n, config.pattern);
    const double dx = mesh.cell_size;

    const bool is_mms = config.scenario == "mms-1" || config.scenario == "mms-2";
    const bool is_contact = config.scenario == "contact-1" || config.scenario == "contact-2";

    // interface-width resolution: explicit value > 4*dx rule > scenario default
    double epsilon;
    if (config.epsilon)
        epsilon = *config.epsilon;
    else if (config.epsilon_rule_4dx || is_mms)
        epsilon = 4.0 * dx;
    else if (is_contact)
        epsilon = 2.5e-3;
    else
        epsilon = 4.0 * dx;
    result.epsilon_used = epsilon;

    std::optional<MMSCase> mms;
    MaterialParams params;
    SchemeOptions scheme;
    scheme.ch_form = config.ch_convection;
    scheme.freeze_phi = config.freeze_phi;

    if (is_mms) {
        mms = build_mms(config.scenario == "mms-1" ? 1 : 2, epsilon);
        mms->params = apply_overrides(mms->params, config.material_overrides);
        mms->params.epsilon = epsilon;
        params = mms->params;
        scheme.phi_bc = PhiBC::Natural;
    } else if (is_contact) {
        ContactCase contact = build_contact(config.scenario == "contact-1" ? 1 : 2,
                                            config.init_profile);
        contact.params.epsilon = epsilon;
        params = apply_overrides(contact.params, config.material_overrides);
        scheme.phi_bc = PhiBC::DirichletOne;
    } else {  // custom: quiescent fluid state, parameters purely from overrides
        params.epsilon = epsilon;
        params = apply_overrides(params, config.material_overrides);
        scheme.phi_bc = PhiBC::Natural;
    }

    try {
        params.validate();
    } catch (const std::exception& e) {
        result.failure_kind = "validation";
        result.failure_detail = e.what();
        result.validation.push_back(e.what());
        return result;
    }

    const fs::path out_dir(config.out_dir);
    fs::create_directories(out_dir);
    const int steps = static_cast<int>(std::llround(config.final_time / config.dt));

    int vtk_stride = config.vtk_stride;
    if (vtk_stride < 0) vtk_stride = is_contact ? 50 : (is_mms ? 1 : 0);

    Stepper stepper(mesh, params, config.dt, config.fixed_point, scheme,
                    mms ? &*mms : nullptr, config.linear_solver);

    // initial data
    FEFunction v0(stepper.v_space());
    FEFunction phi0(stepper.phi_space());
    FEFunction b0(stepper.b_space());
    if (is_mms) {
        v0 = interpolate_vector(stepper.v_space(), [&](Vec2 p) { return mms->velocity(p, 0.0); });
        phi0 = interpolate(stepper.phi_space(), [&](Vec2 p) { return mms->phi(p, 0.0); });
        b0 = interpolate_symtensor(stepper.b_space(), [&](Vec2 p) { return mms->strain(p, 0.0); });
    } else if (is_contact) {
        const ContactCase contact = build_contact(config.scenario == "contact-1" ? 1 : 2,
                                                  config.init_profile);
        ContactCase scaled = contact;
        scaled.params.epsilon = epsilon;
        phi0 = interpolate(stepper.phi_space(), [&](Vec2 p) { return scaled.initial_phi(p); });
        b0 = interpolate_symtensor(stepper.b_space(), [](Vec2) { return SymTensor2{1, 0, 1}; });
    } else {
        phi0 = interpolate(stepper.phi_space(), [](Vec2) { return 1.0; });
        b0 = interpolate_symtensor(stepper.b_space(), [](Vec2) { return SymTensor2{1, 0, 1}; });
    }

    SimState state = stepper.initial_state(std::move(v0), std::move(phi0), std::move(b0));
    result.records.push_back(record_state(state, stepper));

    auto write_snapshot = [&](int step) {
        std::ostringstream os;
        write_vtk_snapshot(os, mesh,
                           {{"phi", &state.phi_curr},
                            {"v", &state.v_curr},
                            {"p", &state.p_curr},
                            {"m", &state.m_curr},
                            {"B", &state.b_curr}},
                           config.vtk_refined);
        fs::create_directories(out_dir / "snapshots");
        atomic_write(out_dir / "snapshots" / snapshot_name(step), os.str());
    };

    auto flush_outputs = [&]() {
        if (config.write_csv) {
            std::ostringstream os;
            write_diagnostics_csv(result.records, os);
            atomic_write(out_dir / "diagnostics.csv", os.str());
        }
        atomic_write(out_dir / "effective_config.json", config.to_json());
    };

    if (vtk_stride > 0) write_snapshot(0);

    try {
        for (int step = 1; step <= steps; ++step) {
            const StepStats stats = stepper.advance(state);
            result.records.push_back(record_state(state, stepper, stats));
            const DiagnosticsRecord& rec = result.records.back();
            if (!std::isfinite(rec.mass_phi) || !std::isfinite(rec.e_kin)) {
                result.failure_kind = "non-finite";
                result.failure_detail = "solution fields lost finiteness";
                result.failed_step = step;
                break;
            }
            if (vtk_stride > 0 && (step % vtk_stride == 0 || step == steps))
                write_snapshot(step);
            if (step % 25 == 0) flush_outputs();
        }
    } catch (const SubiterationError& e) {
        result.failure_kind = "subiteration-" + e.kind();
        result.failure_detail = e.what();
        result.failed_step = e.step();
    } catch (const LinearSolveError& e) {
        result.failure_kind = "linear-solver";
        result.failure_detail = std::string(e.what()) + " [subproblem: " + e.subproblem() + "]";
        result.failed_step = state.step_index;
    }

    result.ok = result.failure_kind.empty();

    if (result.ok && is_mms) {
        result.final_errors =
            relative_errors(state.v_curr, state.b_curr, state.phi_curr, *mms, state.t);
        std::ostringstream os;
        os << std::setprecision(17);
        os << "# fsi-errors-v1\nlevel,n,dx,dt,epsilon,e_v,e_B,e_phi,abs_v,abs_B,abs_phi\n";
        LevelResult lr;
        lr.level = -1;
        lr.n = config.mesh_n;
        lr.dx = dx;
        lr.dt = config.dt;
        lr.epsilon = epsilon;
        lr.errors = *result.final_errors;
        os << errors_csv_line(lr);
        atomic_write(out_dir / "errors.csv", os.str());
    }

    flush_outputs();
    if (!result.ok) atomic_write(out_dir / "error.json", error_json(result));
    return result;
}

RatesResult mms_rates(int case_id, int level_lo, int level_hi, const RunConfig& base) {
    if (case_id != 1 && case_id != 2)
        throw std::invalid_argument("mms_rates: case must be 1 or 2");
    if (level_lo < 0 || level_hi < level_lo)
        throw std::invalid_argument("mms_rates: invalid level range");

    RatesResult rates;
    const fs::path out_dir(base.out_dir);
    fs::create_directories(out_dir);

    for (int level = level_lo; level <= level_hi; ++level) {
        RunConfig cfg = base;
        cfg.scenario = case_id == 1 ? "mms-1" : "mms-2";
        cfg.mesh_n = 5 * (1 << level);
        cfg.dt = 0.2 / (1 << level);
        cfg.final_time = 0.8;
        cfg.epsilon.reset();
        cfg.epsilon_rule_4dx = true;
        cfg.out_dir = (out_dir / ("level_" + std::to_string(level))).string();
        if (cfg.vtk_stride < 0) cfg.vtk_stride = 0;

        const RunResult r = run(cfg);
        if (!r.ok) {
            rates.failure = "level " + std::to_string(level) + ": " + r.failure_kind + " (" +
                            r.failure_detail + ")";
            break;
        }
        LevelResult lr;
        lr.level = level;
        lr.n = cfg.mesh_n;
        lr.dx = 1.0 / cfg.mesh_n;
        lr.dt = cfg.dt;
        lr.epsilon = r.epsilon_used;
        lr.errors = *r.final_errors;
        rates.levels.push_back(lr);
    }

    std::vector<double> ev, eb, ep;
    for (const LevelResult& lr : rates.levels) {
        ev.push_back(lr.errors.e_v);
        eb.push_back(lr.errors.e_b);
        ep.push_back(lr.errors.e_phi);
    }
    if (rates.levels.size() >= 2) {
        rates.rate_v = convergence_rates(ev);
        rates.rate_b = convergence_rates(eb);
        rates.rate_phi = convergence_rates(ep);
    }

    // preserve whatever part of the table completed
    std::ostringstream errors_os;
    errors_os << std::setprecision(17);
    errors_os << "# fsi-errors-v1\nlevel,n,dx,dt,epsilon,e_v,e_B,e_phi,abs_v,abs_B,abs_phi\n";
    for (const LevelResult& lr : rates.levels) errors_os << errors_csv_line(lr);
    atomic_write(out_dir / "errors.csv", errors_os.str());

    std::ostringstream rates_os;
    rates_os << std::setprecision(17);
    rates_os << "# fsi-rates-v1\nlevels,rate_v,rate_B,rate_phi\n";
    for (std::size_t i = 0; i + 1 < rates.levels.size(); ++i)
        rates_os << rates.levels[i].level << "-" << rates.levels[i + 1].level << ','
                 << rates.rate_v[i] << ',' << rates.rate_b[i] << ',' << rates.rate_phi[i] << '\n';
    atomic_write(out_dir / "rates.csv", rates_os.str());

    rates.ok = rates.failure.empty();
    return rates;
}

}  // namespace fsi
