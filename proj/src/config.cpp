#include "fsi/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace fsi {

namespace {

using nlohmann::json;

const std::set<std::string> kScenarios = {"mms-1", "mms-2", "contact-1", "contact-2", "custom"};
const std::set<std::string> kMaterialKeys = {"rho_f",   "rho_s",      "mu_f",       "mu_s",
                                             "g_f",     "g_s",        "alpha_f",    "gamma",
                                             "mobility", "delta_stab", "body_force_x",
                                             "body_force_y"};

MeshPattern parse_pattern(const std::string& s) {
    if (s == "union-jack") return MeshPattern::UnionJack;
    if (s == "right-diagonal") return MeshPattern::RightDiagonal;
    throw std::invalid_argument("unknown mesh pattern: " + s);
}

std::string pattern_name(MeshPattern p) {
    return p == MeshPattern::UnionJack ? "union-jack" : "right-diagonal";
}

SolveMethod parse_method(const std::string& s) {
    if (s == "direct-lu") return SolveMethod::DirectLU;
    if (s == "gmres") return SolveMethod::Gmres;
    throw std::invalid_argument("unknown linear solver method: " + s);
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
    const json j = json::parse(text);
    RunConfig c;
    if (j.contains("scenario")) c.scenario = j.at("scenario").get<std::string>();
    if (j.contains("mesh")) {
        const json& m = j.at("mesh");
        if (m.contains("n")) c.mesh_n = m.at("n").get<int>();
        if (m.contains("pattern")) c.pattern = parse_pattern(m.at("pattern").get<std::string>());
    }
    if (j.contains("dt")) c.dt = j.at("dt").get<double>();
    if (j.contains("final_time")) c.final_time = j.at("final_time").get<double>();
    if (j.contains("epsilon")) {
        const json& e = j.at("epsilon");
        if (e.is_string()) {
            if (e.get<std::string>() != "4*dx")
                throw std::invalid_argument("epsilon rule must be \"4*dx\" or a number");
            c.epsilon_rule_4dx = true;
        } else {
            c.epsilon = e.get<double>();
        }
    }
    if (j.contains("fixed_point")) {
        const json& f = j.at("fixed_point");
        if (f.contains("rel_tol")) c.fixed_point.rel_tol = f.at("rel_tol").get<double>();
        if (f.contains("max_iter")) c.fixed_point.max_iter = f.at("max_iter").get<int>();
        if (f.contains("acceleration"))
            c.fixed_point.acceleration = f.at("acceleration").get<bool>();
        if (f.contains("acceleration_depth"))
            c.fixed_point.acceleration_depth = f.at("acceleration_depth").get<int>();
    }
    if (j.contains("linear_solver")) {
        const json& l = j.at("linear_solver");
        if (l.contains("method")) c.linear_solver.method = parse_method(l.at("method"));
        if (l.contains("rel_tol")) c.linear_solver.rel_tol = l.at("rel_tol").get<double>();
        if (l.contains("max_iter")) c.linear_solver.max_iter = l.at("max_iter").get<int>();
        if (l.contains("freeze_preconditioner"))
            c.linear_solver.freeze_preconditioner = l.at("freeze_preconditioner").get<bool>();
    }
    if (j.contains("output")) {
        const json& o = j.at("output");
        if (o.contains("directory")) c.out_dir = o.at("directory").get<std::string>();
        if (o.contains("csv")) c.write_csv = o.at("csv").get<bool>();
        if (o.contains("vtk_stride")) c.vtk_stride = o.at("vtk_stride").get<int>();
        if (o.contains("vtk_refined")) c.vtk_refined = o.at("vtk_refined").get<bool>();
    }
    if (j.contains("init_profile"))
        c.init_profile = j.at("init_profile").get<std::string>() == "tanh" ? InitProfile::Tanh
                                                                           : InitProfile::Sharp;
    if (j.contains("ch_convection"))
        c.ch_convection = j.at("ch_convection").get<std::string>() == "convective"
                              ? ConvectionForm::Convective
                              : ConvectionForm::Divergence;
    if (j.contains("freeze_phi")) c.freeze_phi = j.at("freeze_phi").get<bool>();
    if (j.contains("materials"))
        for (const auto& [key, value] : j.at("materials").items())
            c.material_overrides[key] = value.get<double>();
    return c;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

void RunConfig::apply_override(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("override must be key=value: " + assignment);
    const std::string key = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);
    auto num = [&] { return std::stod(value); };

    if (key == "scenario") {
        scenario = value;
    } else if (key == "mesh.n" || key == "mesh_n") {
        mesh_n = static_cast<int>(num());
    } else if (key == "mesh.pattern") {
        pattern = parse_pattern(value);
    } else if (key == "dt") {
        dt = num();
    } else if (key == "final_time" || key == "T") {
        final_time = num();
    } else if (key == "epsilon") {
        if (value == "4*dx") {
            epsilon_rule_4dx = true;
            epsilon.reset();
        } else {
            epsilon = num();
            epsilon_rule_4dx = false;
        }
    } else if (key == "fixed_point.rel_tol") {
        fixed_point.rel_tol = num();
    } else if (key == "fixed_point.max_iter") {
        fixed_point.max_iter = static_cast<int>(num());
    } else if (key == "fixed_point.acceleration") {
        fixed_point.acceleration = value == "true" || value == "1";
    } else if (key == "fixed_point.acceleration_depth") {
        fixed_point.acceleration_depth = static_cast<int>(num());
    } else if (key == "linear_solver.method") {
        linear_solver.method = parse_method(value);
    } else if (key == "linear_solver.rel_tol") {
        linear_solver.rel_tol = num();
    } else if (key == "linear_solver.max_iter") {
        linear_solver.max_iter = static_cast<int>(num());
    } else if (key == "linear_solver.freeze_preconditioner") {
        linear_solver.freeze_preconditioner = value == "true" || value == "1";
    } else if (key == "output.directory") {
        out_dir = value;
    } else if (key == "output.csv") {
        write_csv = value == "true" || value == "1";
    } else if (key == "output.vtk_stride") {
        vtk_stride = static_cast<int>(num());
    } else if (key == "output.vtk_refined") {
        vtk_refined = value == "true" || value == "1";
    } else if (key == "init_profile") {
        init_profile = value == "tanh" ? InitProfile::Tanh : InitProfile::Sharp;
    } else if (key == "ch_convection") {
        ch_convection =
            value == "convective" ? ConvectionForm::Convective : ConvectionForm::Divergence;
    } else if (key == "freeze_phi") {
        freeze_phi = value == "true" || value == "1";
    } else if (kMaterialKeys.count(key)) {
        material_overrides[key] = num();
    } else {
        throw std::invalid_argument("unknown override key: " + key);
    }
}

std::vector<std::string> RunConfig::validation_errors() const {
    std::vector<std::string> errors;
    if (!kScenarios.count(scenario)) errors.push_back("unknown scenario: " + scenario);
    if (mesh_n < 1) errors.push_back("mesh.n must be >= 1");
    if (!(dt > 0.0)) errors.push_back("dt must be > 0");
    if (!(final_time >= dt)) errors.push_back("final_time must be >= dt");
    if (epsilon && !(*epsilon > 0.0)) errors.push_back("epsilon must be > 0");
    if (!(fixed_point.rel_tol > 0.0)) errors.push_back("fixed_point.rel_tol must be > 0");
    if (fixed_point.max_iter < 1) errors.push_back("fixed_point.max_iter must be >= 1");
    if (!(linear_solver.rel_tol > 0.0)) errors.push_back("linear_solver.rel_tol must be > 0");
    if (linear_solver.max_iter < 1) errors.push_back("linear_solver.max_iter must be >= 1");
    if (vtk_stride < -1) errors.push_back("output.vtk_stride must be >= -1");
    if (out_dir.empty()) errors.push_back("output.directory must not be empty");
    for (const auto& [key, value] : material_overrides) {
        if (!kMaterialKeys.count(key)) errors.push_back("unknown material parameter: " + key);
        (void)value;
    }
    return errors;
}

std::string RunConfig::to_json() const {
    json j;
    j["scenario"] = scenario;
    j["mesh"] = {{"n", mesh_n}, {"pattern", pattern_name(pattern)}};
    j["dt"] = dt;
    j["final_time"] = final_time;
    if (epsilon_rule_4dx)
        j["epsilon"] = "4*dx";
    else if (epsilon)
        j["epsilon"] = *epsilon;
    j["fixed_point"] = {{"rel_tol", fixed_point.rel_tol},
                        {"max_iter", fixed_point.max_iter},
                        {"acceleration", fixed_point.acceleration},
                        {"acceleration_depth", fixed_point.acceleration_depth}};
    j["linear_solver"] = {
        {"method", linear_solver.method == SolveMethod::DirectLU ? "direct-lu" : "gmres"},
        {"rel_tol", linear_solver.rel_tol},
        {"max_iter", linear_solver.max_iter},
        {"freeze_preconditioner", linear_solver.freeze_preconditioner}};
    j["output"] = {{"directory", out_dir},
                   {"csv", write_csv},
                   {"vtk_stride", vtk_stride},
                   {"vtk_refined", vtk_refined}};
    j["init_profile"] = init_profile == InitProfile::Tanh ? "tanh" : "sharp";
    j["ch_convection"] =
        ch_convection == ConvectionForm::Convective ? "convective" : "divergence";
    j["freeze_phi"] = freeze_phi;
    json m = json::object();
    for (const auto& [key, value] : material_overrides) m[key] = value;
    j["materials"] = m;
    return j.dump(2) + "\n";
}

}  // namespace fsi
