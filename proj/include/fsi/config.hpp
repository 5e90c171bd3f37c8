#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fsi/linsolve.hpp"
#include "fsi/mesh.hpp"
#include "fsi/scenarios.hpp"
#include "fsi/stepper.hpp"

namespace fsi {

/// Everything a run needs, loadable from a JSON document and overridable
/// from the command line with key=value pairs.
struct RunConfig {
    std::string scenario = "mms-1";  // mms-1 | mms-2 | contact-1 | contact-2 | custom
    int mesh_n = 16;
    MeshPattern pattern = MeshPattern::UnionJack;
    double dt = 0.05;
    double final_time = 0.8;
    // interface width: explicit value, the 4*dx rule, or the scenario default
    std::optional<double> epsilon;
    bool epsilon_rule_4dx = false;
    FixedPointConfig fixed_point;
    LinearSolveOptions linear_solver;
    std::string out_dir = "out";
    bool write_csv = true;
    int vtk_stride = -1;  // -1: scenario default (1 for mms, 50 for contact, 0 for custom)
    bool vtk_refined = false;
    InitProfile init_profile = InitProfile::Sharp;
    ConvectionForm ch_convection = ConvectionForm::Divergence;
    bool freeze_phi = false;
    std::map<std::string, double> material_overrides;

    static RunConfig from_json_text(const std::string& text);
    static RunConfig from_json_file(const std::string& path);

    /// key=value override; dotted keys reach subsections, bare material
    /// parameter names (e.g. delta_stab=0) override the scenario's values.
    void apply_override(const std::string& assignment);

    /// Every violated constraint, empty when the config is runnable.
    std::vector<std::string> validation_errors() const;

    std::string to_json() const;
};

}  // namespace fsi
