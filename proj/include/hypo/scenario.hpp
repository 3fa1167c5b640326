#pragma once

#include <string>
#include <vector>

#include "hypo/materials.hpp"
#include "hypo/tensor.hpp"

// Scenario definitions and the data-qualification checks that gate a run.
// Configs are JSON files whose keys mirror the fields below; the shipped
// scenarios are also available as built-in presets by name.

namespace hypo {

struct Scenario {
    std::string name = "custom";

    // box and resolution
    double Lx = 1.0, Ly = 1.0;  // m
    int nx = 24, ny = 24;       // collocation points
    int kx = -1, ky = -1;       // velocity mode caps (-1: 2/3-rule default)
    int lx = -1, ly = -1;       // tensor mode caps

    Material material;
    double p_exp = 4.0, q_exp = 4.0, r_exp = 4.0;
    double nu = 1e-3;       // hyperstress coefficient
    double mu_grad = 1e-3;  // plastic gradient coefficient
    double k_inv = 1e-5;    // transport regularizer weight 1/k
    double eps_trunc = 1e-3;
    double kappa = 1.0;  // boundary friction, > 0

    // loads
    Eigen::Vector2d g{0.0, 0.0};                      // m/s^2
    std::array<double, 4> f_wall{0.0, 0.0, 0.0, 0.0}; // Pa, tangential, per wall
    double f_ramp_time = 0.0;                         // linear ramp-in of f
    double rho0 = 1.0;                                // kg/m^3

    // initial elastic strain: uniform base plus an optional single-mode bump
    Mat2 Fe0 = Mat2::Identity();
    double Fe0_perturb_amp = 0.0;
    int Fe0_mode_i = 1, Fe0_mode_j = 1;
    Mat2 Fe0_perturb_dir = Mat2::Zero();

    bool track_Fp = true;
    Mat2 Fp0 = Mat2::Identity();

    // prescribed stream-function velocity instead of the momentum solve
    // (transport verification runs)
    bool prescribed_velocity = false;
    double vortex_amp = 0.0;
    int vortex_i = 1, vortex_j = 1;

    double T = 1.0;       // s
    double dt = 1e-3;     // s
    int out_every = 20;   // snapshot/checkpoint cadence in steps

    FlowVariant variant = FlowVariant::eshelby;
    double det_floor = 1e-3, iso_tol = 1e-6, cfl_limit = 0.9;
    double tol_newton = 1e-8;
    int max_iter = 60;
    unsigned seed = 12345;

    int velocity_modes_x() const { return kx > 0 ? kx : 2 * nx / 3 - 1; }
    int velocity_modes_y() const { return ky > 0 ? ky : 2 * ny / 3 - 1; }
    int tensor_modes_x() const { return lx > 0 ? lx : 2 * nx / 3 - 1; }
    int tensor_modes_y() const { return ly > 0 ? ly : 2 * ny / 3 - 1; }
    int n_steps() const { return static_cast<int>(std::llround(T / dt)); }
};

/// Built-in presets: rest, shear_creep, gravity_block, rotation_check,
/// mms_transport, variant_compare.
Scenario builtin_scenario(const std::string& name);
std::vector<std::string> builtin_scenario_names();

Scenario load_scenario(const std::string& path_or_name);
std::string scenario_to_json_text(const Scenario& s);
void save_scenario(const Scenario& s, const std::string& path);

struct ValidationIssue {
    std::string tag;      // violated assumption, e.g. "min(p,q)>d"
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
    std::string to_string() const;
};

/// Data-qualification gate: every run refuses to start unless this passes.
ValidationReport validate(const Scenario& s);

}  // namespace hypo
