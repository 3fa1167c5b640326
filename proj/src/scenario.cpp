#include "hypo/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace hypo {

using nlohmann::json;

namespace {

json mat2_to_json(const Mat2& m) {
    return json::array({json::array({m(0, 0), m(0, 1)}), json::array({m(1, 0), m(1, 1)})});
}

Mat2 mat2_from_json(const json& j) {
    Mat2 m;
    m << j.at(0).at(0).get<double>(), j.at(0).at(1).get<double>(),
        j.at(1).at(0).get<double>(), j.at(1).at(1).get<double>();
    return m;
}

}  // namespace

std::string scenario_to_json_text(const Scenario& s) {
    json j;
    j["name"] = s.name;
    j["box"] = {{"Lx", s.Lx}, {"Ly", s.Ly}, {"nx", s.nx}, {"ny", s.ny}};
    j["modes"] = {{"kx", s.kx}, {"ky", s.ky}, {"lx", s.lx}, {"ly", s.ly}};
    j["material"] = {
        {"shear_modulus", s.material.stored.shear_modulus},
        {"bulk_modulus", s.material.stored.bulk_modulus},
        {"blowup_coeff", s.material.stored.blowup_coeff},
        {"blowup_exponent", s.material.stored.blowup_exponent},
        {"vol_viscosity", s.material.viscous.vol_viscosity},
        {"shear_viscosity", s.material.viscous.shear_viscosity},
        {"growth_exponent", s.material.viscous.growth_exponent},
        {"yield_stress", s.material.plastic.yield_stress},
        {"plastic_viscosity", s.material.plastic.plastic_viscosity},
        {"homogeneity_floor", s.material.plastic.homogeneity_floor},
        {"moreau_yosida_delta", s.material.plastic.moreau_yosida_delta}};
    j["exponents"] = {{"p", s.p_exp}, {"q", s.q_exp}, {"r", s.r_exp}};
    j["regularization"] = {{"nu", s.nu},
                           {"mu_grad", s.mu_grad},
                           {"k_inv", s.k_inv},
                           {"eps_trunc", s.eps_trunc}};
    j["boundary"] = {{"kappa", s.kappa},
                     {"f_wall", s.f_wall},
                     {"f_ramp_time", s.f_ramp_time}};
    j["loads"] = {{"g", {s.g[0], s.g[1]}}, {"rho0", s.rho0}};
    j["initial"] = {{"Fe0", mat2_to_json(s.Fe0)},
                    {"Fe0_perturb_amp", s.Fe0_perturb_amp},
                    {"Fe0_mode_i", s.Fe0_mode_i},
                    {"Fe0_mode_j", s.Fe0_mode_j},
                    {"Fe0_perturb_dir", mat2_to_json(s.Fe0_perturb_dir)},
                    {"track_Fp", s.track_Fp},
                    {"Fp0", mat2_to_json(s.Fp0)}};
    j["prescribed_velocity"] = {{"enabled", s.prescribed_velocity},
                                {"vortex_amp", s.vortex_amp},
                                {"vortex_i", s.vortex_i},
                                {"vortex_j", s.vortex_j}};
    j["time"] = {{"T", s.T}, {"dt", s.dt}, {"out_every", s.out_every}};
    j["variant"] = (s.variant == FlowVariant::eshelby) ? "eshelby" : "alternative";
    j["monitors"] = {{"det_floor", s.det_floor},
                     {"iso_tol", s.iso_tol},
                     {"cfl_limit", s.cfl_limit}};
    j["solver"] = {{"tol_newton", s.tol_newton}, {"max_iter", s.max_iter}};
    j["seed"] = s.seed;
    return j.dump(2);
}

void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write scenario file: " + path);
    os << scenario_to_json_text(s) << "\n";
}

static Scenario scenario_from_json(const json& j) {
    Scenario s;
    s.name = j.value("name", s.name);
    if (j.contains("box")) {
        const auto& b = j["box"];
        s.Lx = b.value("Lx", s.Lx);
        s.Ly = b.value("Ly", s.Ly);
        s.nx = b.value("nx", s.nx);
        s.ny = b.value("ny", s.ny);
    }
    if (j.contains("modes")) {
        const auto& m = j["modes"];
        s.kx = m.value("kx", s.kx);
        s.ky = m.value("ky", s.ky);
        s.lx = m.value("lx", s.lx);
        s.ly = m.value("ly", s.ly);
    }
    if (j.contains("material")) {
        const auto& m = j["material"];
        auto& mat = s.material;
        mat.stored.shear_modulus = m.value("shear_modulus", mat.stored.shear_modulus);
        mat.stored.bulk_modulus = m.value("bulk_modulus", mat.stored.bulk_modulus);
        mat.stored.blowup_coeff = m.value("blowup_coeff", mat.stored.blowup_coeff);
        mat.stored.blowup_exponent = m.value("blowup_exponent", mat.stored.blowup_exponent);
        mat.viscous.vol_viscosity = m.value("vol_viscosity", mat.viscous.vol_viscosity);
        mat.viscous.shear_viscosity = m.value("shear_viscosity", mat.viscous.shear_viscosity);
        mat.viscous.growth_exponent = m.value("growth_exponent", mat.viscous.growth_exponent);
        mat.plastic.yield_stress = m.value("yield_stress", mat.plastic.yield_stress);
        mat.plastic.plastic_viscosity =
            m.value("plastic_viscosity", mat.plastic.plastic_viscosity);
        mat.plastic.homogeneity_floor =
            m.value("homogeneity_floor", mat.plastic.homogeneity_floor);
        mat.plastic.moreau_yosida_delta =
            m.value("moreau_yosida_delta", mat.plastic.moreau_yosida_delta);
    }
    if (j.contains("exponents")) {
        const auto& e = j["exponents"];
        s.p_exp = e.value("p", s.p_exp);
        s.q_exp = e.value("q", s.q_exp);
        s.r_exp = e.value("r", s.r_exp);
    }
    if (j.contains("regularization")) {
        const auto& r = j["regularization"];
        s.nu = r.value("nu", s.nu);
        s.mu_grad = r.value("mu_grad", s.mu_grad);
        s.k_inv = r.value("k_inv", s.k_inv);
        s.eps_trunc = r.value("eps_trunc", s.eps_trunc);
    }
    if (j.contains("boundary")) {
        const auto& b = j["boundary"];
        s.kappa = b.value("kappa", s.kappa);
        if (b.contains("f_wall")) {
            for (int w = 0; w < 4; ++w) s.f_wall[w] = b["f_wall"].at(w).get<double>();
        }
        s.f_ramp_time = b.value("f_ramp_time", s.f_ramp_time);
    }
    if (j.contains("loads")) {
        const auto& l = j["loads"];
        if (l.contains("g")) {
            s.g[0] = l["g"].at(0).get<double>();
            s.g[1] = l["g"].at(1).get<double>();
        }
        s.rho0 = l.value("rho0", s.rho0);
    }
    if (j.contains("initial")) {
        const auto& i = j["initial"];
        if (i.contains("Fe0")) s.Fe0 = mat2_from_json(i["Fe0"]);
        s.Fe0_perturb_amp = i.value("Fe0_perturb_amp", s.Fe0_perturb_amp);
        s.Fe0_mode_i = i.value("Fe0_mode_i", s.Fe0_mode_i);
        s.Fe0_mode_j = i.value("Fe0_mode_j", s.Fe0_mode_j);
        if (i.contains("Fe0_perturb_dir")) s.Fe0_perturb_dir = mat2_from_json(i["Fe0_perturb_dir"]);
        s.track_Fp = i.value("track_Fp", s.track_Fp);
        if (i.contains("Fp0")) s.Fp0 = mat2_from_json(i["Fp0"]);
    }
    if (j.contains("prescribed_velocity")) {
        const auto& p = j["prescribed_velocity"];
        s.prescribed_velocity = p.value("enabled", s.prescribed_velocity);
        s.vortex_amp = p.value("vortex_amp", s.vortex_amp);
        s.vortex_i = p.value("vortex_i", s.vortex_i);
        s.vortex_j = p.value("vortex_j", s.vortex_j);
    }
    if (j.contains("time")) {
        const auto& t = j["time"];
        s.T = t.value("T", s.T);
        s.dt = t.value("dt", s.dt);
        s.out_every = t.value("out_every", s.out_every);
    }
    if (j.contains("variant")) {
        const std::string v = j["variant"].get<std::string>();
        if (v == "eshelby")
            s.variant = FlowVariant::eshelby;
        else if (v == "alternative")
            s.variant = FlowVariant::alternative;
        else
            throw ConfigError("unknown variant: " + v);
    }
    if (j.contains("monitors")) {
        const auto& m = j["monitors"];
        s.det_floor = m.value("det_floor", s.det_floor);
        s.iso_tol = m.value("iso_tol", s.iso_tol);
        s.cfl_limit = m.value("cfl_limit", s.cfl_limit);
    }
    if (j.contains("solver")) {
        const auto& m = j["solver"];
        s.tol_newton = m.value("tol_newton", s.tol_newton);
        s.max_iter = m.value("max_iter", s.max_iter);
    }
    s.seed = j.value("seed", s.seed);
    return s;
}

Scenario builtin_scenario(const std::string& name) {
    Scenario s;
    s.name = name;
    if (name == "rest") {
        s.nx = s.ny = 16;
        s.T = 0.1;
        s.dt = 0.004;
        s.k_inv = 1e-5;
        s.track_Fp = true;
    } else if (name == "shear_creep" || name == "variant_compare") {
        // traction-driven Jeffreys creep: four-wall shear couple
        s.material.stored.shear_modulus = 100.0;
        s.material.stored.bulk_modulus = 300.0;
        s.material.viscous.vol_viscosity = 20.0;
        s.material.viscous.shear_viscosity = 20.0;
        s.material.plastic.yield_stress = 0.0;
        s.material.plastic.plastic_viscosity = 100.0;
        s.material.plastic.homogeneity_floor = 2.0;
        s.nx = s.ny = 24;
        s.kappa = 1.0;
        s.nu = 1e-3;
        s.mu_grad = 1e-3;
        s.k_inv = 1e-5;
        const double f = 0.6;
        s.f_wall = {-f, f, -f, f};  // bottom, top, left, right
        s.f_ramp_time = 0.1;
        s.T = 1.5;
        s.dt = 0.0015;
        s.track_Fp = true;
        s.out_every = 50;
        if (name == "variant_compare") {
            s.nx = s.ny = 16;
            s.T = 0.45;
            s.track_Fp = false;
        }
    } else if (name == "gravity_block") {
        // sub-yield Kelvin-Voigt relaxation to a static state
        s.material.stored.shear_modulus = 100.0;
        s.material.stored.bulk_modulus = 300.0;
        s.material.viscous.vol_viscosity = 20.0;
        s.material.viscous.shear_viscosity = 20.0;
        s.material.plastic.yield_stress = 40.0;
        s.material.plastic.plastic_viscosity = 100.0;
        s.material.plastic.homogeneity_floor = 1.0;
        s.nx = s.ny = 16;
        s.kappa = 2.0;
        s.g = Eigen::Vector2d(0.0, -5.0);
        s.rho0 = 2.0;
        s.T = 4.0;
        s.dt = 0.008;
        s.track_Fp = false;
        s.out_every = 100;
    } else if (name == "rotation_check") {
        // uniformly rotated stress-free initial strain; nothing may move
        const double th = M_PI / 6.0;
        s.Fe0 << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
        s.nx = s.ny = 16;
        s.T = 0.2;
        s.dt = 0.004;
        s.track_Fp = true;
    } else if (name == "mms_transport") {
        // pure transport under a prescribed stream-function vortex
        s.prescribed_velocity = true;
        s.vortex_amp = 0.05;
        s.vortex_i = 1;
        s.vortex_j = 1;
        s.Fe0_perturb_amp = 0.04;
        s.Fe0_mode_i = 1;
        s.Fe0_mode_j = 1;
        s.Fe0_perturb_dir << 1.0, 0.3, 0.2, -0.6;
        s.k_inv = 0.0;
        s.nx = s.ny = 24;
        s.T = 0.5;
        s.dt = 0.002;
        s.track_Fp = false;
    } else {
        throw ConfigError("unknown builtin scenario: " + name);
    }
    return s;
}

std::vector<std::string> builtin_scenario_names() {
    return {"rest", "shear_creep", "gravity_block", "rotation_check", "mms_transport",
            "variant_compare"};
}

Scenario load_scenario(const std::string& path_or_name) {
    std::ifstream is(path_or_name);
    if (!is) {
        for (const auto& n : builtin_scenario_names())
            if (n == path_or_name) return builtin_scenario(n);
        throw ConfigError("no such config file or builtin scenario: " + path_or_name);
    }
    json j;
    try {
        is >> j;
    } catch (const std::exception& e) {
        throw ConfigError("failed to parse " + path_or_name + ": " + e.what());
    }
    return scenario_from_json(j);
}

std::string ValidationReport::to_string() const {
    std::ostringstream ss;
    if (ok()) {
        ss << "scenario valid\n";
        return ss.str();
    }
    for (const auto& i : issues) ss << "[" << i.tag << "] " << i.message << "\n";
    return ss.str();
}

ValidationReport validate(const Scenario& s) {
    ValidationReport r;
    auto fail = [&](const std::string& tag, const std::string& msg) {
        r.issues.push_back({tag, msg});
    };
    const double d = 2.0;

    if (s.Lx <= 0 || s.Ly <= 0) fail("domain", "box lengths must be positive");
    if (s.nx < 4 || s.ny < 4 || s.nx % 2 != 0 || s.ny % 2 != 0)
        fail("grid", "collocation counts must be even and >= 4");
    const int kx = s.velocity_modes_x(), ky = s.velocity_modes_y();
    const int lx = s.tensor_modes_x(), ly = s.tensor_modes_y();
    if (kx < 1 || ky < 1 || lx < 1 || ly < 1) fail("grid", "mode caps must be >= 1");
    if (kx > 2 * s.nx / 3 - 1 || lx > 2 * s.nx / 3 - 1 || ky > 2 * s.ny / 3 - 1 ||
        ly > 2 * s.ny / 3 - 1)
        fail("dealiasing", "mode caps exceed the 2/3-rule limit of the grid");

    if (!(std::min(s.p_exp, s.q_exp) > d))
        fail("min(p,q)>d", "gradient exponents must exceed the dimension (Prop. hypothesis)");
    if (!(s.r_exp > d)) fail("r>d", "elastic-strain gradient exponent must exceed d");
    const double hk = s.r_exp * d / (s.r_exp - d);
    if (!(s.material.stored.blowup_exponent > hk))
        fail("varkappa>rd/(r-d)", "blow-up exponent too small for the determinant bound: need > " +
                                      std::to_string(hk));

    if (!(s.material.stored.shear_modulus > 0) || !(s.material.stored.bulk_modulus > 0))
        fail("stored-energy", "elastic moduli must be positive");
    if (!(s.material.stored.blowup_coeff > 0))
        fail("phi>=eps/det^vk", "blow-up coefficient must be positive");

    if (s.material.viscous.vol_viscosity < 0 || s.material.viscous.shear_viscosity < 0 ||
        s.material.viscous.vol_viscosity + s.material.viscous.shear_viscosity <= 0)
        fail("xi-convex", "viscous moduli must be nonnegative and not both zero");
    if (!(s.material.viscous.growth_exponent <= s.p_exp - 1))
        fail("xi-growth", "viscous growth exponent must satisfy p_growth <= p-1");

    const auto& pl = s.material.plastic;
    if (!(pl.homogeneity_floor >= 1)) fail("zeta-q0>=1", "homogeneity floor must be >= 1");
    if (pl.homogeneity_floor < 2 && !(pl.yield_stress > 0))
        fail("zeta-coercive", "q0 < 2 requires a positive yield stress");
    if (pl.homogeneity_floor >= 2 && !(pl.plastic_viscosity > 0))
        fail("zeta-coercive", "q0 = 2 requires a positive plastic viscosity");
    if (!(pl.moreau_yosida_delta > 0)) fail("smoothing", "Moreau-Yosida delta must be positive");
    if (pl.yield_stress < 0 || pl.plastic_viscosity < 0)
        fail("zeta-convex", "plastic potential coefficients must be nonnegative");

    if (!(s.kappa > 0)) fail("ess-inf-kappa>0", "boundary friction must be strictly positive");
    if (!(s.nu > 0)) fail("nu>0", "hyperstress coefficient must be strictly positive");
    if (!(s.mu_grad > 0)) fail("mu>0", "plastic gradient coefficient must be strictly positive");
    if (s.k_inv < 0) fail("k-regularizer", "1/k must be nonnegative");
    if (!(s.eps_trunc > 0)) fail("eps-truncation", "truncation level must be positive");

    if (!(s.rho0 > 0)) fail("ess-inf-rho0>0", "referential density must be strictly positive");

    // nodal determinant of the initial elastic strain
    {
        double mind = std::numeric_limits<double>::infinity();
        for (int ix = 0; ix < s.nx; ++ix)
            for (int iy = 0; iy < s.ny; ++iy) {
                const double x = (ix + 0.5) * s.Lx / s.nx;
                const double y = (iy + 0.5) * s.Ly / s.ny;
                const double bump = s.Fe0_perturb_amp *
                                    std::cos(s.Fe0_mode_i * M_PI * x / s.Lx) *
                                    std::cos(s.Fe0_mode_j * M_PI * y / s.Ly);
                const Mat2 F = s.Fe0 + bump * s.Fe0_perturb_dir;
                mind = std::min(mind, F(0, 0) * F(1, 1) - F(0, 1) * F(1, 0));
            }
        if (!(mind >= s.det_floor))
            fail("ess-inf-det-Fe0>0", "initial elastic strain dips below the determinant floor: "
                                      "min det = " + std::to_string(mind));
    }
    if (s.track_Fp) {
        const double dFp = s.Fp0(0, 0) * s.Fp0(1, 1) - s.Fp0(0, 1) * s.Fp0(1, 0);
        if (std::abs(dFp - 1.0) > 1e-12)
            fail("det-Fp0=1", "initial plastic distortion must be isochoric: det = " +
                                  std::to_string(dFp));
    }

    if (!(s.T > 0) || !(s.dt > 0) || s.dt > s.T) fail("time", "need 0 < dt <= T");
    if (s.out_every < 1) fail("time", "output cadence must be >= 1 step");
    if (!(s.det_floor > 0) || !(s.iso_tol > 0) || !(s.cfl_limit > 0))
        fail("monitors", "monitor thresholds must be positive");
    if (!(s.tol_newton > 0) || s.max_iter < 1) fail("solver", "bad solver settings");

    if (s.prescribed_velocity) {
        if (s.vortex_i < 1 || s.vortex_i > kx || s.vortex_j < 1 || s.vortex_j > ky)
            fail("prescribed-velocity", "vortex mode outside the velocity space");
    }
    if (s.Fe0_perturb_amp != 0.0 && (s.Fe0_mode_i > lx || s.Fe0_mode_j > ly))
        fail("initial", "Fe0 perturbation mode outside the tensor space");
    return r;
}

}  // namespace hypo
