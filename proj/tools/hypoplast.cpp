// Command-line front end: validate configs, run scenarios, sweep parameter
// grids, and regenerate summaries from stored series.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hypo/runner.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

int even_grid_for_modes(int m) {
    int n = (3 * (m + 1) + 1) / 2;
    if (n % 2 != 0) ++n;
    return std::max(n, 4);
}

void apply_overrides(hypo::Scenario& s, double dt, int steps, const std::string& resolution,
                     const std::string& variant, long seed) {
    if (dt > 0) s.dt = dt;
    if (steps > 0) s.T = s.dt * steps;
    if (!resolution.empty()) {
        const auto v = parse_list(resolution);
        if (v.size() != 4) throw hypo::ConfigError("--resolution wants KX,KY,LX,LY");
        s.kx = static_cast<int>(v[0]);
        s.ky = static_cast<int>(v[1]);
        s.lx = static_cast<int>(v[2]);
        s.ly = static_cast<int>(v[3]);
        const int m = std::max({s.kx, s.ky, s.lx, s.ly});
        s.nx = s.ny = even_grid_for_modes(m);
    }
    if (!variant.empty()) {
        if (variant == "eshelby")
            s.variant = hypo::FlowVariant::eshelby;
        else if (variant == "alternative")
            s.variant = hypo::FlowVariant::alternative;
        else
            throw hypo::ConfigError("--variant must be eshelby or alternative");
    }
    if (seed >= 0) s.seed = static_cast<unsigned>(seed);
}

int do_run(const hypo::Scenario& s, const std::string& out_dir,
           const std::string& restart) {
    hypo::RunOptions opt;
    opt.out_dir = out_dir;
    if (!restart.empty()) opt.restart_from = restart;
    const hypo::RunResult r = hypo::run_scenario(s, opt);
    if (r.exit_status != 0) {
        std::cerr << "run failed (" << r.exit_status << "): " << r.failure << "\n";
    } else {
        std::cout << "completed " << r.history.size() << " rows, t = "
                  << (r.history.empty() ? 0.0 : r.history.back().t) << "\n";
        std::cout << "min det Fe " << r.apriori.min_det << ", truncations "
                  << r.apriori.trunc_total << ", gronwall "
                  << (r.apriori.gronwall_ok ? "ok" : "VIOLATED") << "\n";
    }
    return r.exit_status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"desk-scale Eulerian finite-strain hypoplasticity simulator"};
    app.require_subcommand(1);

    std::string config, out_dir, resolution, variant, restart;
    double dt = -1;
    int steps = -1;
    long seed = -1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config, "scenario config file or builtin name")->required();
        cmd->add_option("--dt", dt, "time step override");
        cmd->add_option("--steps", steps, "number of steps override (sets T = dt*steps)");
        cmd->add_option("--resolution", resolution, "mode caps KX,KY,LX,LY (grid follows 2/3 rule)");
        cmd->add_option("--variant", variant, "flow-rule variant: eshelby | alternative");
        cmd->add_option("--seed", seed, "RNG seed for certificate sampling");
    };

    auto* cmd_validate = app.add_subcommand("validate", "check a scenario against the data qualification");
    cmd_validate->add_option("--config", config, "scenario config file or builtin name")->required();

    auto* cmd_run = app.add_subcommand("run", "run a scenario");
    add_common(cmd_run);
    cmd_run->add_option("--out", out_dir, "output directory");
    cmd_run->add_option("--restart", restart, "checkpoint file to resume from");

    std::string sweep_dt, sweep_invk, sweep_delta;
    auto* cmd_sweep = app.add_subcommand("sweep", "run a parameter grid");
    add_common(cmd_sweep);
    cmd_sweep->add_option("--out", out_dir, "output directory")->required();
    cmd_sweep->add_option("--sweep-dt", sweep_dt, "comma list of dt values");
    cmd_sweep->add_option("--sweep-invk", sweep_invk, "comma list of 1/k values");
    cmd_sweep->add_option("--sweep-delta", sweep_delta, "comma list of Moreau-Yosida deltas");

    std::string report_dir;
    auto* cmd_report = app.add_subcommand("report", "regenerate a summary from stored series");
    cmd_report->add_option("--out", report_dir, "run directory holding series.csv")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_validate->parsed()) {
            const hypo::Scenario s = hypo::load_scenario(config);
            const hypo::ValidationReport r = hypo::validate(s);
            std::cout << r.to_string();
            return r.ok() ? 0 : 2;
        }
        if (cmd_run->parsed()) {
            hypo::Scenario s = hypo::load_scenario(config);
            apply_overrides(s, dt, steps, resolution, variant, seed);
            return do_run(s, out_dir, restart);
        }
        if (cmd_sweep->parsed()) {
            hypo::Scenario base = hypo::load_scenario(config);
            apply_overrides(base, dt, steps, resolution, variant, seed);
            fs::create_directories(out_dir);
            json table = json::array();
            auto one = [&](const std::string& tag, hypo::Scenario sc) {
                const std::string dir = (fs::path(out_dir) / tag).string();
                const int rc = do_run(sc, dir, "");
                std::ifstream f(fs::path(dir) / "summary.json");
                json summary;
                if (f) f >> summary;
                summary["tag"] = tag;
                summary["rc"] = rc;
                table.push_back(summary);
            };
            bool any = false;
            for (double v : sweep_dt.empty() ? std::vector<double>{} : parse_list(sweep_dt)) {
                hypo::Scenario sc = base;
                sc.dt = v;
                one("dt_" + std::to_string(v), sc);
                any = true;
            }
            for (double v : sweep_invk.empty() ? std::vector<double>{} : parse_list(sweep_invk)) {
                hypo::Scenario sc = base;
                sc.k_inv = v;
                one("invk_" + std::to_string(v), sc);
                any = true;
            }
            for (double v : sweep_delta.empty() ? std::vector<double>{} : parse_list(sweep_delta)) {
                hypo::Scenario sc = base;
                sc.material.plastic.moreau_yosida_delta = v;
                one("delta_" + std::to_string(v), sc);
                any = true;
            }
            if (!any) {
                std::cerr << "sweep: no parameter list given\n";
                return 1;
            }
            std::ofstream(fs::path(out_dir) / "sweep_summary.json") << table.dump(2) << "\n";
            return 0;
        }
        if (cmd_report->parsed()) {
            std::ifstream f(fs::path(report_dir) / "summary.json");
            if (!f) {
                std::cerr << "no summary.json under " << report_dir << "\n";
                return 1;
            }
            json summary;
            f >> summary;
            std::cout << summary.dump(2) << "\n";
            // rebuild the headline numbers from the raw series
            std::ifstream csv(fs::path(report_dir) / "series.csv");
            if (csv) {
                std::string line;
                std::getline(csv, line);  // header
                int rows = 0;
                double max_resid = 0.0;
                while (std::getline(csv, line)) {
                    ++rows;
                    std::stringstream ss(line);
                    std::string tok;
                    for (int c = 0; c <= 15 && std::getline(ss, tok, ','); ++c)
                        if (c == 15 && tok != "nan" && tok != "-nan")
                            max_resid = std::max(max_resid, std::abs(std::stod(tok)));
                }
                std::cout << "series rows: " << rows
                          << ", max |balance residual|: " << max_resid << "\n";
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
