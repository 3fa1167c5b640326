#pragma once

#include <optional>
#include <string>

#include "hypo/diagnostics.hpp"
#include "hypo/scenario.hpp"
#include "hypo/snapshot_io.hpp"

// Run orchestration: the staggered quasistatic step
//   (1) momentum solve for v, (2) plastic-rate solve for Lp,
//   (3) explicit transport of Fe (and optionally Fp),
// with per-step diagnostics, persistence, and restart.

namespace hypo {

struct RunOptions {
    std::string out_dir;  // empty: keep everything in memory only
    int max_steps = -1;   // cap on steps (-1: run to T)
    std::optional<std::string> restart_from;
    int vi_every = 10;    // variational-inequality certificate cadence (0: off)
    int vi_samples = 20;
    bool quiet = true;
};

struct RunResult {
    Scenario scenario;
    std::vector<HistoryRow> history;
    AprioriReport apriori;
    int exit_status = 0;  // 0 ok, 2 validation, 3 solver, 4 det floor, 5 cfl, 6 isochoricity
    std::string failure;  // empty when ok
    TransportState state; // final accepted state
    VelocityField v;      // velocity at the final state
    DevTensorField Lp;    // plastic rate at the final state
    std::string summary_json;
};

RunResult run_scenario(const Scenario& s, const RunOptions& opt = {});

/// The prescribed stream-function velocity of transport-verification runs:
/// v = (d/dy, -d/dx) of amp * sin(i pi x/Lx) sin(j pi y/Ly); exactly
/// divergence-free and impermeable.
VelocityField vortex_velocity(GridPtr grid, int kx, int ky, double amp, int i, int j);

}  // namespace hypo
