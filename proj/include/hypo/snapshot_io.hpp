#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hypo/fields.hpp"
#include "hypo/transport.hpp"

// Snapshot files carry a small text header (terminated by a line "end")
// followed by raw float64 grids, one component after another, row-major
// with y fastest. Checkpoints additionally store spectral coefficients and
// the few scalars needed to resume the diagnostics seamlessly.

namespace hypo {

void write_field_snapshot(const std::string& path, const std::string& name,
                          const std::string& units, double time, const Grid2& grid,
                          const std::vector<Eigen::MatrixXd>& comps);

struct SnapshotInfo {
    std::string name, units;
    double time = 0.0;
    int nx = 0, ny = 0;
    double Lx = 0.0, Ly = 0.0;
    std::vector<Eigen::MatrixXd> comps;
};
SnapshotInfo read_field_snapshot(const std::string& path);

struct Checkpoint {
    double t = 0.0;
    int step = 0;
    double prev_stored = 0.0;   // stored energy one accepted step back
    double gron_integral = 0.0; // accumulated Gronwall exponent
    double gron_rate_prev = 0.0;
    double Fe0_L2 = 0.0;        // reference norm of the initial condition
    TensorField Fe;
    std::optional<TensorField> Fp;
};

void write_checkpoint(const std::string& path, const Checkpoint& c);
Checkpoint read_checkpoint(const std::string& path, GridPtr grid);

}  // namespace hypo
