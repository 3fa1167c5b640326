#include "hypo/snapshot_io.hpp"

#include <fstream>
#include <sstream>

namespace hypo {

namespace {

void write_grid_rowmajor(std::ofstream& os, const Eigen::MatrixXd& m) {
    // row-major, y fastest: for each ix, the ny values along y
    for (int ix = 0; ix < m.rows(); ++ix) {
        Eigen::VectorXd row = m.row(ix);
        os.write(reinterpret_cast<const char*>(row.data()),
                 static_cast<std::streamsize>(sizeof(double) * row.size()));
    }
}

Eigen::MatrixXd read_grid_rowmajor(std::ifstream& is, int nx, int ny) {
    Eigen::MatrixXd m(nx, ny);
    for (int ix = 0; ix < nx; ++ix) {
        Eigen::VectorXd row(ny);
        is.read(reinterpret_cast<char*>(row.data()),
                static_cast<std::streamsize>(sizeof(double) * ny));
        m.row(ix) = row;
    }
    return m;
}

}  // namespace

void write_field_snapshot(const std::string& path, const std::string& name,
                          const std::string& units, double time, const Grid2& grid,
                          const std::vector<Eigen::MatrixXd>& comps) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot write snapshot: " + path);
    std::ostringstream h;
    h.precision(17);
    h << "hypoplast-field 1\n"
      << "name " << name << "\n"
      << "units " << units << "\n"
      << "components " << comps.size() << "\n"
      << "nx " << grid.nx << " ny " << grid.ny << "\n"
      << "Lx " << grid.Lx << " Ly " << grid.Ly << "\n"
      << "time " << time << "\n"
      << "layout row-major y-fastest float64\n"
      << "end\n";
    os << h.str();
    for (const auto& c : comps) write_grid_rowmajor(os, c);
}

SnapshotInfo read_field_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot read snapshot: " + path);
    SnapshotInfo info;
    std::string line, key;
    int ncomp = 0;
    std::getline(is, line);
    if (line != "hypoplast-field 1") throw ConfigError("bad snapshot magic in " + path);
    while (std::getline(is, line) && line != "end") {
        std::istringstream ss(line);
        ss >> key;
        if (key == "name")
            ss >> info.name;
        else if (key == "units")
            ss >> info.units;
        else if (key == "components")
            ss >> ncomp;
        else if (key == "nx")
            ss >> info.nx >> key >> info.ny;
        else if (key == "Lx")
            ss >> info.Lx >> key >> info.Ly;
        else if (key == "time")
            ss >> info.time;
    }
    for (int c = 0; c < ncomp; ++c) info.comps.push_back(read_grid_rowmajor(is, info.nx, info.ny));
    return info;
}

void write_checkpoint(const std::string& path, const Checkpoint& c) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot write checkpoint: " + path);
    const auto& g = *c.Fe.grid();
    std::ostringstream h;
    h.precision(17);
    h << "hypoplast-checkpoint 1\n"
      << "t " << c.t << "\n"
      << "step " << c.step << "\n"
      << "prev_stored " << c.prev_stored << "\n"
      << "gron_integral " << c.gron_integral << "\n"
      << "gron_rate_prev " << c.gron_rate_prev << "\n"
      << "Fe0_L2 " << c.Fe0_L2 << "\n"
      << "nx " << g.nx << " ny " << g.ny << "\n"
      << "Lx " << g.Lx << " Ly " << g.Ly << "\n"
      << "lx " << c.Fe.lx() << " ly " << c.Fe.ly() << "\n"
      << "has_Fp " << (c.Fp ? 1 : 0) << "\n"
      << "end\n";
    os << h.str();
    for (const auto& f : c.Fe.c) write_grid_rowmajor(os, f.coef);
    if (c.Fp)
        for (const auto& f : c.Fp->c) write_grid_rowmajor(os, f.coef);
}

Checkpoint read_checkpoint(const std::string& path, GridPtr grid) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot read checkpoint: " + path);
    std::string line, key;
    std::getline(is, line);
    if (line != "hypoplast-checkpoint 1") throw ConfigError("bad checkpoint magic in " + path);
    Checkpoint c;
    int nx = 0, ny = 0, lx = 0, ly = 0, has_fp = 0;
    double Lx = 0, Ly = 0;
    while (std::getline(is, line) && line != "end") {
        std::istringstream ss(line);
        ss >> key;
        if (key == "t")
            ss >> c.t;
        else if (key == "step")
            ss >> c.step;
        else if (key == "prev_stored")
            ss >> c.prev_stored;
        else if (key == "gron_integral")
            ss >> c.gron_integral;
        else if (key == "gron_rate_prev")
            ss >> c.gron_rate_prev;
        else if (key == "Fe0_L2")
            ss >> c.Fe0_L2;
        else if (key == "nx")
            ss >> nx >> key >> ny;
        else if (key == "Lx")
            ss >> Lx >> key >> Ly;
        else if (key == "lx")
            ss >> lx >> key >> ly;
        else if (key == "has_Fp")
            ss >> has_fp;
    }
    if (nx != grid->nx || ny != grid->ny)
        throw ConfigError("checkpoint grid does not match the scenario grid");
    c.Fe = TensorField(grid, lx, ly);
    for (auto& f : c.Fe.c) f.coef = read_grid_rowmajor(is, lx + 1, ly + 1);
    if (has_fp) {
        TensorField fp(grid, lx, ly);
        for (auto& f : fp.c) f.coef = read_grid_rowmajor(is, lx + 1, ly + 1);
        c.Fp = std::move(fp);
    }
    return c;
}

}  // namespace hypo
