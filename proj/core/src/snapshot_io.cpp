#include "haptosim/snapshot_io.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace haptosim {

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian; byte swapping not implemented");

void write_snapshot_field(const std::string& base, const Field& f, const Grid2D& g,
                          double t, const std::string& name) {
    require_on_grid(f, g, "write_snapshot_field");
    {
        std::ofstream out(base + ".f64", std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write snapshot file `" + base + ".f64`");
        out.write(reinterpret_cast<const char*>(f.data.data()),
                  static_cast<std::streamsize>(f.data.size() * sizeof(double)));
        if (!out) throw Error("short write on `" + base + ".f64`");
    }
    char buf[256];
    std::snprintf(buf, sizeof(buf), "nx = %d\nny = %d\nhx = %.17g\nhy = %.17g\nt = %.17g\n",
                  g.nx, g.ny, g.hx, g.hy, t);
    std::ofstream hdr(base + ".txt", std::ios::trunc);
    if (!hdr) throw Error("cannot write snapshot header `" + base + ".txt`");
    hdr << buf << "field = " << name << "\n";
}

Field read_snapshot_field(const std::string& base, const Grid2D& g) {
    std::ifstream hdr(base + ".txt");
    if (!hdr) throw Error("cannot open snapshot header `" + base + ".txt`");
    int nx = -1, ny = -1;
    std::string line;
    while (std::getline(hdr, line)) {
        std::stringstream ss(line);
        std::string key, eq;
        ss >> key >> eq;
        if (eq != "=") continue;
        if (key == "nx") ss >> nx;
        if (key == "ny") ss >> ny;
    }
    if (nx != g.nx || ny != g.ny)
        throw GridMismatch("snapshot `" + base + "` is " + std::to_string(nx) + "x" +
                           std::to_string(ny) + ", grid wants " + std::to_string(g.nx) + "x" +
                           std::to_string(g.ny));

    std::ifstream in(base + ".f64", std::ios::binary);
    if (!in) throw Error("cannot open snapshot file `" + base + ".f64`");
    Field f(g);
    in.read(reinterpret_cast<char*>(f.data.data()),
            static_cast<std::streamsize>(f.data.size() * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(f.data.size() * sizeof(double)))
        throw Error("snapshot file `" + base + ".f64` is truncated");
    return f;
}

} // namespace haptosim
