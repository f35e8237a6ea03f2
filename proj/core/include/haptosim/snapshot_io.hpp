#pragma once

#include <string>

#include "haptosim/grid.hpp"

namespace haptosim {

/// Raw little-endian 64-bit floats, row-major, written to `<base>.f64` with a
/// sidecar text header `<base>.txt` carrying nx, ny, hx, hy, t and the field
/// name.
void write_snapshot_field(const std::string& base, const Field& f, const Grid2D& g,
                          double t, const std::string& name);

/// Read `<base>.f64` back, validating the sidecar header against the grid.
Field read_snapshot_field(const std::string& base, const Grid2D& g);

} // namespace haptosim
