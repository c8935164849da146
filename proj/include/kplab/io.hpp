#pragma once

#include "kplab/field.hpp"
#include "kplab/solver.hpp"

#include <iosfwd>
#include <string>

namespace kplab {

// Checkpoint record, all little-endian:
//   int64 nx, int64 ny, float64 lx, float64 ly, float64 t,
//   float64 values[nx * ny]   (row-major, value(ix, iy) at ix * ny + iy)
// The box is centred: x in [-lx/2, lx/2), y in [-ly/2, ly/2).
// A trajectory file is a sequence of such records in increasing t.

struct Checkpoint {
    Field field;
    double t = 0;
};

void write_checkpoint(std::ostream& out, const Field& f, double t);
/// Returns false at a clean end of stream; throws on a truncated record.
bool read_checkpoint(std::istream& in, Checkpoint& cp);

void save_checkpoint(const std::string& path, const Field& f, double t);
Checkpoint load_checkpoint(const std::string& path);

void save_trajectory(const std::string& path, const Trajectory& traj);
/// Step metadata is not stored; the config holds only the grid.
Trajectory load_trajectory(const std::string& path);

/// Writes through a temporary file in the same directory and renames it into place.
void atomic_write(const std::string& path, const std::string& content);

} // namespace kplab
