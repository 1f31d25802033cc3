#ifndef DAMPEDWAVE_CHECKPOINT_HPP
#define DAMPEDWAVE_CHECKPOINT_HPP

// Binary state files: a small header {d, n[], bc, t} followed by the u and
// v grids as flat row-major 64-bit little-endian floats. Layout:
//
//   bytes 0..3   magic "DWCK"
//   u32          format version (1)
//   u32          d
//   u32 * d      n per axis
//   u32          bc (0 = Dirichlet sine, 1 = periodic Fourier)
//   f64          t
//   f64 * N      u values
//   f64 * N      v values

#include <string>

#include "dampedwave/diagnostics.hpp"

namespace dampedwave {

struct CheckpointHeader {
  int d = 0;
  std::vector<int> n;
  BoundaryKind bc = BoundaryKind::DirichletSine;
  double t = 0.0;
};

void write_checkpoint(const std::string& path, const SpectralDomain& dom, const WaveState& state);

CheckpointHeader peek_checkpoint(const std::string& path);

// Validates the header against dom (d, n, bc must match).
WaveState read_checkpoint(const std::string& path, const SpectralDomain& dom);

// Flat array of grid_size doubles, little-endian; used for damping grids.
GridField read_raw_field(const std::string& path, const SpectralDomain& dom);
void write_raw_field(const std::string& path, const SpectralDomain& dom, const GridField& g);

}  // namespace dampedwave

#endif
