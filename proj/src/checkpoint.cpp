#include "dampedwave/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace dampedwave {

namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint format is little-endian; big-endian hosts are unsupported");

constexpr char kMagic[4] = {'D', 'W', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void write_f64(std::ostream& os, double v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw std::runtime_error("checkpoint: truncated file");
  return v;
}

double read_f64(std::istream& is) {
  double v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw std::runtime_error("checkpoint: truncated file");
  return v;
}

CheckpointHeader read_header(std::istream& is, const std::string& path) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("checkpoint: bad magic in " + path);
  const std::uint32_t version = read_u32(is);
  if (version != kVersion)
    throw std::runtime_error("checkpoint: unsupported version in " + path);
  CheckpointHeader h;
  h.d = static_cast<int>(read_u32(is));
  if (h.d < 1 || h.d > 3) throw std::runtime_error("checkpoint: bad dimension in " + path);
  h.n.resize(static_cast<std::size_t>(h.d));
  for (int j = 0; j < h.d; ++j) h.n[j] = static_cast<int>(read_u32(is));
  const std::uint32_t bc = read_u32(is);
  if (bc > 1) throw std::runtime_error("checkpoint: bad boundary kind in " + path);
  h.bc = (bc == 0) ? BoundaryKind::DirichletSine : BoundaryKind::PeriodicFourier;
  h.t = read_f64(is);
  return h;
}

}  // namespace

void write_checkpoint(const std::string& path, const SpectralDomain& dom,
                      const WaveState& state) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("checkpoint: cannot open " + path + " for writing");
  os.write(kMagic, 4);
  write_u32(os, kVersion);
  write_u32(os, static_cast<std::uint32_t>(dom.dim()));
  for (int j = 0; j < dom.dim(); ++j)
    write_u32(os, static_cast<std::uint32_t>(dom.extents()[j]));
  write_u32(os, dom.bc() == BoundaryKind::DirichletSine ? 0u : 1u);
  write_f64(os, state.t);
  os.write(reinterpret_cast<const char*>(state.u.values.data()),
           static_cast<std::streamsize>(sizeof(double) * state.u.values.size()));
  os.write(reinterpret_cast<const char*>(state.v.values.data()),
           static_cast<std::streamsize>(sizeof(double) * state.v.values.size()));
  if (!os) throw std::runtime_error("checkpoint: write failed for " + path);
}

CheckpointHeader peek_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
  return read_header(is, path);
}

WaveState read_checkpoint(const std::string& path, const SpectralDomain& dom) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
  CheckpointHeader h = read_header(is, path);
  if (h.d != dom.dim() || h.n != dom.extents() ||
      h.bc != dom.bc())
    throw std::runtime_error("checkpoint: header does not match the domain: " + path);

  GridField u = dom.make_grid_field(), v = dom.make_grid_field();
  is.read(reinterpret_cast<char*>(u.values.data()),
          static_cast<std::streamsize>(sizeof(double) * u.values.size()));
  is.read(reinterpret_cast<char*>(v.values.data()),
          static_cast<std::streamsize>(sizeof(double) * v.values.size()));
  if (!is) throw std::runtime_error("checkpoint: truncated field data in " + path);
  return state_from_grid(dom, h.t, std::move(u), std::move(v));
}

GridField read_raw_field(const std::string& path, const SpectralDomain& dom) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("field file: cannot open " + path);
  GridField g = dom.make_grid_field();
  is.read(reinterpret_cast<char*>(g.values.data()),
          static_cast<std::streamsize>(sizeof(double) * g.values.size()));
  if (!is) throw std::runtime_error("field file: expected " +
                                    std::to_string(dom.grid_size()) + " doubles in " + path);
  char extra;
  if (is.read(&extra, 1))
    throw std::runtime_error("field file: trailing bytes in " + path);
  return g;
}

void write_raw_field(const std::string& path, const SpectralDomain& dom, const GridField& g) {
  if (g.values.size() != dom.grid_size())
    throw std::invalid_argument("field file: shape mismatch");
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("field file: cannot open " + path + " for writing");
  os.write(reinterpret_cast<const char*>(g.values.data()),
           static_cast<std::streamsize>(sizeof(double) * g.values.size()));
  if (!os) throw std::runtime_error("field file: write failed for " + path);
}

}  // namespace dampedwave
