#ifndef DAMPEDWAVE_DOMAIN_HPP
#define DAMPEDWAVE_DOMAIN_HPP

// Spatial discretization on a rectangular box: homogeneous Dirichlet
// conditions via the sine eigenbasis, or a flat torus via the real Fourier
// basis. Laplacian eigenvalues are exact, transforms are FFTW-backed, and
// quadrature of bilinear quantities is exact on resolved fields (discrete
// Parseval). A 3/2 zero-padded companion domain serves dealiased
// evaluation of nonlinear integrands.
//
// Grid layout is row-major with the last axis fastest. Dirichlet fields
// store n_j half-sample collocation values per axis, x_i = (i + 1/2) L/n,
// i = 0..n-1 (DST-II/III pair); spectral slots are the 1-based sine modes
// k_j = 1..n_j. The k = n mode samples as (-1)^i and carries quadrature
// weight L instead of L/2.
// Periodic fields store n_j points x_i = i L/n; spectral storage is the
// FFTW r2c half-space, interleaved re/im in a real buffer.

#include <cstddef>
#include <memory>
#include <vector>

#include "dampedwave/kernels.hpp"

namespace dampedwave {

enum class BoundaryKind { DirichletSine, PeriodicFourier };

struct DomainConfig {
  int d = 3;
  std::vector<int> n;            // per-axis counts; one entry broadcast to all axes
  std::vector<double> lengths;   // per-axis box lengths, default pi each
  BoundaryKind bc = BoundaryKind::DirichletSine;
  double beta = 0.0;
};

struct GridField {
  kernels::buffer values;
};

struct SpectralField {
  kernels::buffer coeffs;
};

struct PoincareCheck {
  double lambda1_plus_beta;
  bool ok;
};

class SpectralDomain {
 public:
  // Throws std::invalid_argument on malformed configs (d outside {1,2,3},
  // n < 2, odd n for the Fourier basis, non-positive lengths). A failing
  // Poincare condition is not a construction error; it is reported by
  // poincare_check() and rejected where the flow requires it.
  explicit SpectralDomain(DomainConfig cfg);
  ~SpectralDomain();
  SpectralDomain(const SpectralDomain&) = delete;
  SpectralDomain& operator=(const SpectralDomain&) = delete;

  const DomainConfig& config() const { return cfg_; }
  int dim() const { return cfg_.d; }
  BoundaryKind bc() const { return cfg_.bc; }
  double beta() const { return cfg_.beta; }
  const std::vector<int>& extents() const { return cfg_.n; }

  std::size_t grid_size() const { return grid_size_; }
  std::size_t spec_size() const { return spec_size_; }
  double cell_volume() const { return cell_volume_; }
  double volume() const { return volume_; }

  double lambda1() const { return lambda1_; }
  PoincareCheck poincare_check() const;

  GridField make_grid_field() const;
  SpectralField make_spectral_field() const;

  SpectralField to_spectral(const GridField& g) const;
  GridField to_grid(const SpectralField& c) const;

  // Allocation-free variants for hot loops; outputs and scratch are
  // resized as needed and may be reused across calls.
  void to_spectral_into(const GridField& g, SpectralField& out) const;
  void to_grid_into(const SpectralField& c, GridField& out, kernels::buffer& scratch) const;

  SpectralField laplacian_apply(const SpectralField& c) const;

  double inner_product(const GridField& a, const GridField& b) const;
  double l2_norm_sq(const GridField& g) const;
  double l2_norm_sq(const SpectralField& c) const;
  double h1_norm_sq(const SpectralField& c) const;
  double h1_norm_sq(const GridField& g) const;

  // Per-slot tables aligned with SpectralField storage.
  const kernels::buffer& eigenvalues() const { return mu_; }         // mu_k
  const kernels::buffer& parseval_weights() const { return pw_; }    // integral ab = sum w a^ b^
  const kernels::buffer& h1_weights() const { return h1w_; }         // (mu_k + beta) w

  // Single modes. Dirichlet: k_j in 1..n_j, the field is
  // amplitude * prod sin(k_j pi x_j / L_j). Periodic: signed integers,
  // the field is amplitude * cos(2 pi k.x / L).
  SpectralField mode_field(const std::vector<int>& k, double amplitude) const;
  double mode_eigenvalue(const std::vector<int>& k) const;
  double mode_coefficient(const SpectralField& c, const std::vector<int>& k) const;

  std::vector<double> grid_point(std::size_t flat_index) const;

  // 3/2 zero-padded companion (nullptr on the companion itself).
  const SpectralDomain* padded() const { return padded_.get(); }
  SpectralField pad_to(const SpectralDomain& fine, const SpectralField& coarse) const;
  SpectralField truncate_from(const SpectralDomain& fine, const SpectralField& fine_field) const;
  void pad_to_into(const SpectralDomain& fine, const SpectralField& coarse,
                   SpectralField& out) const;
  void truncate_from_into(const SpectralDomain& fine, const SpectralField& fine_field,
                          SpectralField& out) const;

 private:
  SpectralDomain(DomainConfig cfg, bool build_padded);
  void init();
  void check_grid(const GridField& g) const;
  void check_spec(const SpectralField& c) const;

  DomainConfig cfg_;
  std::size_t grid_size_ = 0;
  std::size_t spec_size_ = 0;
  double cell_volume_ = 0.0;
  double volume_ = 0.0;
  double lambda1_ = 0.0;
  kernels::buffer mu_, neg_mu_, pw_, h1w_;
  kernels::buffer synth_scale_, analysis_scale_;  // sine basis only

  struct Plans;
  std::unique_ptr<Plans> plans_;
  std::unique_ptr<SpectralDomain> padded_;
};

}  // namespace dampedwave

#endif
