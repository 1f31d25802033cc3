#ifndef DAMPEDWAVE_DIAGNOSTICS_HPP
#define DAMPEDWAVE_DIAGNOSTICS_HPP

// Every scalar the estimates manipulate: energy E, linear energy E_lin,
// the virial quantity M = |u|_L2^2 with M' and the exact M'' formula
//   M'' = 2|du/dt|^2 - 2|u|_H01^2 + 2 int u f(u) - 2 int gamma u du/dt,
// plus the dissipation residual of the energy equality
//   E(t1) = E(t0) - int int gamma |du/dt|^2.
// M'' always comes from the formula, never from differencing, so that
// finite-difference comparison against the sampled M(t) series is an
// independent consistency check of the integrator.

#include <iosfwd>
#include <span>
#include <vector>

#include "dampedwave/domain.hpp"
#include "dampedwave/nonlinearity.hpp"

namespace dampedwave {

struct WaveState {
  double t = 0.0;
  GridField u, v;             // v = du/dt
  SpectralField u_hat, v_hat; // spectral mirrors, kept in sync
};

WaveState state_from_spectral(const SpectralDomain& dom, double t, SpectralField u_hat,
                              SpectralField v_hat);
WaveState state_from_grid(const SpectralDomain& dom, double t, GridField u, GridField v);

class DampingProfile {
 public:
  static DampingProfile constant(const SpectralDomain& dom, double gamma);
  // Throws on negative or non-finite entries.
  static DampingProfile from_grid(const SpectralDomain& dom, GridField gamma);

  const GridField& grid() const { return gamma_; }
  double gamma_inf() const { return gamma_inf_; }
  bool is_zero() const { return gamma_inf_ == 0.0; }
  // spatially uniform profiles admit an all-spectral damping step
  bool is_constant() const { return constant_; }
  double constant_value() const { return gamma_inf_; }

 private:
  GridField gamma_;
  double gamma_inf_ = 0.0;
  bool constant_ = false;
};

struct DiagnosticsSample {
  double t;
  double E;       // E_lin - intF
  double E_lin;   // h1_u/2 + l2_v/2
  double M;       // l2_u
  double Mp;      // 2 int u v
  double Mpp;     // formula value
  double l2_u, l2_v, h1_u;
  double intF, intUf, intGuv, intGvv;
};

// Nonlinear integrands; with dealias the quadrature runs on the 3/2
// zero-padded companion grid. u_hat and u must describe the same field.
double integral_F(const SpectralDomain& dom, const NonlinearitySpec& spec,
                  const SpectralField& u_hat, const GridField& u, bool dealias);
double integral_uf(const SpectralDomain& dom, const NonlinearitySpec& spec,
                   const SpectralField& u_hat, const GridField& u, bool dealias);

// Both nonlinear integrals from one padded synthesis.
struct NonlinearIntegrals {
  double intF;
  double intUf;
};
NonlinearIntegrals nonlinear_integrals(const SpectralDomain& dom, const NonlinearitySpec& spec,
                                       const SpectralField& u_hat, const GridField& u,
                                       bool dealias);

// f(u) as a coarse-grid field; with dealias the evaluation happens on the
// padded grid and the result is truncated back to the resolved modes.
// f_of_u_hat is the spectral form of the same projection.
GridField f_of_u(const SpectralDomain& dom, const NonlinearitySpec& spec,
                 const SpectralField& u_hat, const GridField& u, bool dealias);
SpectralField f_of_u_hat(const SpectralDomain& dom, const NonlinearitySpec& spec,
                         const SpectralField& u_hat, const GridField& u, bool dealias);

double energy(const SpectralDomain& dom, const NonlinearitySpec& spec, const WaveState& state,
              bool dealias = true);

DiagnosticsSample virial_sample(const SpectralDomain& dom, const NonlinearitySpec& spec,
                                const DampingProfile& damping, const WaveState& state,
                                bool dealias = true);

// Worst-case defect of the energy equality over all sample pairs, with
// trapezoidal quadrature of int gamma |du/dt|^2 in time. Samples must be
// uniformly spaced by dt. Throws std::invalid_argument on fewer than two.
double dissipation_residual(std::span<const DiagnosticsSample> samples, double dt);

// CSV streaming; fixed column order.
extern const char* const kCsvHeader;
void write_csv_row(std::ostream& os, const DiagnosticsSample& s);

}  // namespace dampedwave

#endif
