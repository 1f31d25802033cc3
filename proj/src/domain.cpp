#include "dampedwave/domain.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace dampedwave {

namespace {

// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct SpectralDomain::Plans {
  fftw_plan dst_fwd = nullptr;   // Dirichlet analysis (DST-II per axis)
  fftw_plan dst_bwd = nullptr;   // Dirichlet synthesis (DST-III per axis)
  fftw_plan r2c = nullptr;       // periodic forward
  fftw_plan c2r = nullptr;       // periodic backward
  kernels::buffer plan_a, plan_b;

  ~Plans() {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    if (dst_fwd) fftw_destroy_plan(dst_fwd);
    if (dst_bwd) fftw_destroy_plan(dst_bwd);
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
  }
};

SpectralDomain::SpectralDomain(DomainConfig cfg) : SpectralDomain(std::move(cfg), true) {}

SpectralDomain::SpectralDomain(DomainConfig cfg, bool build_padded) : cfg_(std::move(cfg)) {
  if (cfg_.d < 1 || cfg_.d > 3) throw std::invalid_argument("domain: d must be 1, 2 or 3");

  if (cfg_.n.empty()) throw std::invalid_argument("domain: n is required");
  if (cfg_.n.size() == 1) cfg_.n.assign(static_cast<std::size_t>(cfg_.d), cfg_.n[0]);
  if (cfg_.n.size() != static_cast<std::size_t>(cfg_.d))
    throw std::invalid_argument("domain: n must have 1 or d entries");

  if (cfg_.lengths.empty())
    cfg_.lengths.assign(static_cast<std::size_t>(cfg_.d), std::numbers::pi);
  if (cfg_.lengths.size() == 1)
    cfg_.lengths.assign(static_cast<std::size_t>(cfg_.d), cfg_.lengths[0]);
  if (cfg_.lengths.size() != static_cast<std::size_t>(cfg_.d))
    throw std::invalid_argument("domain: lengths must have 1 or d entries");

  for (int j = 0; j < cfg_.d; ++j) {
    if (cfg_.n[j] < 2) throw std::invalid_argument("domain: n must be >= 2 per axis");
    if (cfg_.bc == BoundaryKind::PeriodicFourier && (cfg_.n[j] % 2) != 0)
      throw std::invalid_argument("domain: periodic axes need even n");
    if (!(cfg_.lengths[j] > 0.0) || !std::isfinite(cfg_.lengths[j]))
      throw std::invalid_argument("domain: lengths must be positive and finite");
  }
  if (!std::isfinite(cfg_.beta)) throw std::invalid_argument("domain: beta must be finite");

  init();

  if (build_padded) {
    DomainConfig p = cfg_;
    for (int j = 0; j < cfg_.d; ++j) {
      p.n[j] = (3 * cfg_.n[j] + 1) / 2;
      if (cfg_.bc == BoundaryKind::PeriodicFourier && (p.n[j] % 2) != 0) ++p.n[j];
    }
    padded_.reset(new SpectralDomain(std::move(p), false));
  }
}

SpectralDomain::~SpectralDomain() = default;

void SpectralDomain::init() {
  const int d = cfg_.d;
  grid_size_ = 1;
  volume_ = 1.0;
  cell_volume_ = 1.0;
  for (int j = 0; j < d; ++j) {
    grid_size_ *= static_cast<std::size_t>(cfg_.n[j]);
    volume_ *= cfg_.lengths[j];
    cell_volume_ *= cfg_.lengths[j] / cfg_.n[j];
  }

  if (cfg_.bc == BoundaryKind::DirichletSine) {
    spec_size_ = grid_size_;
    mu_.assign(spec_size_, 0.0);
    pw_.assign(spec_size_, 0.0);
    synth_scale_.assign(spec_size_, 0.0);
    analysis_scale_.assign(spec_size_, 0.0);

    // slot (k0-1, k1-1, k2-1), row-major, last axis fastest. The k = n
    // mode samples as (-1)^j on the half-sample grid, which shifts its
    // discrete quadrature weight and transform scaling relative to the
    // other modes.
    std::vector<int> k(static_cast<std::size_t>(d), 1);
    for (std::size_t s = 0; s < spec_size_; ++s) {
      double mu = 0.0, w = 1.0, synth = 1.0, ana = 1.0;
      for (int j = 0; j < d; ++j) {
        const double kj = std::numbers::pi * k[j] / cfg_.lengths[j];
        mu += kj * kj;
        const bool nyq = (k[j] == cfg_.n[j]);
        w *= nyq ? cfg_.lengths[j] : cfg_.lengths[j] / 2.0;
        synth *= nyq ? 1.0 : 0.5;
        ana *= nyq ? 0.5 / cfg_.n[j] : 1.0 / cfg_.n[j];
      }
      mu_[s] = mu;
      pw_[s] = w;
      synth_scale_[s] = synth;
      analysis_scale_[s] = ana;
      for (int j = d - 1; j >= 0; --j) {
        if (++k[j] <= cfg_.n[j]) break;
        k[j] = 1;
      }
    }
    lambda1_ = mu_[0];
  } else {
    std::size_t cplx = 1;
    for (int j = 0; j < d - 1; ++j) cplx *= static_cast<std::size_t>(cfg_.n[j]);
    cplx *= static_cast<std::size_t>(cfg_.n[d - 1] / 2 + 1);
    spec_size_ = 2 * cplx;
    mu_.assign(spec_size_, 0.0);
    pw_.assign(spec_size_, 0.0);

    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    const int last = d - 1;
    const int nlast = cfg_.n[last];
    for (std::size_t c = 0; c < cplx; ++c) {
      double mu = 0.0;
      for (int j = 0; j < d; ++j) {
        int kj = idx[j];
        if (j != last && kj > cfg_.n[j] / 2) kj -= cfg_.n[j];
        const double f = 2.0 * std::numbers::pi * kj / cfg_.lengths[j];
        mu += f * f;
      }
      const double w = (idx[last] == 0 || idx[last] == nlast / 2) ? volume_ : 2.0 * volume_;
      mu_[2 * c] = mu_[2 * c + 1] = mu;
      pw_[2 * c] = pw_[2 * c + 1] = w;
      for (int j = last; j >= 0; --j) {
        const int lim = (j == last) ? nlast / 2 : cfg_.n[j] - 1;
        if (++idx[j] <= lim) break;
        idx[j] = 0;
      }
    }
    lambda1_ = 0.0;
  }

  neg_mu_.resize(spec_size_);
  h1w_.resize(spec_size_);
  for (std::size_t s = 0; s < spec_size_; ++s) {
    neg_mu_[s] = -mu_[s];
    h1w_[s] = (mu_[s] + cfg_.beta) * pw_[s];
  }

  plans_.reset(new Plans);
  plans_->plan_a.assign(std::max(grid_size_, spec_size_), 0.0);
  plans_->plan_b.assign(std::max(grid_size_, spec_size_), 0.0);

  int dims[3] = {1, 1, 1};
  for (int j = 0; j < d; ++j) dims[j] = cfg_.n[j];

  std::lock_guard<std::mutex> lock(fftw_mutex());
  if (cfg_.bc == BoundaryKind::DirichletSine) {
    fftw_r2r_kind fwd[3] = {FFTW_RODFT10, FFTW_RODFT10, FFTW_RODFT10};
    fftw_r2r_kind bwd[3] = {FFTW_RODFT01, FFTW_RODFT01, FFTW_RODFT01};
    plans_->dst_fwd = fftw_plan_r2r(d, dims, plans_->plan_a.data(), plans_->plan_b.data(), fwd,
                                    FFTW_ESTIMATE);
    plans_->dst_bwd = fftw_plan_r2r(d, dims, plans_->plan_a.data(), plans_->plan_b.data(), bwd,
                                    FFTW_ESTIMATE);
    if (!plans_->dst_fwd || !plans_->dst_bwd)
      throw std::runtime_error("domain: FFTW r2r planning failed");
  } else {
    plans_->r2c = fftw_plan_dft_r2c(d, dims, plans_->plan_a.data(),
                                    reinterpret_cast<fftw_complex*>(plans_->plan_b.data()),
                                    FFTW_ESTIMATE);
    plans_->c2r = fftw_plan_dft_c2r(d, dims,
                                    reinterpret_cast<fftw_complex*>(plans_->plan_a.data()),
                                    plans_->plan_b.data(), FFTW_ESTIMATE);
    if (!plans_->r2c || !plans_->c2r)
      throw std::runtime_error("domain: FFTW r2c/c2r planning failed");
  }
}

PoincareCheck SpectralDomain::poincare_check() const {
  const double v = lambda1_ + cfg_.beta;
  return {v, v > 0.0};
}

GridField SpectralDomain::make_grid_field() const {
  GridField g;
  g.values.assign(grid_size_, 0.0);
  return g;
}

SpectralField SpectralDomain::make_spectral_field() const {
  SpectralField c;
  c.coeffs.assign(spec_size_, 0.0);
  return c;
}

void SpectralDomain::check_grid(const GridField& g) const {
  if (g.values.size() != grid_size_)
    throw std::invalid_argument("domain: grid field shape mismatch");
}

void SpectralDomain::check_spec(const SpectralField& c) const {
  if (c.coeffs.size() != spec_size_)
    throw std::invalid_argument("domain: spectral field shape mismatch");
}

void SpectralDomain::to_spectral_into(const GridField& g, SpectralField& out) const {
  check_grid(g);
  out.coeffs.resize(spec_size_);
  if (cfg_.bc == BoundaryKind::DirichletSine) {
    fftw_execute_r2r(plans_->dst_fwd, const_cast<double*>(g.values.data()), out.coeffs.data());
    kernels::active().mul(analysis_scale_.data(), out.coeffs.data(), out.coeffs.data(),
                          out.coeffs.size());
  } else {
    fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(g.values.data()),
                         reinterpret_cast<fftw_complex*>(out.coeffs.data()));
    kernels::active().scale(1.0 / static_cast<double>(grid_size_), out.coeffs.data(),
                            out.coeffs.size());
  }
}

SpectralField SpectralDomain::to_spectral(const GridField& g) const {
  SpectralField out;
  to_spectral_into(g, out);
  return out;
}

void SpectralDomain::to_grid_into(const SpectralField& c, GridField& out,
                                  kernels::buffer& scratch) const {
  check_spec(c);
  out.values.resize(grid_size_);
  if (cfg_.bc == BoundaryKind::DirichletSine) {
    scratch.resize(spec_size_);
    kernels::active().mul(synth_scale_.data(), c.coeffs.data(), scratch.data(), spec_size_);
    fftw_execute_r2r(plans_->dst_bwd, scratch.data(), out.values.data());
  } else {
    // multi-dimensional c2r destroys its input; run it on a scratch copy
    scratch.resize(spec_size_);
    std::copy(c.coeffs.begin(), c.coeffs.end(), scratch.begin());
    fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(scratch.data()),
                         out.values.data());
  }
}

GridField SpectralDomain::to_grid(const SpectralField& c) const {
  GridField out;
  kernels::buffer scratch;
  to_grid_into(c, out, scratch);
  return out;
}

SpectralField SpectralDomain::laplacian_apply(const SpectralField& c) const {
  check_spec(c);
  SpectralField out = make_spectral_field();
  kernels::active().mul(neg_mu_.data(), c.coeffs.data(), out.coeffs.data(), spec_size_);
  return out;
}

double SpectralDomain::inner_product(const GridField& a, const GridField& b) const {
  check_grid(a);
  check_grid(b);
  return cell_volume_ * kernels::active().dot(a.values.data(), b.values.data(), grid_size_);
}

double SpectralDomain::l2_norm_sq(const GridField& g) const {
  check_grid(g);
  return cell_volume_ * kernels::active().sum_sq(g.values.data(), grid_size_);
}

double SpectralDomain::l2_norm_sq(const SpectralField& c) const {
  check_spec(c);
  return kernels::active().weighted_sum_sq(pw_.data(), c.coeffs.data(), spec_size_);
}

double SpectralDomain::h1_norm_sq(const SpectralField& c) const {
  check_spec(c);
  return kernels::active().weighted_sum_sq(h1w_.data(), c.coeffs.data(), spec_size_);
}

double SpectralDomain::h1_norm_sq(const GridField& g) const { return h1_norm_sq(to_spectral(g)); }

double SpectralDomain::mode_eigenvalue(const std::vector<int>& k) const {
  if (k.size() != static_cast<std::size_t>(cfg_.d))
    throw std::invalid_argument("domain: mode index size mismatch");
  double mu = 0.0;
  for (int j = 0; j < cfg_.d; ++j) {
    double f;
    if (cfg_.bc == BoundaryKind::DirichletSine) {
      if (k[j] < 1 || k[j] > cfg_.n[j]) throw std::invalid_argument("domain: mode out of range");
      f = std::numbers::pi * k[j] / cfg_.lengths[j];
    } else {
      if (std::abs(k[j]) > cfg_.n[j] / 2) throw std::invalid_argument("domain: mode out of range");
      f = 2.0 * std::numbers::pi * k[j] / cfg_.lengths[j];
    }
    mu += f * f;
  }
  return mu;
}

SpectralField SpectralDomain::mode_field(const std::vector<int>& k, double amplitude) const {
  mode_eigenvalue(k);  // range validation
  SpectralField c = make_spectral_field();
  const int d = cfg_.d;
  if (cfg_.bc == BoundaryKind::DirichletSine) {
    std::size_t s = 0;
    for (int j = 0; j < d; ++j) s = s * cfg_.n[j] + static_cast<std::size_t>(k[j] - 1);
    c.coeffs[s] = amplitude;
    return c;
  }

  // periodic: amplitude * cos(2 pi k.x / L) has full-space coefficients
  // amp/2 at +-k (amp at k = 0); deposit on whichever of the pair is stored
  auto wrap = [&](int v, int j) { return ((v % cfg_.n[j]) + cfg_.n[j]) % cfg_.n[j]; };
  std::vector<std::vector<int>> modes;
  std::vector<int> a(static_cast<std::size_t>(d)), b(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    a[j] = wrap(k[j], j);
    b[j] = wrap(-k[j], j);
  }
  modes.push_back(a);
  if (b != a) modes.push_back(b);
  const double per = amplitude / static_cast<double>(modes.size());
  const int last = d - 1;
  for (const auto& m : modes) {
    if (m[last] > cfg_.n[last] / 2) continue;  // conjugate partner carries it
    std::size_t s = 0;
    for (int j = 0; j < d; ++j) {
      const std::size_t ext =
          (j == last) ? static_cast<std::size_t>(cfg_.n[last] / 2 + 1)
                      : static_cast<std::size_t>(cfg_.n[j]);
      s = s * ext + static_cast<std::size_t>(m[j]);
    }
    c.coeffs[2 * s] += per;
  }
  return c;
}

double SpectralDomain::mode_coefficient(const SpectralField& c, const std::vector<int>& k) const {
  check_spec(c);
  mode_eigenvalue(k);
  const int d = cfg_.d;
  if (cfg_.bc == BoundaryKind::DirichletSine) {
    std::size_t s = 0;
    for (int j = 0; j < d; ++j) s = s * cfg_.n[j] + static_cast<std::size_t>(k[j] - 1);
    return c.coeffs[s];
  }
  auto wrap = [&](int v, int j) { return ((v % cfg_.n[j]) + cfg_.n[j]) % cfg_.n[j]; };
  std::vector<int> m(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) m[j] = wrap(k[j], j);
  const int last = d - 1;
  if (m[last] > cfg_.n[last] / 2)
    for (int j = 0; j < d; ++j) m[j] = wrap(-k[j], j);
  std::size_t s = 0;
  for (int j = 0; j < d; ++j) {
    const std::size_t ext = (j == last) ? static_cast<std::size_t>(cfg_.n[last] / 2 + 1)
                                        : static_cast<std::size_t>(cfg_.n[j]);
    s = s * ext + static_cast<std::size_t>(m[j]);
  }
  return c.coeffs[2 * s];
}

std::vector<double> SpectralDomain::grid_point(std::size_t flat_index) const {
  if (flat_index >= grid_size_) throw std::out_of_range("domain: grid index out of range");
  const int d = cfg_.d;
  std::vector<double> x(static_cast<std::size_t>(d));
  for (int j = d - 1; j >= 0; --j) {
    const std::size_t nj = static_cast<std::size_t>(cfg_.n[j]);
    const std::size_t ij = flat_index % nj;
    flat_index /= nj;
    if (cfg_.bc == BoundaryKind::DirichletSine)
      x[j] = (static_cast<double>(ij) + 0.5) * cfg_.lengths[j] / cfg_.n[j];
    else
      x[j] = static_cast<double>(ij) * cfg_.lengths[j] / cfg_.n[j];
  }
  return x;
}

void SpectralDomain::pad_to_into(const SpectralDomain& fine, const SpectralField& coarse,
                                 SpectralField& out) const {
  check_spec(coarse);
  if (fine.bc() != cfg_.bc || fine.dim() != cfg_.d)
    throw std::invalid_argument("domain: incompatible padded domain");
  out.coeffs.assign(fine.spec_size(), 0.0);
  const int d = cfg_.d;
  if (cfg_.bc == BoundaryKind::DirichletSine) {
    std::vector<int> k(static_cast<std::size_t>(d), 0);  // 0-based slot
    for (std::size_t s = 0; s < spec_size_; ++s) {
      std::size_t t = 0;
      for (int j = 0; j < d; ++j) t = t * fine.cfg_.n[j] + static_cast<std::size_t>(k[j]);
      out.coeffs[t] = coarse.coeffs[s];
      for (int j = d - 1; j >= 0; --j) {
        if (++k[j] < cfg_.n[j]) break;
        k[j] = 0;
      }
    }
    return;
  }

  // periodic: remap stored half-space slots; Nyquist planes are dropped
  const int last = d - 1;
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  const std::size_t cplx = spec_size_ / 2;
  for (std::size_t c = 0; c < cplx; ++c) {
    bool nyquist = false;
    std::size_t t = 0;
    for (int j = 0; j < d; ++j) {
      int kj = idx[j];
      if (j != last && kj > cfg_.n[j] / 2) kj -= cfg_.n[j];
      if (std::abs(kj) == cfg_.n[j] / 2) nyquist = true;
      const int fj = (kj >= 0) ? kj : kj + fine.cfg_.n[j];
      const std::size_t ext = (j == last) ? static_cast<std::size_t>(fine.cfg_.n[last] / 2 + 1)
                                          : static_cast<std::size_t>(fine.cfg_.n[j]);
      t = t * ext + static_cast<std::size_t>(fj);
    }
    if (!nyquist) {
      out.coeffs[2 * t] = coarse.coeffs[2 * c];
      out.coeffs[2 * t + 1] = coarse.coeffs[2 * c + 1];
    }
    for (int j = last; j >= 0; --j) {
      const int lim = (j == last) ? cfg_.n[last] / 2 : cfg_.n[j] - 1;
      if (++idx[j] <= lim) break;
      idx[j] = 0;
    }
  }
}

SpectralField SpectralDomain::pad_to(const SpectralDomain& fine, const SpectralField& coarse) const {
  SpectralField out;
  pad_to_into(fine, coarse, out);
  return out;
}

void SpectralDomain::truncate_from_into(const SpectralDomain& fine,
                                        const SpectralField& fine_field,
                                        SpectralField& out) const {
  fine.check_spec(fine_field);
  if (fine.bc() != cfg_.bc || fine.dim() != cfg_.d)
    throw std::invalid_argument("domain: incompatible padded domain");
  out.coeffs.assign(spec_size_, 0.0);
  const int d = cfg_.d;
  if (cfg_.bc == BoundaryKind::DirichletSine) {
    std::vector<int> k(static_cast<std::size_t>(d), 0);
    for (std::size_t s = 0; s < spec_size_; ++s) {
      std::size_t t = 0;
      for (int j = 0; j < d; ++j) t = t * fine.cfg_.n[j] + static_cast<std::size_t>(k[j]);
      out.coeffs[s] = fine_field.coeffs[t];
      for (int j = d - 1; j >= 0; --j) {
        if (++k[j] < cfg_.n[j]) break;
        k[j] = 0;
      }
    }
    return;
  }

  const int last = d - 1;
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  const std::size_t cplx = spec_size_ / 2;
  for (std::size_t c = 0; c < cplx; ++c) {
    bool nyquist = false;
    std::size_t t = 0;
    for (int j = 0; j < d; ++j) {
      int kj = idx[j];
      if (j != last && kj > cfg_.n[j] / 2) kj -= cfg_.n[j];
      if (std::abs(kj) == cfg_.n[j] / 2) nyquist = true;
      const int fj = (kj >= 0) ? kj : kj + fine.cfg_.n[j];
      const std::size_t ext = (j == last) ? static_cast<std::size_t>(fine.cfg_.n[last] / 2 + 1)
                                          : static_cast<std::size_t>(fine.cfg_.n[j]);
      t = t * ext + static_cast<std::size_t>(fj);
    }
    if (!nyquist) {
      out.coeffs[2 * c] = fine_field.coeffs[2 * t];
      out.coeffs[2 * c + 1] = fine_field.coeffs[2 * t + 1];
    }
    for (int j = last; j >= 0; --j) {
      const int lim = (j == last) ? cfg_.n[last] / 2 : cfg_.n[j] - 1;
      if (++idx[j] <= lim) break;
      idx[j] = 0;
    }
  }
}

SpectralField SpectralDomain::truncate_from(const SpectralDomain& fine,
                                            const SpectralField& fine_field) const {
  SpectralField out;
  truncate_from_into(fine, fine_field, out);
  return out;
}

}  // namespace dampedwave
