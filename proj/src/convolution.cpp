// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "wrdyn/convolution.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "wrdyn/log.hpp"

namespace wrdyn {

namespace {

// The FFTW planner is not thread-safe; execution with new-array calls is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

double min_image(int m, int n, double h) { return std::min(m, n - m) * h; }

}  // namespace

std::vector<double> sample_kernel_on_grid(const GridSpec& grid, const KernelSpec& spec) {
  std::vector<double> k(grid.cells());
  const int n0 = grid.points[0];
  const int n1 = grid.points[1];
  const double h0 = grid.spacing(0);
  const double h1 = grid.spacing(1);
  for (int i1 = 0; i1 < n1; ++i1) {
    const double y = grid.dimension == 2 ? min_image(i1, n1, h1) : 0.0;
    for (int i0 = 0; i0 < n0; ++i0) {
      const double x = min_image(i0, n0, h0);
      k[grid.flatten(i0, i1)] = kernel_eval(spec, std::hypot(x, y));
    }
  }
  return k;
}

struct PeriodicConvolver::SpectralPlan {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::size_t real_size = 0;
  std::size_t complex_size = 0;

  explicit SpectralPlan(const GridSpec& grid) {
    int dims[2];
    int rank = grid.dimension;
    if (rank == 1) {
      dims[0] = grid.points[0];
    } else {
      dims[0] = grid.points[1];
      dims[1] = grid.points[0];
    }
    real_size = grid.cells();
    complex_size = (grid.dimension == 1 ? 1 : static_cast<std::size_t>(grid.points[1])) *
                   (static_cast<std::size_t>(grid.points[0]) / 2 + 1);
    std::lock_guard<std::mutex> lock(planner_mutex());
    double* r = fftw_alloc_real(real_size);
    fftw_complex* c = fftw_alloc_complex(complex_size);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward = fftw_plan_dft_r2c(rank, dims, r, c, flags);
    backward = fftw_plan_dft_c2r(rank, dims, c, r, flags);
    fftw_free(r);
    fftw_free(c);
    if (!forward || !backward) throw std::runtime_error("FFTW planning failed");
  }

  ~SpectralPlan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }

  SpectralPlan(const SpectralPlan&) = delete;
  SpectralPlan& operator=(const SpectralPlan&) = delete;

  void r2c(const double* in, std::complex<double>* out) const {
    // r2c does not modify its input.
    fftw_execute_dft_r2c(forward, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
  }
  void c2r(std::complex<double>* in, double* out) const {
    fftw_execute_dft_c2r(backward, reinterpret_cast<fftw_complex*>(in), out);
  }
};

PeriodicConvolver::PeriodicConvolver(const GridSpec& grid, const KernelSpec& spec, ConvolutionMethod method)
    : grid_(grid), spec_(spec), method_(method), sampled_(sample_kernel_on_grid(grid, spec)) {
  for (int a = 0; a < grid.dimension; ++a) {
    if (spec.range > grid.box_length[a] / 4.0) {
      std::ostringstream msg;
      msg << "kernel range " << spec.range << " exceeds a quarter of the box (" << grid.box_length[a]
          << "); periodic wrap-around is not negligible";
      log_warning(msg.str());
      break;
    }
  }
  double s = 0.0;
  for (double v : sampled_) s += v;
  discrete_mass_ = s * grid_.cell_volume();

  if (method_ == ConvolutionMethod::spectral) {
    plan_ = std::make_shared<const SpectralPlan>(grid_);
    kernel_hat_.resize(plan_->complex_size);
    plan_->r2c(sampled_.data(), kernel_hat_.data());
    // Fold cell volume and the 1/N of the unnormalized inverse into the kernel.
    const double scale = grid_.cell_volume() / static_cast<double>(grid_.cells());
    for (auto& c : kernel_hat_) c *= scale;
  }
}

double PeriodicConvolver::discrete_fourier(std::array<int, 2> mode) const {
  const int n0 = grid_.points[0];
  const int n1 = grid_.points[1];
  double s = 0.0;
  for (int i1 = 0; i1 < n1; ++i1) {
    for (int i0 = 0; i0 < n0; ++i0) {
      double phase = 2.0 * std::numbers::pi * static_cast<double>(mode[0]) * i0 / n0;
      if (grid_.dimension == 2) phase += 2.0 * std::numbers::pi * static_cast<double>(mode[1]) * i1 / n1;
      s += sampled_[grid_.flatten(i0, i1)] * std::cos(phase);
    }
  }
  return s * grid_.cell_volume();
}

Field PeriodicConvolver::apply(const Field& f) const {
  require_same_grid(grid_, f.grid(), "periodic_convolve");
  Field out(grid_);
  apply(f.values(), out.values());
  return out;
}

void PeriodicConvolver::apply(std::span<const double> in, std::span<double> out) const {
  if (in.size() != grid_.cells() || out.size() != grid_.cells())
    throw std::invalid_argument("periodic_convolve: buffer size does not match grid");
  if (method_ == ConvolutionMethod::spectral)
    apply_spectral(in, out);
  else
    apply_direct(in, out);
}

void PeriodicConvolver::apply_direct(std::span<const double> in, std::span<double> out) const {
  const int n0 = grid_.points[0];
  const int n1 = grid_.points[1];
  const double vol = grid_.cell_volume();
  const auto cells = static_cast<std::ptrdiff_t>(grid_.cells());
  const double* k = sampled_.data();
  const double* f = in.data();
  double* o = out.data();
  // Each output cell is summed serially, so results do not depend on the
  // thread count.
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < cells; ++j) {
    const int j0 = static_cast<int>(j % n0);
    const int j1 = static_cast<int>(j / n0);
    double s = 0.0;
    for (int m1 = 0; m1 < n1; ++m1) {
      const int d1 = (j1 - m1 + n1) % n1;
      const double* krow = k + static_cast<std::ptrdiff_t>(d1) * n0;
      const double* frow = f + static_cast<std::ptrdiff_t>(m1) * n0;
      for (int m0 = 0; m0 <= j0; ++m0) s += krow[j0 - m0] * frow[m0];
      for (int m0 = j0 + 1; m0 < n0; ++m0) s += krow[j0 - m0 + n0] * frow[m0];
    }
    o[j] = s * vol;
  }
}

void PeriodicConvolver::apply_spectral(std::span<const double> in, std::span<double> out) const {
  std::vector<std::complex<double>> spectrum(plan_->complex_size);
  plan_->r2c(in.data(), spectrum.data());
  for (std::size_t i = 0; i < spectrum.size(); ++i) spectrum[i] *= kernel_hat_[i];
  plan_->c2r(spectrum.data(), out.data());
}

Field periodic_convolve(const Field& f, const KernelSpec& spec, ConvolutionMethod method) {
  return PeriodicConvolver(f.grid(), spec, method).apply(f);
}

namespace reference {

Field periodic_convolve_serial(const Field& f, const KernelSpec& spec) {
  const GridSpec& g = f.grid();
  const int n0 = g.points[0];
  const int n1 = g.points[1];
  const double h0 = g.spacing(0);
  const double h1 = g.spacing(1);
  Field out(g);
  for (int j1 = 0; j1 < n1; ++j1) {
    for (int j0 = 0; j0 < n0; ++j0) {
      double s = 0.0;
      for (int m1 = 0; m1 < n1; ++m1) {
        for (int m0 = 0; m0 < n0; ++m0) {
          const double dx = min_image((j0 - m0 + n0) % n0, n0, h0);
          const double dy = g.dimension == 2 ? min_image((j1 - m1 + n1) % n1, n1, h1) : 0.0;
          s += kernel_eval(spec, std::hypot(dx, dy)) * f.at(m0, m1);
        }
      }
      out[g.flatten(j0, j1)] = s * g.cell_volume();
    }
  }
  return out;
}

}  // namespace reference

}  // namespace wrdyn
