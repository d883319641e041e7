// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "wrdyn/grid.hpp"
#include "wrdyn/kernels.hpp"

namespace wrdyn {

enum class ConvolutionMethod {
  direct,    ///< O(N^2d) sum, OpenMP-parallel over output cells
  spectral,  ///< FFTW real transforms, O(N^d log N)
};

/// Kernel sampled at the minimum-image distance of every grid displacement,
/// flat-indexed like a Field (displacement index m per axis, 0 <= m < N).
std::vector<double> sample_kernel_on_grid(const GridSpec& grid, const KernelSpec& spec);

/// Periodic convolution (k * f)(x_j) ~ sum_m k(x_j - x_m) f(x_m) h^d on a fixed
/// grid. Construction samples the kernel once; apply() is const and may be
/// called concurrently.
class PeriodicConvolver {
 public:
  PeriodicConvolver(const GridSpec& grid, const KernelSpec& spec, ConvolutionMethod method = ConvolutionMethod::spectral);

  const GridSpec& grid() const { return grid_; }
  const KernelSpec& kernel() const { return spec_; }
  ConvolutionMethod method() const { return method_; }

  Field apply(const Field& f) const;
  void apply(std::span<const double> in, std::span<double> out) const;

  /// Riemann sum of the sampled kernel; equals the response to a constant field.
  double discrete_mass() const { return discrete_mass_; }
  /// Eigenvalue of the grid convolution on the Fourier mode with integer index k.
  double discrete_fourier(std::array<int, 2> mode) const;

  std::span<const double> sampled_kernel() const { return sampled_; }

 private:
  struct SpectralPlan;

  void apply_direct(std::span<const double> in, std::span<double> out) const;
  void apply_spectral(std::span<const double> in, std::span<double> out) const;

  GridSpec grid_;
  KernelSpec spec_;
  ConvolutionMethod method_;
  std::vector<double> sampled_;
  double discrete_mass_ = 0.0;
  std::shared_ptr<const SpectralPlan> plan_;
  std::vector<std::complex<double>> kernel_hat_;
};

Field periodic_convolve(const Field& f, const KernelSpec& spec, ConvolutionMethod method = ConvolutionMethod::spectral);

namespace reference {

/// Single-threaded direct sum. Kept as the oracle for the parallel and
/// spectral kernels.
Field periodic_convolve_serial(const Field& f, const KernelSpec& spec);

}  // namespace reference

}  // namespace wrdyn
