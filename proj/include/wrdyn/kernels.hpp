// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>
#include <string_view>

#include "wrdyn/random.hpp"

namespace wrdyn {

/// Points and displacements; the second coordinate is unused (zero) in d = 1.
using Vec = std::array<double, 2>;

enum class KernelFamily { tophat, gaussian, exponential };

std::string_view to_string(KernelFamily family);
KernelFamily parse_kernel_family(std::string_view name);

/// Radially symmetric nonnegative kernel. Used both for jump kernels and for
/// repulsion potentials.
///
///   tophat       amplitude * 1[r <= range]
///   gaussian     amplitude * exp(-r^2 / (2 range^2))
///   exponential  amplitude * exp(-r / range)
struct KernelSpec {
  KernelFamily family = KernelFamily::tophat;
  double amplitude = 0.0;
  double range = 1.0;

  bool operator==(const KernelSpec&) const = default;
};

/// Validating constructor: amplitude >= 0 and range > 0, both finite.
KernelSpec make_kernel(KernelFamily family, double amplitude, double range);

void check_dimension(int d);

double kernel_eval(const KernelSpec& spec, double r);

/// Integral over R^d (closed form per family).
double kernel_mass(const KernelSpec& spec, int d);

/// Essential supremum; every family peaks at the origin.
inline double kernel_sup(const KernelSpec& spec) { return spec.amplitude; }

/// Radial Fourier transform, integral of k(x) exp(i p.x) dx, at |p| = p.
double kernel_fourier(const KernelSpec& spec, double p, int d);

/// Radius beyond which the kernel is below 1e-12 (exactly the support for tophat).
double kernel_cutoff(const KernelSpec& spec);

/// Draws a displacement with density kernel / mass in dimension d.
Vec sample_displacement(const KernelSpec& spec, int d, RandomStream& rng);

}  // namespace wrdyn
