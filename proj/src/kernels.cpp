// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "wrdyn/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wrdyn {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTailLevel = 1e-12;
}  // namespace

std::string_view to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::tophat: return "tophat";
    case KernelFamily::gaussian: return "gaussian";
    case KernelFamily::exponential: return "exponential";
  }
  return "unknown";
}

KernelFamily parse_kernel_family(std::string_view name) {
  if (name == "tophat") return KernelFamily::tophat;
  if (name == "gaussian") return KernelFamily::gaussian;
  if (name == "exponential") return KernelFamily::exponential;
  throw std::invalid_argument("unknown kernel family '" + std::string(name) + "'");
}

KernelSpec make_kernel(KernelFamily family, double amplitude, double range) {
  if (!std::isfinite(amplitude) || amplitude < 0.0)
    throw std::invalid_argument("kernel amplitude must be finite and nonnegative");
  if (!std::isfinite(range) || range <= 0.0) throw std::invalid_argument("kernel range must be finite and positive");
  return KernelSpec{family, amplitude, range};
}

void check_dimension(int d) {
  if (d != 1 && d != 2) throw std::invalid_argument("unsupported dimension " + std::to_string(d) + " (expected 1 or 2)");
}

double kernel_eval(const KernelSpec& spec, double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("kernel_eval: radius must be nonnegative");
  const double a = spec.amplitude;
  const double s = spec.range;
  switch (spec.family) {
    case KernelFamily::tophat: return r <= s ? a : 0.0;
    case KernelFamily::gaussian: return a * std::exp(-r * r / (2.0 * s * s));
    case KernelFamily::exponential: return a * std::exp(-r / s);
  }
  return 0.0;
}

double kernel_mass(const KernelSpec& spec, int d) {
  check_dimension(d);
  const double a = spec.amplitude;
  const double s = spec.range;
  switch (spec.family) {
    case KernelFamily::tophat: return d == 1 ? 2.0 * a * s : a * kPi * s * s;
    case KernelFamily::gaussian: return d == 1 ? a * s * std::sqrt(2.0 * kPi) : 2.0 * kPi * a * s * s;
    case KernelFamily::exponential: return d == 1 ? 2.0 * a * s : 2.0 * kPi * a * s * s;
  }
  return 0.0;
}

double kernel_fourier(const KernelSpec& spec, double p, int d) {
  check_dimension(d);
  if (!(p >= 0.0)) throw std::invalid_argument("kernel_fourier: wavenumber must be nonnegative");
  if (p == 0.0) return kernel_mass(spec, d);
  const double a = spec.amplitude;
  const double s = spec.range;
  switch (spec.family) {
    case KernelFamily::tophat:
      if (d == 1) return 2.0 * a * std::sin(p * s) / p;
      // 2 pi R^2 J1(pR) / (pR)
      return 2.0 * kPi * a * s * s * std::cyl_bessel_j(1.0, p * s) / (p * s);
    case KernelFamily::gaussian: {
      const double damp = std::exp(-0.5 * s * s * p * p);
      return kernel_mass(spec, d) * damp;
    }
    case KernelFamily::exponential: {
      const double q = 1.0 + s * s * p * p;
      return d == 1 ? 2.0 * a * s / q : 2.0 * kPi * a * s * s / (q * std::sqrt(q));
    }
  }
  return 0.0;
}

double kernel_cutoff(const KernelSpec& spec) {
  const double a = spec.amplitude;
  const double s = spec.range;
  switch (spec.family) {
    case KernelFamily::tophat: return s;
    case KernelFamily::gaussian: return a <= kTailLevel ? 0.0 : s * std::sqrt(2.0 * std::log(a / kTailLevel));
    case KernelFamily::exponential: return a <= kTailLevel ? 0.0 : s * std::log(a / kTailLevel);
  }
  return 0.0;
}

Vec sample_displacement(const KernelSpec& spec, int d, RandomStream& rng) {
  check_dimension(d);
  if (!(kernel_mass(spec, d) > 0.0)) throw std::invalid_argument("sample_displacement: kernel has zero mass");
  const double s = spec.range;
  if (spec.family == KernelFamily::gaussian) {
    const double x = s * rng.normal();
    return d == 1 ? Vec{x, 0.0} : Vec{x, s * rng.normal()};
  }
  double radius = 0.0;
  switch (spec.family) {
    case KernelFamily::tophat:
      radius = d == 1 ? s * rng.uniform() : s * std::sqrt(rng.uniform());
      break;
    case KernelFamily::exponential:
      // d = 1: Laplace; d = 2: radial density r exp(-r/s), i.e. Gamma(2, s).
      radius = d == 1 ? rng.exponential(1.0 / s) : rng.gamma(2.0, s);
      break;
    case KernelFamily::gaussian: break;
  }
  if (d == 1) return Vec{rng.uniform() < 0.5 ? -radius : radius, 0.0};
  const double angle = 2.0 * kPi * rng.uniform();
  return Vec{radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace wrdyn
