// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

namespace wrdyn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

/// wrdyn <kinetic|simulate|stationary|stability|meso|bounds> --config <file>
///       [--out <dir>] [--seed <u64>] [--workers <n>] [--quiet]
///
/// Everything is computed before the output directory is touched, so a failed
/// run leaves no files behind.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wrdyn::cli
