// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

namespace wrdyn {

/// Warnings go to stderr unless silenced (CLI --quiet, test binaries).
void log_warning(std::string_view message);
void set_warnings_enabled(bool enabled);

}  // namespace wrdyn
