// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "wrdyn/log.hpp"

#include <atomic>
#include <iostream>

namespace wrdyn {

namespace {
std::atomic<bool> g_warnings{true};
}

void log_warning(std::string_view message) {
  if (g_warnings.load(std::memory_order_relaxed)) std::cerr << "warning: " << message << '\n';
}

void set_warnings_enabled(bool enabled) { g_warnings.store(enabled, std::memory_order_relaxed); }

}  // namespace wrdyn
