// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "wrdyn/cli.hpp"

int main(int argc, char** argv) { return wrdyn::cli::run(argc, argv, std::cout, std::cerr); }
