// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the vegloss authors

#include "vegloss/cli.hpp"

int main(int argc, char** argv) {
    return vegloss::cli::run(argc, argv);
}
