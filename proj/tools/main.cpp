// Copyright 2026 The docslm-lite Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "docslm/cli.hpp"

int main(int argc, char** argv) { return docslm::run_cli(argc, argv, std::cout, std::cerr); }
