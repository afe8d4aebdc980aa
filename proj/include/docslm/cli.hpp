// Copyright 2026 The docslm-lite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

namespace docslm {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitInternal = 2;

/// Entry point of the `docslm` tool. Subcommands: compress, stream-qa,
/// assign-ocr, mem-sweep, eval. Returns 0 on success, 1 on invalid input and
/// 2 on internal failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace docslm
