#pragma once

namespace drcn {

/// Command-line entry point (train | denoise | eval | validate-hdc | rf |
/// info). Exit codes: 0 success, 1 usage/config errors, 2 domain-invalid
/// results (e.g. an HDC pattern that fails validation), 3 I/O errors.
int run_cli(int argc, char** argv);

}  // namespace drcn
