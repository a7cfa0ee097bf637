// Command-line front end: apply multipliers, query geometry, run the
// verification suites, export reports.
#pragma once

namespace grushin::cli {

/// Dispatches argv. Exit status: 0 success, 1 usage/input error,
/// 2 experiment verdict FAIL.
int run(int argc, const char* const* argv);

}  // namespace grushin::cli
