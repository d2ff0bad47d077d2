#pragma once

#include <iosfwd>

namespace slungload::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,       // bad arguments, config or input files, not Hurwitz
  kInfeasible = 2,  // certificate search found nothing feasible
  kDivergence = 3,  // dynamics diverged or hit a singularity
};

/// Entry point shared by the executable and the tests. Messages go to
/// `out`/`err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace slungload::cli
