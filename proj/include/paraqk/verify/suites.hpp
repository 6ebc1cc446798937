#pragma once

#include "paraqk/verify/config.hpp"
#include "paraqk/verify/report.hpp"

namespace paraqk::verify {

/// Runs the selected suites over every (eps1, eps2) case and value of c.
/// Failures inside the geometry at a point are recorded against the checks of
/// that suite; sampler starvation and invalid fixtures throw ConfigError.
VerificationReport run_suite(const RunConfig& config);

/// Default specs of every check a suite can emit, for documentation and
/// tolerance lookup.
std::vector<CheckSpec> check_catalogue();

}  // namespace paraqk::verify
