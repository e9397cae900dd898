#pragma once

// Command-line front end shared by the `lfd` tool and the tests.

#include <iosfwd>
#include <string>
#include <vector>

#include "lfd/assembly.hpp"
#include "lfd/config.hpp"
#include "lfd/trajectory.hpp"

namespace lfd::app {

// Simulated teaching run with the configured controller ("proposed" or
// "native"). The native baseline uses its own, larger hand saturation.
Trajectory teach(const RunConfig& config, const std::string& controller);

// Primitive used by trial/batch when no DMP file is given: fitted to a
// noise-free teaching run with the proposed controller.
dmp::PoseDmp default_primitive(const RunConfig& config);

assembly::AssemblyScenario make_scenario(const RunConfig& config, const dmp::PoseDmp& primitive);

// args exclude the program name. Returns the exit status; results go to
// files under --out, a short summary to `out`, errors to `err` as one line:
//   error kind=<parse|input|usage|runtime> file=... line=... field=... msg="..."
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lfd::app
