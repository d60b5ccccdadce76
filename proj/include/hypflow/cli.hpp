#pragma once

// CLI verb implementations, callable from tests and the pybind module.

#include "hypflow/config.hpp"
#include "hypflow/orbit.hpp"

namespace hypflow::cli {

// Preset or inline generators from config; inline matrices must have unit
// determinant within 1e-6.
GroupPreset group_from_config(const RunConfig& cfg);

int cmd_orbit(const RunConfig& cfg);
int cmd_delta(const RunConfig& cfg);
int cmd_measure(const RunConfig& cfg);
int cmd_classify(const RunConfig& cfg);

}  // namespace hypflow::cli
