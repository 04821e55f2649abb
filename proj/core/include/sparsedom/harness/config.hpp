#pragma once

#include <filesystem>
#include <string>

#include "sparsedom/harness/experiment.hpp"

namespace sparsedom::harness {

/// Defaults for a subcommand (`thm11`, `buckley`, ...).
Experiment default_experiment(const std::string& name);

/// Reads an INI file with sections [experiment], [weights], [exponents],
/// [endpoint] on top of the subcommand defaults. Unknown keys are rejected.
Experiment load_experiment(const std::filesystem::path& path, const std::string& name);

/// Same from in-memory text.
Experiment parse_experiment(const std::string& text, const std::string& name);

}  // namespace sparsedom::harness
