#pragma once

#include <map>
#include <string>

#include "cocycle/approx.hpp"

namespace cocycle {

/// Parsed experiment configuration file. Sections: [subshift], [generator],
/// [measure], [experiment], [output]; values are scalars, strings or
/// JSON-style nested arrays. Unknown keys are rejected.
struct ConfigFile {
    explicit ConfigFile(ExperimentConfig e) : experiment(std::move(e)) {}

    ExperimentConfig experiment;
    std::string json_path;  // empty = stdout only
    std::string csv_path;
    std::string orbits_path; // plain text orbit export

    static ConfigFile parse_file(const std::string& path,
                                 const std::vector<std::string>& overrides = {});
    static ConfigFile parse_text(const std::string& text,
                                 const std::vector<std::string>& overrides = {});

    /// The `section.key=value` override strings applied on top of the file,
    /// echoed into output headers.
    std::vector<std::string> applied_overrides;
};

} // namespace cocycle
