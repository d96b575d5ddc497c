#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "whw/mesh.hpp"
#include "whw/spectrum.hpp"

namespace whw {

// Runtime configuration shared by the CLI workflows. Loaded from a flat
// `key = value` file, then overridden by command-line flags (flags win).
struct RunConfig {
    SystemKind system = SystemKind::full_A;
    int mesh_n = 128;
    double dt = 0.0; // <= 0: spacing/2
    double t_final = 200.0;
    std::string profile = "bump_heat";
    double s_min = 100.0;
    double s_max = 1000.0;
    int points = 25;
    std::string spacing = "log"; // sample spacing of the scan targets: log | linear
    SearchRegion region;
    double fit_t_start = 25.0;
    double clearance_floor = 1e-6;
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    int jobs = 1;

    void validate() const; // throws ConfigError
};

// Parses `key = value` lines ('#' comments); unknown keys are rejected.
RunConfig load_config(const std::string& path, RunConfig base = {});
RunConfig apply_config_text(const std::string& text, RunConfig base);

} // namespace whw
