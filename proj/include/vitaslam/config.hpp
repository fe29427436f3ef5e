#ifndef VITASLAM_CONFIG_HPP
#define VITASLAM_CONFIG_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "vitaslam/experience_map.hpp"
#include "vitaslam/simulator.hpp"

namespace vitaslam {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Every tunable in one place, overridable from a plain key = value file.
struct Params {
    SimulatorConfig sim;

    // Visual frontend.
    int visual_profile_len = 48;
    int visual_max_shift = 4;
    // The camera adds per-frame pixel noise, so even two frames taken from
    // the same pose differ by roughly the noise floor of the profile
    // distance. The default threshold sits below that floor: in the sparse
    // arena appearance alone is never trusted to declare a revisit, which is
    // exactly the failure mode the tactile channel compensates for.
    double visual_threshold = 0.0005;

    // Tactile frontend.
    int tactile_normal_k = 4;
    int tactile_pfh_bins = 5;
    double tactile_w_pfh = 0.6;
    double tactile_w_sda = 0.4;
    // Whisker deflections are noise-free, so a true revisit of the same spot
    // on the same contact geometry reproduces the template exactly (distance
    // 0), while whisks a step or two away measure >= ~1e-3 even where the
    // standoff profile mirrors itself. A strict threshold keeps those
    // near-past and mirror-phase signatures distinct so loop closures only
    // fire on genuine revisits.
    double tactile_threshold = 0.0005;

    // Pose cell network.
    int pc_nx = 21;
    int pc_ny = 21;
    int pc_nth = 36;
    double pc_extent_x = 10.0;
    double pc_extent_y = 10.0;
    // Strong enough that the settled packet's peak stays above a single
    // injected bump (isolated spurious matches cannot move the argmax), weak
    // enough that sustained injection still relocates the packet.
    double pc_inhibition = 0.00005;
    double pc_inject_visual = 0.02;
    double pc_inject_tactile = 0.02;

    // Experience map.
    double map_r_pc = 2.0;
    double map_alpha = 0.5;
    int map_relax_iterations = 20;

    // Run control: 0 means the full scripted trajectory.
    int run_max_cycles = 0;

    /// Apply one key = value override. Throws ConfigError on unknown keys or
    /// unparsable values.
    void set(const std::string& key, const std::string& value);
};

/// Parse a key = value stream ('#' comments, blank lines allowed) on top of
/// the defaults in `params`. Errors mention the 1-based line number.
void load_config(std::istream& in, Params& params);

/// Same, from a file path; the path is included in error messages.
Params load_config_file(const std::string& path);

} // namespace vitaslam

#endif
