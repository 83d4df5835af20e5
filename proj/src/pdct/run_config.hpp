#pragma once

// Flat `key = value` run configuration shared by every command.
//
//   # comment
//   image_size = 64
//   instance = kltv
//   lambda = 2e-5
//
// Unknown keys and duplicate keys are errors. Relative paths are resolved
// against the directory holding the config file.

#include <filesystem>
#include <string>
#include <string_view>

#include "pdct/fan_beam.hpp"
#include "pdct/simulation.hpp"
#include "pdct/solvers.hpp"

namespace pdct {

enum class OpnormTarget { Stacked, Projector, Gradient, Identity };

std::string_view opnorm_target_name(OpnormTarget t);

struct RunConfig {
    std::filesystem::path base_dir;

    // geometry; image_side <= 0 means the fan-inscribed default
    std::size_t image_size = 256;
    double image_side = 0.0;
    double source_radius = 40.0;
    double source_detector_distance = 80.0;
    std::size_t n_views = 60;
    std::size_t n_bins = 512;
    double bin_size = 0.02;

    PhantomSpec phantom;
    bool noise = true;
    NoiseSpec noise_spec;

    SolverConfig solver;
    // KL instances clamp negative measured values to 0 before solving
    bool kl_clamp_data = true;

    OpnormTarget opnorm_target = OpnormTarget::Stacked;

    // empty paths take defaults under output_dir
    std::filesystem::path output_dir = "out";
    std::filesystem::path sinogram;
    std::filesystem::path export_input;
    std::filesystem::path export_output;
    double window_lo = 0.95;
    double window_hi = 1.15;

    static RunConfig parse(std::string_view text, const std::filesystem::path& base_dir);
    static RunConfig load(const std::filesystem::path& file);

    FanBeamGeometry geometry() const;
    double resolved_image_side() const;

    std::filesystem::path output_path() const;
    std::filesystem::path sinogram_path() const;
    std::filesystem::path export_input_path() const;
    std::filesystem::path export_output_path() const;

    // Every resolved parameter, one `key = value` per line; parse() accepts it.
    std::string echo() const;
};

} // namespace pdct
