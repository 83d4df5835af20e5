#pragma once

// The four front-end commands. Each takes a resolved RunConfig, writes its
// files and returns what it did; errors propagate as pdct::Error.

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pdct/pgm.hpp"
#include "pdct/run_config.hpp"

namespace pdct {

using LogFn = std::function<void(std::string_view)>;

inline constexpr int kExitConverged = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitBudget = 2;

struct SimulateOutputs {
    std::filesystem::path phantom;
    std::filesystem::path sinogram_clean;
    std::filesystem::path sinogram_noisy;
    std::filesystem::path metadata;
};

// phantom.img, sinogram_clean.img, sinogram_noisy.img and simulation.txt in
// output_dir. Without noise the noisy file is a copy of the clean one.
SimulateOutputs cmd_simulate(const RunConfig& cfg, const LogFn& log = {});

struct ReconstructOutputs {
    int exit_code = kExitError;
    int iterations = 0;
    bool converged = false;
    double final_gap = 0.0;
    std::size_t clamped = 0;   // negative data values set to 0 (KL only)
    std::filesystem::path recon;
    std::filesystem::path convergence;
    std::filesystem::path summary;
};

// recon.img, convergence.csv and summary.txt in output_dir. exit_code is
// kExitConverged or kExitBudget; outputs are written either way.
ReconstructOutputs cmd_reconstruct(const RunConfig& cfg, const LogFn& log = {});

struct OpnormReport {
    OpnormTarget target = OpnormTarget::Stacked;
    double norm = 0.0;
    int iterations = 0;
    std::vector<double> trace;
};

OpnormReport cmd_opnorm(const RunConfig& cfg);
std::string format_opnorm(const OpnormReport& r);

// Reads an Image field and writes it as PGM; other field kinds are rejected.
void cmd_export_pgm(const std::filesystem::path& input, const std::filesystem::path& output, double lo, double hi,
                    const std::optional<Roi>& roi = std::nullopt);

} // namespace pdct
