// pdct command-line front end; talks to the library only through the C API.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pdct/pdct.h"

namespace {

void print_line(const char* line, void*)
{
    std::printf("%s\n", line);
}

int report_failure(pdct_status s)
{
    std::fprintf(stderr, "pdct: %s: %s\n", pdct_status_name(s), pdct_last_error());
    return 1;
}

// Owns a loaded config for the lifetime of one command.
class Config {
public:
    ~Config() { pdct_config_destroy(c_); }

    pdct_status load(const std::string& path) { return pdct_config_load(path.c_str(), &c_); }
    pdct_config* get() const { return c_; }

private:
    pdct_config* c_ = nullptr;
};

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Primal-dual CT reconstruction toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", pdct_version());

    std::string config_path;
    std::vector<double> window;
    std::vector<std::uint32_t> roi;
    std::string input;
    std::string output;

    auto* simulate = app.add_subcommand("simulate", "Write phantom and clean/noisy sinograms");
    simulate->add_option("--config", config_path, "Run configuration file")->required()->check(CLI::ExistingFile);

    auto* reconstruct = app.add_subcommand("reconstruct", "Run the configured solver instance");
    reconstruct->add_option("--config", config_path, "Run configuration file")->required()->check(CLI::ExistingFile);

    auto* opnorm = app.add_subcommand("opnorm", "Estimate the operator norm by power iteration");
    opnorm->add_option("--config", config_path, "Run configuration file")->required()->check(CLI::ExistingFile);

    auto* pgm = app.add_subcommand("export-pgm", "Export an image field as an 8-bit PGM");
    pgm->add_option("--config", config_path, "Run configuration file")->check(CLI::ExistingFile);
    pgm->add_option("--window", window, "Display window LO HI (default 0.95 1.15)")->expected(2);
    pgm->add_option("--input", input, "Image field to export (default output_dir/recon.img)");
    pgm->add_option("--output", output, "PGM path (default: input with .pgm extension)");
    pgm->add_option("--roi", roi, "Crop X Y WIDTH HEIGHT in pixels")->expected(4);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    Config cfg;
    if (!config_path.empty()) {
        if (const auto s = cfg.load(config_path); s != PDCT_OK) {
            return report_failure(s);
        }
    }

    if (*simulate) {
        const auto s = pdct_cmd_simulate(cfg.get(), print_line, nullptr);
        return s == PDCT_OK ? 0 : report_failure(s);
    }
    if (*reconstruct) {
        int code = 1;
        const auto s = pdct_cmd_reconstruct(cfg.get(), print_line, nullptr, &code);
        return s == PDCT_OK ? code : report_failure(s);
    }
    if (*opnorm) {
        const auto s = pdct_cmd_opnorm(cfg.get(), print_line, nullptr);
        return s == PDCT_OK ? 0 : report_failure(s);
    }

    // export-pgm
    const std::uint32_t* roi_ptr = roi.empty() ? nullptr : roi.data();
    if (cfg.get() != nullptr) {
        if (!window.empty()) {
            if (const auto s = pdct_config_set_window(cfg.get(), window[0], window[1]); s != PDCT_OK) {
                return report_failure(s);
            }
        }
        const auto s = pdct_cmd_export_pgm(cfg.get(), input.empty() ? nullptr : input.c_str(),
                                           output.empty() ? nullptr : output.c_str(), roi_ptr);
        return s == PDCT_OK ? 0 : report_failure(s);
    }
    if (input.empty()) {
        std::fprintf(stderr, "pdct: export-pgm needs --config or --input\n");
        return 1;
    }
    const double lo = window.empty() ? 0.95 : window[0];
    const double hi = window.empty() ? 1.15 : window[1];
    std::string out_path = output;
    if (out_path.empty()) {
        const auto dot = input.find_last_of('.');
        const auto slash = input.find_last_of('/');
        const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
        out_path = (has_ext ? input.substr(0, dot) : input) + ".pgm";
    }
    pdct_field* f = nullptr;
    if (const auto s = pdct_field_read(input.c_str(), &f); s != PDCT_OK) {
        return report_failure(s);
    }
    const auto s = pdct_export_pgm(f, lo, hi, roi_ptr, out_path.c_str());
    pdct_field_destroy(f);
    return s == PDCT_OK ? 0 : report_failure(s);
}
