#include "pdct/run_config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "pdct/error.hpp"

namespace pdct {

namespace fs = std::filesystem;

std::string_view opnorm_target_name(OpnormTarget t)
{
    switch (t) {
    case OpnormTarget::Stacked:
        return "stacked";
    case OpnormTarget::Projector:
        return "projector";
    case OpnormTarget::Gradient:
        return "gradient";
    case OpnormTarget::Identity:
        return "identity";
    }
    return "stacked";
}

namespace {

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(std::string_view v)
{
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
        throw ConfigError("expected a number, got '" + std::string(v) + "'");
    }
    return out;
}

template <class T>
T to_unsigned(std::string_view v)
{
    T out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw ConfigError("expected a nonnegative integer, got '" + std::string(v) + "'");
    }
    return out;
}

int to_int(std::string_view v)
{
    int out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw ConfigError("expected an integer, got '" + std::string(v) + "'");
    }
    return out;
}

bool to_bool(std::string_view v)
{
    if (v == "true" || v == "yes" || v == "1") {
        return true;
    }
    if (v == "false" || v == "no" || v == "0") {
        return false;
    }
    throw ConfigError("expected true or false, got '" + std::string(v) + "'");
}

using Setter = std::function<void(RunConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters()
{
    static const std::map<std::string, Setter, std::less<>> table = {
        {"image_size", [](RunConfig& c, std::string_view v) { c.image_size = to_unsigned<std::size_t>(v); }},
        {"image_side",
         [](RunConfig& c, std::string_view v) { c.image_side = v == "auto" ? 0.0 : to_double(v); }},
        {"source_radius", [](RunConfig& c, std::string_view v) { c.source_radius = to_double(v); }},
        {"source_detector_distance",
         [](RunConfig& c, std::string_view v) { c.source_detector_distance = to_double(v); }},
        {"n_views", [](RunConfig& c, std::string_view v) { c.n_views = to_unsigned<std::size_t>(v); }},
        {"n_bins", [](RunConfig& c, std::string_view v) { c.n_bins = to_unsigned<std::size_t>(v); }},
        {"bin_size", [](RunConfig& c, std::string_view v) { c.bin_size = to_double(v); }},

        {"phantom_seed", [](RunConfig& c, std::string_view v) { c.phantom.seed = to_unsigned<std::uint64_t>(v); }},
        {"n_calcifications",
         [](RunConfig& c, std::string_view v) { c.phantom.n_calcifications = to_unsigned<std::size_t>(v); }},
        {"n_blobs", [](RunConfig& c, std::string_view v) { c.phantom.n_blobs = to_unsigned<std::size_t>(v); }},
        {"fat_value", [](RunConfig& c, std::string_view v) { c.phantom.fat_value = to_double(v); }},
        {"fibroglandular_value",
         [](RunConfig& c, std::string_view v) { c.phantom.fibroglandular_value = to_double(v); }},
        {"skin_value", [](RunConfig& c, std::string_view v) { c.phantom.skin_value = to_double(v); }},
        {"calc_min", [](RunConfig& c, std::string_view v) { c.phantom.calc_min = to_double(v); }},
        {"calc_max", [](RunConfig& c, std::string_view v) { c.phantom.calc_max = to_double(v); }},

        {"noise",
         [](RunConfig& c, std::string_view v) {
             if (v == "poisson") {
                 c.noise = true;
             } else if (v == "none") {
                 c.noise = false;
             } else {
                 throw ConfigError("noise must be poisson or none");
             }
         }},
        {"incident_counts", [](RunConfig& c, std::string_view v) { c.noise_spec.incident_counts = to_double(v); }},
        {"noise_seed", [](RunConfig& c, std::string_view v) { c.noise_spec.seed = to_unsigned<std::uint64_t>(v); }},

        {"instance",
         [](RunConfig& c, std::string_view v) {
             try {
                 c.solver.instance = parse_instance(v);
             } catch (const Error& e) {
                 throw ConfigError(e.what());
             }
         }},
        {"lambda", [](RunConfig& c, std::string_view v) { c.solver.lambda = to_double(v); }},
        {"epsilon", [](RunConfig& c, std::string_view v) { c.solver.epsilon = to_double(v); }},
        {"max_iters", [](RunConfig& c, std::string_view v) { c.solver.max_iters = to_int(v); }},
        {"gap_tol", [](RunConfig& c, std::string_view v) { c.solver.gap_tol = to_double(v); }},
        {"theta", [](RunConfig& c, std::string_view v) { c.solver.theta = to_double(v); }},
        {"step_safety", [](RunConfig& c, std::string_view v) { c.solver.step_safety = to_double(v); }},
        {"power_iters", [](RunConfig& c, std::string_view v) { c.solver.power_iters = to_int(v); }},
        {"nonneg_images", [](RunConfig& c, std::string_view v) { c.solver.nonneg_images = to_bool(v); }},
        {"report_interval", [](RunConfig& c, std::string_view v) { c.solver.report_interval = to_int(v); }},
        {"lambda_in_operator", [](RunConfig& c, std::string_view v) { c.solver.lambda_in_operator = to_bool(v); }},
        {"kl_clamp_data", [](RunConfig& c, std::string_view v) { c.kl_clamp_data = to_bool(v); }},

        {"opnorm_operator",
         [](RunConfig& c, std::string_view v) {
             for (auto t : {OpnormTarget::Stacked, OpnormTarget::Projector, OpnormTarget::Gradient,
                            OpnormTarget::Identity}) {
                 if (v == opnorm_target_name(t)) {
                     c.opnorm_target = t;
                     return;
                 }
             }
             throw ConfigError("opnorm_operator must be stacked, projector, gradient or identity");
         }},

        {"output_dir", [](RunConfig& c, std::string_view v) { c.output_dir = fs::path(std::string(v)); }},
        {"sinogram", [](RunConfig& c, std::string_view v) { c.sinogram = fs::path(std::string(v)); }},
        {"export_input", [](RunConfig& c, std::string_view v) { c.export_input = fs::path(std::string(v)); }},
        {"export_output", [](RunConfig& c, std::string_view v) { c.export_output = fs::path(std::string(v)); }},
        {"window_lo", [](RunConfig& c, std::string_view v) { c.window_lo = to_double(v); }},
        {"window_hi", [](RunConfig& c, std::string_view v) { c.window_hi = to_double(v); }},
    };
    return table;
}

fs::path resolve(const fs::path& base, const fs::path& p)
{
    if (p.empty() || p.is_absolute()) {
        return p;
    }
    return (base / p).lexically_normal();
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

RunConfig RunConfig::parse(std::string_view text, const fs::path& base_dir)
{
    RunConfig c;
    c.base_dir = base_dir;
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const std::string where = "line " + std::to_string(line_no) + ": ";
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(where + "expected `key = value`");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError(where + "expected `key = value`");
        }
        const auto it = setters().find(key);
        if (it == setters().end()) {
            throw ConfigError(where + "unknown key '" + std::string(key) + "'");
        }
        if (!seen.insert(std::string(key)).second) {
            throw ConfigError(where + "duplicate key '" + std::string(key) + "'");
        }
        try {
            it->second(c, value);
        } catch (const ConfigError& e) {
            throw ConfigError(where + std::string(key) + ": " + e.what());
        }
    }
    if (!(c.window_lo < c.window_hi)) {
        throw ConfigError("window_lo must be below window_hi");
    }
    c.phantom.m = c.image_size;
    return c;
}

RunConfig RunConfig::load(const fs::path& file)
{
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw IoError("cannot open config file " + file.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    fs::path base = file.parent_path();
    if (base.empty()) {
        base = ".";
    }
    return parse(ss.str(), fs::absolute(base).lexically_normal());
}

double RunConfig::resolved_image_side() const
{
    if (image_side > 0.0) {
        return image_side;
    }
    return FanBeamGeometry::inscribed_image_side(source_radius, source_detector_distance, n_bins, bin_size);
}

FanBeamGeometry RunConfig::geometry() const
{
    auto g = FanBeamGeometry::circular(image_size, resolved_image_side(), n_views, n_bins, bin_size, source_radius,
                                       source_detector_distance);
    g.validate();
    return g;
}

fs::path RunConfig::output_path() const
{
    return resolve(base_dir, output_dir);
}

fs::path RunConfig::sinogram_path() const
{
    return sinogram.empty() ? output_path() / "sinogram_noisy.img" : resolve(base_dir, sinogram);
}

fs::path RunConfig::export_input_path() const
{
    return export_input.empty() ? output_path() / "recon.img" : resolve(base_dir, export_input);
}

fs::path RunConfig::export_output_path() const
{
    if (!export_output.empty()) {
        return resolve(base_dir, export_output);
    }
    fs::path p = export_input_path();
    p.replace_extension(".pgm");
    return p;
}

std::string RunConfig::echo() const
{
    std::ostringstream o;
    auto kv = [&o](std::string_view k, const std::string& v) { o << k << " = " << v << '\n'; };
    kv("image_size", std::to_string(image_size));
    kv("image_side", fmt(resolved_image_side()));
    kv("source_radius", fmt(source_radius));
    kv("source_detector_distance", fmt(source_detector_distance));
    kv("n_views", std::to_string(n_views));
    kv("n_bins", std::to_string(n_bins));
    kv("bin_size", fmt(bin_size));
    kv("phantom_seed", std::to_string(phantom.seed));
    kv("n_calcifications", std::to_string(phantom.n_calcifications));
    kv("n_blobs", std::to_string(phantom.n_blobs));
    kv("fat_value", fmt(phantom.fat_value));
    kv("fibroglandular_value", fmt(phantom.fibroglandular_value));
    kv("skin_value", fmt(phantom.skin_value));
    kv("calc_min", fmt(phantom.calc_min));
    kv("calc_max", fmt(phantom.calc_max));
    kv("noise", noise ? "poisson" : "none");
    kv("incident_counts", fmt(noise_spec.incident_counts));
    kv("noise_seed", std::to_string(noise_spec.seed));
    kv("instance", std::string(instance_name(solver.instance)));
    kv("lambda", fmt(solver.lambda));
    kv("epsilon", fmt(solver.epsilon));
    kv("max_iters", std::to_string(solver.max_iters));
    kv("gap_tol", fmt(solver.gap_tol));
    kv("theta", fmt(solver.theta));
    kv("step_safety", fmt(solver.step_safety));
    kv("power_iters", std::to_string(solver.power_iters));
    kv("nonneg_images", solver.nonneg_images ? "true" : "false");
    kv("report_interval", std::to_string(solver.report_interval));
    kv("lambda_in_operator", solver.lambda_in_operator ? "true" : "false");
    kv("kl_clamp_data", kl_clamp_data ? "true" : "false");
    kv("opnorm_operator", std::string(opnorm_target_name(opnorm_target)));
    kv("output_dir", output_path().string());
    kv("sinogram", sinogram_path().string());
    kv("window_lo", fmt(window_lo));
    kv("window_hi", fmt(window_hi));
    return o.str();
}

} // namespace pdct
