#include "pdct/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "pdct/convex.hpp"
#include "pdct/error.hpp"
#include "pdct/field_io.hpp"
#include "pdct/gradient.hpp"
#include "pdct/power_method.hpp"

namespace pdct {

namespace fs = std::filesystem;

namespace {

void emit(const LogFn& log, const std::string& msg)
{
    if (log) {
        log(msg);
    }
}

fs::path prepare_output_dir(const RunConfig& cfg)
{
    const fs::path dir = cfg.output_path();
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create output directory " + dir.string());
    }
    return dir;
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw IoError("short write to " + path.string());
    }
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool is_kl(Instance inst)
{
    return inst == Instance::KLTV || inst == Instance::PrecondKLTV;
}

} // namespace

SimulateOutputs cmd_simulate(const RunConfig& cfg, const LogFn& log)
{
    const FanBeamGeometry geom = cfg.geometry();
    PhantomSpec spec = cfg.phantom;
    spec.m = cfg.image_size;
    const fs::path dir = prepare_output_dir(cfg);

    const Image u = make_phantom(spec);
    const FanBeamProjector a(geom);
    const Sinogram clean = simulate_sinogram(a, u);
    const Sinogram noisy = cfg.noise ? add_poisson_noise(clean, cfg.noise_spec) : clean;

    SimulateOutputs out{dir / "phantom.img", dir / "sinogram_clean.img", dir / "sinogram_noisy.img",
                        dir / "simulation.txt"};
    write_field(out.phantom, u);
    write_field(out.sinogram_clean, clean);
    write_field(out.sinogram_noisy, noisy);

    std::ostringstream meta;
    meta << "# resolved simulation parameters\n" << cfg.echo();
    meta << "pixel_size = " << fmt(geom.pixel_size()) << '\n';
    meta << "phantom_shape = " << u.width() << "x" << u.height() << '\n';
    meta << "sinogram_shape = " << clean.n_views() << "x" << clean.n_bins() << '\n';
    meta << "sinogram_max = " << fmt(max_abs(clean.values())) << '\n';
    write_text(out.metadata, meta.str());

    emit(log, "wrote " + out.phantom.string());
    emit(log, "wrote " + out.sinogram_clean.string());
    emit(log, "wrote " + out.sinogram_noisy.string());
    return out;
}

ReconstructOutputs cmd_reconstruct(const RunConfig& cfg, const LogFn& log)
{
    const FanBeamGeometry geom = cfg.geometry();
    cfg.solver.validate();
    const fs::path sino_path = cfg.sinogram_path();
    Sinogram g = read_sinogram(sino_path);
    if (g.n_views() != geom.n_views() || g.n_bins() != geom.n_bins) {
        throw ShapeError("sinogram " + sino_path.string() + " is " + std::to_string(g.n_views()) + "x" +
                         std::to_string(g.n_bins()) + " but the geometry expects " +
                         std::to_string(geom.n_views()) + "x" + std::to_string(geom.n_bins));
    }
    const fs::path dir = prepare_output_dir(cfg);

    ReconstructOutputs out;
    if (is_kl(cfg.solver.instance) && cfg.kl_clamp_data) {
        for (double& v : g.values()) {
            if (v < 0.0) {
                v = 0.0;
                ++out.clamped;
            }
        }
    }

    const FanBeamProjector a(geom);
    std::string csv = std::string(kCsvHeader) + "\n";
    const ReportSink sink = [&csv](const IterationReport& r) { csv += csv_row(r) + "\n"; };
    emit(log, "running " + std::string(instance_name(cfg.solver.instance)));
    const SolveResult r = solve(a, geom.image_size, g, cfg.solver, sink);

    out.iterations = r.iterations;
    out.converged = r.converged;
    out.final_gap = r.final_report.gap.conditional_gap;
    out.exit_code = r.converged ? kExitConverged : kExitBudget;
    out.recon = dir / "recon.img";
    out.convergence = dir / "convergence.csv";
    out.summary = dir / "summary.txt";

    write_field(out.recon, r.u);
    write_text(out.convergence, csv);

    std::ostringstream s;
    s << "# convergence.csv columns: " << kCsvHeader << '\n';
    std::istringstream legend(residual_legend(cfg.solver.instance, cfg.solver.nonneg_images));
    for (std::string line; std::getline(legend, line);) {
        s << "#   " << line << '\n';
    }
    s << "instance = " << instance_name(cfg.solver.instance) << '\n';
    s << "sinogram = " << sino_path.string() << '\n';
    s << "lambda = " << fmt(cfg.solver.lambda) << '\n';
    s << "epsilon = " << fmt(cfg.solver.epsilon) << '\n';
    s << "max_iters = " << cfg.solver.max_iters << '\n';
    s << "gap_tol = " << fmt(cfg.solver.gap_tol) << '\n';
    s << "theta = " << fmt(cfg.solver.theta) << '\n';
    s << "nonneg_images = " << (cfg.solver.nonneg_images ? "true" : "false") << '\n';
    s << "lambda_in_operator = " << (cfg.solver.lambda_in_operator ? "true" : "false") << '\n';
    s << "clamped_data_values = " << out.clamped << '\n';
    if (cfg.solver.instance == Instance::PrecondKLTV) {
        s << "steps = diagonal preconditioner\n";
    } else {
        s << "operator_norm = " << fmt(r.operator_norm) << '\n';
        s << "sigma = " << fmt(r.sigma) << '\n';
        s << "tau = " << fmt(r.tau) << '\n';
    }
    s << "iterations = " << r.iterations << '\n';
    s << "converged = " << (r.converged ? "true" : "false") << '\n';
    const GapBreakdown& gb = r.final_report.gap;
    s << "primal = " << fmt(gb.primal) << '\n';
    s << "dual = " << fmt(gb.dual) << '\n';
    s << "conditional_gap = " << fmt(gb.conditional_gap) << '\n';
    for (const auto& t : gb.primal_terms) {
        s << "primal." << t.name << " = " << fmt(t.value) << '\n';
    }
    for (const auto& t : gb.dual_terms) {
        s << "dual." << t.name << " = " << fmt(t.value) << '\n';
    }
    for (const auto& res : gb.residuals) {
        s << "residual." << res.name << " = " << fmt(res.value) << '\n';
    }
    s << "exit_status = " << out.exit_code << '\n';
    write_text(out.summary, s.str());

    emit(log, std::string(r.converged ? "converged" : "iteration budget exhausted") + " after " +
                  std::to_string(r.iterations) + " iterations, gap " + fmt(out.final_gap));
    return out;
}

OpnormReport cmd_opnorm(const RunConfig& cfg)
{
    const std::size_t m = cfg.image_size;
    const PowerMethodOptions opts{cfg.solver.power_iters, 1e-12};
    OpnormReport rep;
    rep.target = cfg.opnorm_target;

    PowerMethodResult pm;
    switch (cfg.opnorm_target) {
    case OpnormTarget::Identity:
        pm = power_method(IdentityOperator(m * m), opts);
        break;
    case OpnormTarget::Gradient:
        pm = power_method(GradientOperator(m), opts);
        break;
    case OpnormTarget::Projector:
        pm = power_method(FanBeamProjector(cfg.geometry()), opts);
        break;
    case OpnormTarget::Stacked: {
        const FanBeamProjector a(cfg.geometry());
        const GradientOperator grad(m);
        pm = power_method(StackedOperator(a, grad), opts);
        break;
    }
    }
    rep.norm = pm.norm;
    rep.iterations = pm.iterations;
    rep.trace = std::move(pm.trace);
    return rep;
}

std::string format_opnorm(const OpnormReport& r)
{
    std::ostringstream s;
    s << "operator = " << opnorm_target_name(r.target) << '\n';
    s << "norm = " << fmt(r.norm) << '\n';
    s << "iterations = " << r.iterations << '\n';
    s << "# n s_n\n";
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
        s << (i + 1) << ' ' << fmt(r.trace[i]) << '\n';
    }
    return s.str();
}

void cmd_export_pgm(const fs::path& input, const fs::path& output, double lo, double hi,
                    const std::optional<Roi>& roi)
{
    const AnyField f = read_field(input);
    if (!std::holds_alternative<Image>(f)) {
        throw ShapeError("export-pgm needs an Image field; " + input.string() + " holds another kind");
    }
    write_pgm(output, std::get<Image>(f), lo, hi, roi);
}

} // namespace pdct
