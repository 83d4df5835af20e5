#include "pdct/pdct.h"

#include <cstring>
#include <algorithm>
#include <exception>
#include <optional>
#include <stdexcept>
#include <new>
#include <string>
#include <utility>

#include "pdct/commands.hpp"
#include "pdct/error.hpp"
#include "pdct/field_io.hpp"
#include "pdct/gradient.hpp"
#include "pdct/pgm.hpp"
#include "pdct/power_method.hpp"
#include "pdct/run_config.hpp"
#include "pdct/simulation.hpp"
#include "pdct/solvers.hpp"

struct pdct_field {
    pdct::AnyField value;
};

struct pdct_projector {
    pdct::FanBeamProjector a;
};

struct pdct_config {
    pdct::RunConfig cfg;
};

namespace {

thread_local std::string g_last_error;

struct NullArgument : std::runtime_error {
    using std::runtime_error::runtime_error;
};

pdct_status fail(pdct_status s, const char* what)
{
    g_last_error = what;
    return s;
}

// Runs f, translating exceptions into status codes.
template <class F>
pdct_status guarded(F&& f) noexcept
{
    try {
        f();
        return PDCT_OK;
    } catch (const pdct::ShapeError& e) {
        return fail(PDCT_ERR_SHAPE, e.what());
    } catch (const pdct::ParameterError& e) {
        return fail(PDCT_ERR_PARAMETER, e.what());
    } catch (const pdct::DivergenceError& e) {
        return fail(PDCT_ERR_DIVERGENCE, e.what());
    } catch (const pdct::DegenerateOperatorError& e) {
        return fail(PDCT_ERR_DEGENERATE, e.what());
    } catch (const pdct::IoError& e) {
        return fail(PDCT_ERR_IO, e.what());
    } catch (const pdct::ConfigError& e) {
        return fail(PDCT_ERR_CONFIG, e.what());
    } catch (const pdct::Error& e) {
        return fail(PDCT_ERR_INTERNAL, e.what());
    } catch (const NullArgument& e) {
        return fail(PDCT_ERR_NULL_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(PDCT_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(PDCT_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(PDCT_ERR_INTERNAL, "unknown error");
    }
}

void require(const void* p, const char* name)
{
    if (p == nullptr) {
        throw NullArgument(std::string(name) + " is NULL");
    }
}

template <class T>
const T& field_as(const pdct_field* f, const char* what)
{
    require(f, what);
    if (const T* p = std::get_if<T>(&f->value)) {
        return *p;
    }
    throw pdct::ShapeError(std::string(what) + " has the wrong field kind");
}

pdct_field* wrap(pdct::AnyField v)
{
    return new pdct_field{std::move(v)};
}

pdct::AnyField make_field(pdct_field_kind kind, uint32_t dim0, uint32_t dim1)
{
    if (dim0 == 0 || dim1 == 0) {
        throw pdct::ShapeError("field dimensions must be positive");
    }
    switch (kind) {
    case PDCT_IMAGE:
        return pdct::Image(dim1, dim0);
    case PDCT_SINOGRAM:
        return pdct::Sinogram(dim0, dim1);
    case PDCT_VECTOR_FIELD:
        return pdct::VectorField(dim1, dim0);
    }
    throw pdct::ParameterError("unknown field kind");
}

std::span<double> values_of(pdct::AnyField& f)
{
    return std::visit([](auto& x) { return x.values(); }, f);
}

std::span<const double> values_of(const pdct::AnyField& f)
{
    return std::visit([](const auto& x) { return x.values(); }, f);
}

pdct::FanBeamGeometry to_geometry(const pdct_geometry_desc& d)
{
    const double side = d.image_side > 0.0 ? d.image_side
                                           : pdct::FanBeamGeometry::inscribed_image_side(
                                                 d.source_radius, d.source_detector_distance, d.n_bins, d.bin_size);
    auto g = pdct::FanBeamGeometry::circular(d.image_size, side, d.n_views, d.n_bins, d.bin_size, d.source_radius,
                                             d.source_detector_distance);
    g.validate();
    return g;
}

pdct::Instance to_instance(pdct_instance i)
{
    switch (i) {
    case PDCT_LS:
        return pdct::Instance::LS;
    case PDCT_LS_NONNEG:
        return pdct::Instance::LSNonNeg;
    case PDCT_L2TV:
        return pdct::Instance::L2TV;
    case PDCT_KLTV:
        return pdct::Instance::KLTV;
    case PDCT_L1TV:
        return pdct::Instance::L1TV;
    case PDCT_CONSTRAINED_TV:
        return pdct::Instance::ConstrainedTV;
    case PDCT_PRECOND_KLTV:
        return pdct::Instance::PrecondKLTV;
    }
    throw pdct::ParameterError("unknown solver instance");
}

double residual_or_zero(const pdct::GapBreakdown& g, std::size_t k)
{
    return k < g.residuals.size() ? g.residuals[k].value : 0.0;
}

pdct_report to_report(const pdct::IterationReport& r)
{
    return pdct_report{r.n,
                       r.gap.primal,
                       r.gap.dual,
                       r.gap.conditional_gap,
                       residual_or_zero(r.gap, 0),
                       residual_or_zero(r.gap, 1),
                       residual_or_zero(r.gap, 2)};
}

std::optional<pdct::Roi> to_roi(const uint32_t* roi)
{
    if (roi == nullptr) {
        return std::nullopt;
    }
    return pdct::Roi{roi[0], roi[1], roi[2], roi[3]};
}

pdct::LogFn to_log(pdct_log_fn log, void* user)
{
    if (log == nullptr) {
        return {};
    }
    return [log, user](std::string_view line) {
        const std::string s(line);
        log(s.c_str(), user);
    };
}

} // namespace

extern "C" {

const char* pdct_version(void)
{
    return "1.0.0";
}

const char* pdct_last_error(void)
{
    return g_last_error.c_str();
}

const char* pdct_status_name(pdct_status s)
{
    switch (s) {
    case PDCT_OK:
        return "ok";
    case PDCT_ERR_SHAPE:
        return "shape error";
    case PDCT_ERR_PARAMETER:
        return "parameter error";
    case PDCT_ERR_DIVERGENCE:
        return "divergence";
    case PDCT_ERR_DEGENERATE:
        return "degenerate operator";
    case PDCT_ERR_IO:
        return "i/o error";
    case PDCT_ERR_CONFIG:
        return "config error";
    case PDCT_ERR_NULL_ARGUMENT:
        return "null argument";
    case PDCT_ERR_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

pdct_status pdct_field_create(pdct_field_kind kind, uint32_t dim0, uint32_t dim1, pdct_field** out)
{
    return guarded([&] {
        require(out, "out");
        *out = wrap(make_field(kind, dim0, dim1));
    });
}

pdct_status pdct_field_from_data(pdct_field_kind kind, uint32_t dim0, uint32_t dim1, const double* data, size_t len,
                                 pdct_field** out)
{
    return guarded([&] {
        require(out, "out");
        require(data, "data");
        auto f = make_field(kind, dim0, dim1);
        auto dst = values_of(f);
        if (dst.size() != len) {
            throw pdct::ShapeError("data length " + std::to_string(len) + " does not match the field size " +
                                   std::to_string(dst.size()));
        }
        std::memcpy(dst.data(), data, len * sizeof(double));
        *out = wrap(std::move(f));
    });
}

void pdct_field_destroy(pdct_field* f)
{
    delete f;
}

pdct_status pdct_field_info(const pdct_field* f, pdct_field_kind* kind, uint32_t* dim0, uint32_t* dim1, size_t* len)
{
    return guarded([&] {
        require(f, "field");
        std::size_t d0 = 0;
        std::size_t d1 = 0;
        pdct_field_kind k = PDCT_IMAGE;
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, pdct::Sinogram>) {
                    k = PDCT_SINOGRAM;
                    d0 = x.n_views();
                    d1 = x.n_bins();
                } else {
                    k = std::is_same_v<T, pdct::Image> ? PDCT_IMAGE : PDCT_VECTOR_FIELD;
                    d0 = x.height();
                    d1 = x.width();
                }
            },
            f->value);
        if (kind) {
            *kind = k;
        }
        if (dim0) {
            *dim0 = static_cast<uint32_t>(d0);
        }
        if (dim1) {
            *dim1 = static_cast<uint32_t>(d1);
        }
        if (len) {
            *len = values_of(f->value).size();
        }
    });
}

pdct_status pdct_field_data(pdct_field* f, double** data)
{
    return guarded([&] {
        require(f, "field");
        require(data, "data");
        *data = values_of(f->value).data();
    });
}

pdct_status pdct_field_read(const char* path, pdct_field** out)
{
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = wrap(pdct::read_field(path));
    });
}

pdct_status pdct_field_write(const pdct_field* f, const char* path)
{
    return guarded([&] {
        require(f, "field");
        require(path, "path");
        std::visit([&](const auto& x) { pdct::write_field(path, x); }, f->value);
    });
}

pdct_status pdct_field_norms(const pdct_field* f, double* l1, double* l2, double* linf)
{
    return guarded([&] {
        require(f, "field");
        const auto n = pdct::norms(values_of(f->value));
        if (l1) {
            *l1 = n.l1;
        }
        if (l2) {
            *l2 = n.l2;
        }
        if (linf) {
            *linf = n.linf;
        }
    });
}

pdct_status pdct_field_inner_product(const pdct_field* a, const pdct_field* b, double* out)
{
    return guarded([&] {
        require(a, "a");
        require(b, "b");
        require(out, "out");
        if (a->value.index() != b->value.index()) {
            throw pdct::ShapeError("inner product of different field kinds");
        }
        const auto va = values_of(a->value);
        const auto vb = values_of(b->value);
        if (va.size() != vb.size()) {
            throw pdct::ShapeError("inner product of differently shaped fields");
        }
        *out = pdct::dot(va, vb);
    });
}

void pdct_geometry_desc_init(pdct_geometry_desc* desc)
{
    if (desc == nullptr) {
        return;
    }
    desc->image_size = 256;
    desc->image_side = 0.0;
    desc->source_radius = 40.0;
    desc->source_detector_distance = 80.0;
    desc->n_views = 60;
    desc->n_bins = 512;
    desc->bin_size = 0.02;
}

pdct_status pdct_projector_create(const pdct_geometry_desc* desc, pdct_projector** out)
{
    return guarded([&] {
        require(desc, "desc");
        require(out, "out");
        *out = new pdct_projector{pdct::FanBeamProjector(to_geometry(*desc))};
    });
}

void pdct_projector_destroy(pdct_projector* p)
{
    delete p;
}

pdct_status pdct_projector_shape(const pdct_projector* p, uint32_t* image_size, uint32_t* n_views, uint32_t* n_bins)
{
    return guarded([&] {
        require(p, "projector");
        const auto& g = p->a.geometry();
        if (image_size) {
            *image_size = static_cast<uint32_t>(g.image_size);
        }
        if (n_views) {
            *n_views = static_cast<uint32_t>(g.n_views());
        }
        if (n_bins) {
            *n_bins = static_cast<uint32_t>(g.n_bins);
        }
    });
}

pdct_status pdct_project(const pdct_projector* p, const pdct_field* image, pdct_field** sinogram)
{
    return guarded([&] {
        require(p, "projector");
        require(sinogram, "sinogram");
        *sinogram = wrap(p->a.project(field_as<pdct::Image>(image, "image")));
    });
}

pdct_status pdct_backproject(const pdct_projector* p, const pdct_field* sinogram, pdct_field** image)
{
    return guarded([&] {
        require(p, "projector");
        require(image, "image");
        *image = wrap(p->a.backproject(field_as<pdct::Sinogram>(sinogram, "sinogram")));
    });
}

pdct_status pdct_gradient(const pdct_field* image, double scale, pdct_field** out)
{
    return guarded([&] {
        require(out, "out");
        *out = wrap(pdct::gradient_scaled(field_as<pdct::Image>(image, "image"), scale));
    });
}

pdct_status pdct_divergence(const pdct_field* vector_field, double scale, pdct_field** out)
{
    return guarded([&] {
        require(out, "out");
        *out = wrap(pdct::divergence_scaled(field_as<pdct::VectorField>(vector_field, "vector_field"), scale));
    });
}

pdct_status pdct_operator_norm(const pdct_projector* p, pdct_operator op, uint32_t max_iters, double* norm,
                               uint32_t* iterations, double* trace, size_t trace_capacity)
{
    return guarded([&] {
        require(p, "projector");
        require(norm, "norm");
        const pdct::PowerMethodOptions opts{static_cast<int>(max_iters), 1e-12};
        const std::size_t m = p->a.geometry().image_size;
        pdct::PowerMethodResult r;
        switch (op) {
        case PDCT_OP_STACKED: {
            const pdct::GradientOperator grad(m);
            r = pdct::power_method(pdct::StackedOperator(p->a, grad), opts);
            break;
        }
        case PDCT_OP_PROJECTOR:
            r = pdct::power_method(p->a, opts);
            break;
        case PDCT_OP_GRADIENT:
            r = pdct::power_method(pdct::GradientOperator(m), opts);
            break;
        case PDCT_OP_IDENTITY:
            r = pdct::power_method(pdct::IdentityOperator(m * m), opts);
            break;
        default:
            throw pdct::ParameterError("unknown operator");
        }
        *norm = r.norm;
        if (iterations) {
            *iterations = static_cast<uint32_t>(r.iterations);
        }
        if (trace) {
            const std::size_t n = std::min(trace_capacity, r.trace.size());
            std::copy_n(r.trace.begin(), n, trace);
        }
    });
}

void pdct_phantom_desc_init(pdct_phantom_desc* desc)
{
    if (desc == nullptr) {
        return;
    }
    const pdct::PhantomSpec d;
    desc->size = static_cast<uint32_t>(d.m);
    desc->seed = d.seed;
    desc->n_calcifications = static_cast<uint32_t>(d.n_calcifications);
    desc->n_blobs = static_cast<uint32_t>(d.n_blobs);
    desc->fat_value = d.fat_value;
    desc->fibroglandular_value = d.fibroglandular_value;
    desc->skin_value = d.skin_value;
    desc->calc_min = d.calc_min;
    desc->calc_max = d.calc_max;
}

pdct_status pdct_make_phantom(const pdct_phantom_desc* desc, pdct_field** out)
{
    return guarded([&] {
        require(desc, "desc");
        require(out, "out");
        pdct::PhantomSpec s;
        s.m = desc->size;
        s.seed = desc->seed;
        s.n_calcifications = desc->n_calcifications;
        s.n_blobs = desc->n_blobs;
        s.fat_value = desc->fat_value;
        s.fibroglandular_value = desc->fibroglandular_value;
        s.skin_value = desc->skin_value;
        s.calc_min = desc->calc_min;
        s.calc_max = desc->calc_max;
        *out = wrap(pdct::make_phantom(s));
    });
}

pdct_status pdct_add_poisson_noise(const pdct_field* sinogram, double incident_counts, uint64_t seed,
                                   pdct_field** out)
{
    return guarded([&] {
        require(out, "out");
        *out = wrap(pdct::add_poisson_noise(field_as<pdct::Sinogram>(sinogram, "sinogram"),
                                            pdct::NoiseSpec{incident_counts, seed}));
    });
}

void pdct_solver_desc_init(pdct_solver_desc* desc)
{
    if (desc == nullptr) {
        return;
    }
    const pdct::SolverConfig d;
    desc->instance = PDCT_L2TV;
    desc->lambda = d.lambda;
    desc->epsilon = d.epsilon;
    desc->max_iters = d.max_iters;
    desc->gap_tol = d.gap_tol;
    desc->theta = d.theta;
    desc->step_safety = d.step_safety;
    desc->power_iters = d.power_iters;
    desc->nonneg_images = d.nonneg_images ? 1 : 0;
    desc->report_interval = d.report_interval;
    desc->lambda_in_operator = d.lambda_in_operator ? 1 : 0;
}

pdct_status pdct_solve(const pdct_projector* p, const pdct_field* sinogram, const pdct_solver_desc* desc,
                       pdct_report_fn on_report, void* user, pdct_field** recon, pdct_solve_summary* summary)
{
    return guarded([&] {
        require(p, "projector");
        require(desc, "desc");
        require(recon, "recon");
        const auto& g = field_as<pdct::Sinogram>(sinogram, "sinogram");
        pdct::SolverConfig cfg;
        cfg.instance = to_instance(desc->instance);
        cfg.lambda = desc->lambda;
        cfg.epsilon = desc->epsilon;
        cfg.max_iters = desc->max_iters;
        cfg.gap_tol = desc->gap_tol;
        cfg.theta = desc->theta;
        cfg.step_safety = desc->step_safety;
        cfg.power_iters = desc->power_iters;
        cfg.nonneg_images = desc->nonneg_images != 0;
        cfg.report_interval = desc->report_interval;
        cfg.lambda_in_operator = desc->lambda_in_operator != 0;
        pdct::ReportSink sink;
        if (on_report) {
            sink = [on_report, user](const pdct::IterationReport& r) {
                const pdct_report c = to_report(r);
                on_report(&c, user);
            };
        }
        auto r = pdct::solve(p->a, p->a.geometry().image_size, g, cfg, sink);
        if (summary) {
            summary->iterations = r.iterations;
            summary->converged = r.converged ? 1 : 0;
            summary->operator_norm = r.operator_norm;
            summary->sigma = r.sigma;
            summary->tau = r.tau;
            summary->final_report = to_report(r.final_report);
        }
        *recon = wrap(std::move(r.u));
    });
}

pdct_status pdct_config_load(const char* path, pdct_config** out)
{
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new pdct_config{pdct::RunConfig::load(path)};
    });
}

pdct_status pdct_config_parse(const char* text, const char* base_dir, pdct_config** out)
{
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        const std::filesystem::path base = base_dir ? std::filesystem::path(base_dir) : std::filesystem::path(".");
        *out = new pdct_config{pdct::RunConfig::parse(text, std::filesystem::absolute(base))};
    });
}

void pdct_config_destroy(pdct_config* c)
{
    delete c;
}

pdct_status pdct_config_set_window(pdct_config* c, double lo, double hi)
{
    return guarded([&] {
        require(c, "config");
        if (!(lo < hi)) {
            throw pdct::ParameterError("display window must satisfy lo < hi");
        }
        c->cfg.window_lo = lo;
        c->cfg.window_hi = hi;
    });
}

pdct_status pdct_cmd_simulate(const pdct_config* c, pdct_log_fn log, void* user)
{
    return guarded([&] {
        require(c, "config");
        pdct::cmd_simulate(c->cfg, to_log(log, user));
    });
}

pdct_status pdct_cmd_reconstruct(const pdct_config* c, pdct_log_fn log, void* user, int* exit_code)
{
    return guarded([&] {
        require(c, "config");
        const auto r = pdct::cmd_reconstruct(c->cfg, to_log(log, user));
        if (exit_code) {
            *exit_code = r.exit_code;
        }
    });
}

pdct_status pdct_cmd_opnorm(const pdct_config* c, pdct_log_fn log, void* user)
{
    return guarded([&] {
        require(c, "config");
        const auto text = pdct::format_opnorm(pdct::cmd_opnorm(c->cfg));
        if (log) {
            std::size_t start = 0;
            while (start < text.size()) {
                const auto nl = text.find('\n', start);
                const std::string line = text.substr(start, nl - start);
                log(line.c_str(), user);
                start = nl == std::string::npos ? text.size() : nl + 1;
            }
        }
    });
}

pdct_status pdct_cmd_export_pgm(const pdct_config* c, const char* input, const char* output, const uint32_t* roi)
{
    return guarded([&] {
        require(c, "config");
        const auto in = input ? std::filesystem::path(input) : c->cfg.export_input_path();
        const auto out = output ? std::filesystem::path(output) : c->cfg.export_output_path();
        pdct::cmd_export_pgm(in, out, c->cfg.window_lo, c->cfg.window_hi, to_roi(roi));
    });
}

pdct_status pdct_export_pgm(const pdct_field* image, double lo, double hi, const uint32_t* roi, const char* path)
{
    return guarded([&] {
        require(path, "path");
        pdct::write_pgm(path, field_as<pdct::Image>(image, "image"), lo, hi, to_roi(roi));
    });
}

} // extern "C"
