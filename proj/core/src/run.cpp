#include "magphon/run.hpp"

#include <array>
#include <nlohmann/json.hpp>
#include <ostream>
#include <string>
#include <string_view>

#include "magphon/errors.hpp"
#include "magphon/output.hpp"
#include "magphon/parallel.hpp"

namespace magphon {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

struct Context {
    const Settings& s;
    const RunSpec& spec;
    OutputMeta meta;
    std::vector<fs::path> written;

    void write(const std::string& name, std::string_view content) {
        const fs::path path = spec.output / name;
        write_text_file(path, content);
        written.push_back(path);
    }
    void write_csv(const std::string& name, std::span<const std::string_view> columns,
                   std::span<const double> values) {
        write(name, csv_text(meta, columns, values));
    }
    void write_json(const std::string& name, json body) {
        json doc;
        doc["meta"] = {{"command", meta.command},
                       {"preset", meta.preset},
                       {"config_hash", "fnv1a64:" + meta.config_hash},
                       {"units", meta.units}};
        for (auto& [k, v] : body.items()) doc[k] = std::move(v);
        write(name, doc.dump(2) + "\n");
    }
};

void run_self_energy(Context& ctx) {
    const Settings& s = ctx.s;
    json sweeps = json::array();
    for (const SigmaKind kind : s.sigma_kinds) {
        SelfEnergySweep sweep{s.tm_axis.values(), s.te_axis.values(), kind, s.layout, s.sigma_eval_override};
        const auto points = sweep_self_energy(s.system, sweep, ctx.spec.jobs);
        const std::string file = "self_energy_" + std::string(to_string(kind)) + ".csv";
        if (ctx.spec.csv) {
            std::vector<double> values;
            values.reserve(points.size() * 4);
            for (const auto& p : points) {
                values.insert(values.end(), {p.delta_tm, p.delta_te, p.sigma.real(), p.sigma.imag()});
            }
            static constexpr std::array<std::string_view, 4> cols{"delta_tm", "delta_te", "re_sigma", "im_sigma"};
            ctx.write_csv(file, cols, values);
        }
        sweeps.push_back({{"kind", to_string(kind)},
                          {"layout", s.layout == SweepLayout::grid ? "grid" : "tied"},
                          {"eval_frequency", s.sigma_eval_override.value_or(sweep_eval_frequency(s.system, kind))},
                          {"points", points.size()},
                          {"file", file}});
    }
    if (ctx.spec.json) ctx.write_json("self_energy.json", {{"sweeps", sweeps}});
}

void run_coupling(Context& ctx) {
    const SystemConfig& c = ctx.s.system;
    const EffectiveCoupling g = effective_couplings(c);
    const EffectiveHamiltonian h = build_hamiltonian(c);
    const EigenPair e = eigenpairs(h.h);
    const double w = h.eval_freq;
    const std::array<std::pair<std::string_view, cplx>, 13> rows{{
        {"g_a", g.g_a},
        {"g_b", g.g_b},
        {"chi_b", te_susceptibility(c, w)},
        {"sigma_rr", sigma_rr(w, c)},
        {"sigma_mm", sigma_mm(w, c)},
        {"sigma_mr", sigma_mr(w, c)},
        {"sigma_rm", sigma_rm(w, c)},
        {"h00", h.h(0, 0)},
        {"h01", h.h(0, 1)},
        {"h10", h.h(1, 0)},
        {"h11", h.h(1, 1)},
        {"lambda_plus", e.lambda_plus},
        {"lambda_minus", e.lambda_minus},
    }};
    if (ctx.spec.csv) {
        std::string text = metadata_header(ctx.meta) + "quantity,re,im\n";
        for (const auto& [name, z] : rows) {
            text += std::string(name) + "," + format_number(z.real()) + "," + format_number(z.imag()) + "\n";
        }
        ctx.write("coupling.csv", text);
    }
    if (ctx.spec.json) {
        json body;
        body["eval_frequency"] = w;
        for (const auto& [name, z] : rows) body[std::string(name)] = complex_json(z);
        body["discriminant"] = complex_json(discriminant(h.h));
        ctx.write_json("coupling.json", body);
    }
}

void run_spectrum(Context& ctx) {
    const Settings& s = ctx.s;
    const auto omega = s.omega_axis.values();
    const auto detuning = s.detuning_axis.values();
    const auto points = psd_map(s.system, omega, detuning, s.swept, s.noise, ctx.spec.jobs);
    if (ctx.spec.csv) {
        std::vector<double> values;
        values.reserve(points.size() * 3);
        for (const auto& p : points) values.insert(values.end(), {p.omega, p.detuning, p.psd});
        static constexpr std::array<std::string_view, 3> cols{"omega", "detuning", "psd"};
        ctx.write_csv("spectrum.csv", cols, values);
    }
    if (ctx.spec.json && s.spectrum_matrix_json) {
        json matrix = json::array();
        for (std::size_t i = 0; i < detuning.size(); ++i) {
            json row = json::array();
            for (std::size_t j = 0; j < omega.size(); ++j) row.push_back(points[i * omega.size() + j].psd);
            matrix.push_back(std::move(row));
        }
        ctx.write_json("spectrum.json", {{"swept_pump", to_string(s.swept)},
                                         {"omega_grid", omega},
                                         {"detuning_grid", detuning},
                                         {"psd", std::move(matrix)}});
    }
}

json ep_json(const EpSearchResult& r) {
    json points = json::array();
    for (const auto& p : r.points) {
        points.push_back({{"p_in", p.p_in},
                          {"delta", p.delta},
                          {"residual", p.residual},
                          {"gap", p.gap},
                          {"lambda", complex_json(p.lambda)}});
    }
    json stalls = json::array();
    for (const auto& st : r.stalls) {
        stalls.push_back({{"p_in", st.seed.p_in}, {"delta", st.seed.delta}, {"status", st.status}});
    }
    return {{"exceptional_points", std::move(points)},
            {"stalled_seeds", std::move(stalls)},
            {"seed_count", r.seeds.size()},
            {"coarse_cell", {{"p_in", r.coarse_cell_p}, {"delta", r.coarse_cell_delta}}}};
}

EpSearchResult search_eps(const Settings& s, unsigned jobs) {
    EpSolverOptions opts;
    opts.seeds_per_axis = s.ep_seeds_per_axis;
    opts.jobs = jobs;
    return find_exceptional_points(s.plane(), s.region(), opts);
}

void write_ep_list(Context& ctx, const EpSearchResult& r, bool csv) {
    if (csv) {
        std::vector<double> values;
        for (const auto& p : r.points) {
            values.insert(values.end(), {p.p_in, p.delta, p.residual, p.gap, p.lambda.real(), p.lambda.imag()});
        }
        static constexpr std::array<std::string_view, 6> cols{"p_in", "delta", "residual", "gap", "re_lambda",
                                                              "im_lambda"};
        ctx.write_csv("ep_list.csv", cols, values);
    }
    if (ctx.spec.json) ctx.write_json("ep_list.json", ep_json(r));
}

void run_surface(Context& ctx) {
    const Settings& s = ctx.s;
    SurfaceOptions opts;
    opts.gap_rel_tol = s.surface_gap_tol;
    opts.jobs = ctx.spec.jobs;
    const auto p = s.p_axis.values();
    const auto d = s.delta_axis.values();
    const RiemannSurface surf = riemann_surface(s.plane(), p, d, opts);
    if (ctx.spec.csv) {
        std::vector<double> values;
        values.reserve(surf.lambda1.size() * 7);
        for (std::size_t i = 0; i < surf.rows(); ++i) {
            for (std::size_t j = 0; j < surf.cols(); ++j) {
                const std::size_t k = surf.index(i, j);
                values.insert(values.end(), {surf.p_grid[j], surf.delta_grid[i],
                                             surf.lambda1[k].real() - surf.reference_frequency, surf.lambda1[k].imag(),
                                             surf.lambda2[k].real() - surf.reference_frequency, surf.lambda2[k].imag(),
                                             surf.near_ep[k] ? 1.0 : 0.0});
            }
        }
        static constexpr std::array<std::string_view, 7> cols{"p_in",        "delta",       "re_lambda_1",
                                                              "im_lambda_1", "re_lambda_2", "im_lambda_2",
                                                              "near_ep_flag"};
        ctx.write_csv("surface.csv", cols, values);
    }
    if (ctx.spec.json) write_ep_list(ctx, search_eps(s, ctx.spec.jobs), false);
}

void run_find_ep(Context& ctx) { write_ep_list(ctx, search_eps(ctx.s, ctx.spec.jobs), ctx.spec.csv); }

json metrics_json(const DirectionMetrics& m) {
    return {{"final_f_a", m.final_f_a},
            {"oscillation_amplitude", m.oscillation_amplitude},
            {"oscillation_duration", m.oscillation_duration}};
}

std::string_view alignment_name(Alignment a) {
    switch (a) {
        case Alignment::half_period: return "half_period";
        case Alignment::same_position: return "same_position";
        case Alignment::index: return "index";
    }
    return "unknown";
}

void run_encircle(Context& ctx) {
    const Settings& s = ctx.s;
    const ParameterPlane plane = s.plane();
    const SupermodeBasis basis = initial_basis(s.loop, plane);
    const Vector2c start = select_initial_state(basis, s.initial);

    std::array<LoopSpec, 2> loops{s.loop, s.loop};
    loops[0].direction = Direction::cw;
    loops[1].direction = Direction::ccw;
    std::array<Trajectory, 2> traj;
    parallel_for(2, ctx.spec.jobs, [&](std::size_t i) { traj[i] = evolve(loops[i], plane, start, s.evolve); });

    if (ctx.spec.csv) {
        static constexpr std::array<std::string_view, 7> cols{"t", "theta", "p_in", "delta", "f_a", "f_b", "log_norm"};
        for (const auto& t : traj) {
            std::vector<double> values;
            values.reserve(t.times.size() * 7);
            for (std::size_t k = 0; k < t.times.size(); ++k) {
                values.insert(values.end(), {t.times[k], t.thetas[k], t.params[k].p_in, t.params[k].delta,
                                             t.fractions[k].f_a, t.fractions[k].f_b, t.log_norms[k]});
            }
            const std::string dir = t.direction == Direction::cw ? "cw" : "ccw";
            ctx.write_csv("trajectory_" + dir + ".csv", cols, values);
        }
    }
    if (ctx.spec.json) {
        const ChiralityReport r = chirality_report(traj[0], traj[1], s.chirality);
        const bool starts_in_a = start.isApprox(basis.a);
        const auto dominant = [](const Trajectory& t) { return t.fractions.back().f_a >= 0.5 ? "a" : "b"; };
        ctx.write_json("chirality.json",
                       {{"featured_direction", to_string(s.loop.direction)},
                        {"initial_mode", starts_in_a ? "a" : "b"},
                        {"lambda_a", complex_json(basis.lambda_a)},
                        {"lambda_b", complex_json(basis.lambda_b)},
                        {"alignment", alignment_name(s.chirality.alignment)},
                        {"final_dominant", {{"CW", dominant(traj[0])}, {"CCW", dominant(traj[1])}}},
                        {"final_f_a_difference", r.final_f_a_difference},
                        {"max_aligned_difference", r.max_aligned_difference},
                        {"CW", metrics_json(r.cw)},
                        {"CCW", metrics_json(r.ccw)}});
    }
}

}  // namespace

void write_error_record(std::ostream& err, std::string_view kind, std::string_view message,
                        std::string_view field) {
    const json rec = {{"error", {{"kind", kind}, {"message", message}, {"field", field}}}};
    err << rec.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
}

std::vector<fs::path> execute(const Settings& settings, const RunSpec& spec) {
    if (spec.jobs == 0) throw ConfigError("worker count must be at least 1", "--jobs");
    Context ctx{settings, spec, {}, {}};
    ctx.meta.command = std::string(to_string(settings.command));
    ctx.meta.preset = settings.preset;
    ctx.meta.config_hash = config_hash(settings);
    ctx.meta.units = std::string(unit_description(settings.units));

    switch (settings.command) {
        case Command::self_energy: run_self_energy(ctx); break;
        case Command::coupling: run_coupling(ctx); break;
        case Command::spectrum: run_spectrum(ctx); break;
        case Command::surface: run_surface(ctx); break;
        case Command::find_ep: run_find_ep(ctx); break;
        case Command::encircle: run_encircle(ctx); break;
    }
    ctx.write("resolved_config.txt", metadata_header(ctx.meta) + canonical_text(settings));
    return ctx.written;
}

int run(const RunSpec& spec, std::ostream& err) {
    try {
        const Settings settings = load_config(spec);
        execute(settings, spec);
        return kExitOk;
    } catch (const ConfigError& e) {
        write_error_record(err, "config", e.what(), e.field());
        return kExitConfigError;
    } catch (const NumericError& e) {
        write_error_record(err, "numeric", e.what(), "");
        return kExitNumericError;
    } catch (const std::exception& e) {
        write_error_record(err, "numeric", e.what(), "");
        return kExitNumericError;
    }
}

}  // namespace magphon
