// gyrofde: gyro error budget, Allan analysis and RNP trade-study tool.
//
// Exit codes: 0 success, 1 `check` requirement failure, 2 configuration or
// I/O error.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gyrofde/allan.hpp"
#include "gyrofde/analytic_error.hpp"
#include "gyrofde/config.hpp"
#include "gyrofde/montecarlo.hpp"
#include "gyrofde/report.hpp"
#include "gyrofde/tradestudy.hpp"
#include "gyrofde/units.hpp"

namespace {

using namespace gyrofde;
using units::Dimension;

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    std::string config_path;
    ConfigOverrides overrides;
    std::vector<std::string> drifts;
    bool turn_on = false;
    bool no_turn_on = false;
    std::string output = "-";
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("-c,--config", o.config_path, "JSON run configuration");
    cmd->add_option("--noise", o.overrides.N, "angle random walk, e.g. \"0.005 deg_per_sqrt_h\"");
    cmd->add_option("--drift", o.drifts,
                    "drift process \"<K>,<Tc>\", e.g. \"0.01 deg_per_h_3_2,1 h\" (repeatable; "
                    "replaces the config list)");
    cmd->add_flag("--turn-on", o.turn_on, "include the turn-on drift state");
    cmd->add_flag("--no-turn-on", o.no_turn_on, "start drift processes from zero");
    cmd->add_option("--velocity", o.overrides.v, "ground speed, e.g. \"900 km_per_h\"");
    cmd->add_option("--duration", o.overrides.duration, "flight duration, e.g. \"10 h\"");
    cmd->add_option("--radius", o.overrides.R, "sphere radius, e.g. \"6371 km\"");
    cmd->add_option("--dt", o.overrides.dt, "simulation step, e.g. \"1 s\"");
    cmd->add_option("--seed", o.overrides.seed, "master random seed");
    cmd->add_option("-o,--output", o.output, "output file ('-' for stdout)");
}

RunConfig resolve(CommonOptions& o) {
    if (!o.drifts.empty()) o.overrides.drifts = o.drifts;
    if (o.turn_on && o.no_turn_on) throw ConfigError("turn_on", "--turn-on and --no-turn-on conflict");
    if (o.turn_on) o.overrides.turn_on = true;
    if (o.no_turn_on) o.overrides.turn_on = false;
    if (o.config_path.empty()) return parse_config(nullptr, o.overrides);
    return load_config(o.config_path, o.overrides);
}

double flag_quantity(const std::string& flag, const std::string& text, Dimension dim) {
    try {
        return units::parse_canonical(text, dim);
    } catch (const units::UnitError& e) {
        throw ConfigError(flag, e.what());
    }
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (path != "-") {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw IoError("cannot open '" + path + "' for writing");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    void finish() {
        stream().flush();
        if (!stream()) throw IoError("write failed");
    }

private:
    std::unique_ptr<std::ofstream> file_;
};

void write_json(const std::string& path, const nlohmann::json& j) {
    Output out(path);
    out.stream() << j.dump(2) << '\n';
    out.finish();
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return in;
}

double default_tc(const RunConfig& cfg) {
    return cfg.model.drifts.empty() ? 1.0 : cfg.model.drifts.front().Tc;
}

struct TargetOptions {
    std::string target = "10 nmi";
    std::string at;
};

void add_target(CLI::App* cmd, TargetOptions& t) {
    cmd->add_option("--target", t.target, "95% FDE requirement (default \"10 nmi\")");
    cmd->add_option("--at", t.at, "evaluation time (default: flight end)");
}

RequirementTarget make_target(const TargetOptions& t, const RunConfig& cfg) {
    RequirementTarget r;
    r.flight = cfg.flight;
    r.fde95 = flag_quantity("target", t.target, Dimension::length);
    if (!t.at.empty()) r.evaluate_at = flag_quantity("at", t.at, Dimension::time);
    if (!(r.fde95 > 0.0)) throw ConfigError("target", "must be > 0");
    if (r.evaluate_at && (*r.evaluate_at < 0.0 || *r.evaluate_at > cfg.flight.duration)) {
        throw ConfigError("at", "must lie within the flight");
    }
    return r;
}

struct RangeOptions {
    std::string lo;
    std::string hi;
    std::size_t count;
};

LogRange make_range(const std::string& name, const RangeOptions& o, Dimension dim) {
    LogRange r{flag_quantity(name + "-min", o.lo, dim), flag_quantity(name + "-max", o.hi, dim),
               o.count};
    if (!(r.lo > 0.0) || r.hi < r.lo) throw ConfigError(name, "range needs 0 < min <= max");
    if (r.count == 0) throw ConfigError(name + "-count", "must be >= 1");
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gyro-to-position error budget toolkit"};
    app.require_subcommand(1);

    // analytic
    CommonOptions analytic_o;
    std::string analytic_step = "0.5 h";
    auto* analytic = app.add_subcommand("analytic", "closed-form ATRK/XTRK/FDE budget over time");
    add_common(analytic, analytic_o);
    analytic->add_option("--step", analytic_step, "time between rows (default \"0.5 h\")");

    // simulate
    CommonOptions sim_o;
    EnsembleOptions ens;
    std::string record_step = "0.1 h";
    std::string report_path;
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo ensemble vs closed form");
    add_common(simulate, sim_o);
    simulate->add_option("--groups", ens.n_groups, "number of groups (default 10)");
    simulate->add_option("--flights", ens.n_flights, "flights per group (default 100)");
    simulate->add_option("--record-step", record_step, "spacing of recorded epochs");
    simulate->add_option("--workers", ens.workers,
                         "worker threads (default: $GYROFDE_WORKERS or hardware)");
    simulate->add_option("--report", report_path, "comparison report JSON path");

    // allan
    CommonOptions allan_o;
    std::string trace_path;
    std::string synth_path;
    std::string trace_duration = "48 h";
    std::string tau_min = "1 s";
    std::string tau_max = "100 h";
    int per_decade = 10;
    std::string analytic_out;
    std::string landmarks_out;
    auto* allan = app.add_subcommand("allan", "Allan deviation curves and landmarks");
    add_common(allan, allan_o);
    allan->add_option("--trace", trace_path, "rate trace CSV (t_h,rate_deg_per_h) to analyse");
    allan->add_option("--synthesize", synth_path,
                      "synthesize a trace from the model, write it here and analyse it");
    allan->add_option("--trace-duration", trace_duration, "synthesized trace length");
    allan->add_option("--tau-min", tau_min, "analytic grid start");
    allan->add_option("--tau-max", tau_max, "analytic grid end");
    allan->add_option("--per-decade", per_decade, "grid points per decade");
    allan->add_option("--analytic-output", analytic_out,
                      "closed-form curve on the empirical taus (with --trace/--synthesize)");
    allan->add_option("--landmarks", landmarks_out, "landmark JSON (single-drift models)");

    // fit-allan
    std::string fit_tau;
    std::string fit_sigma;
    std::string fit_curve;
    std::string fit_output = "-";
    auto* fit = app.add_subcommand("fit-allan", "identify K and Tc from the Allan maximum");
    fit->add_option("--tau-max", fit_tau, "abscissa of the maximum, e.g. \"18.9 h\"");
    fit->add_option("--sigma-max", fit_sigma, "ordinate of the maximum, e.g. \"0.04 deg_per_h\"");
    fit->add_option("--curve", fit_curve, "Allan CSV (tau_s,sigma_deg_per_h) to take the maximum from");
    fit->add_option("-o,--output", fit_output, "output file ('-' for stdout)");

    // grid
    CommonOptions grid_o;
    TargetOptions grid_t;
    RangeOptions n_range{"1e-4 deg_per_sqrt_h", "1e-1 deg_per_sqrt_h", 60};
    RangeOptions k_range{"1e-3 deg_per_h_3_2", "1e-1 deg_per_h_3_2", 60};
    std::string grid_tc;
    auto* grid = app.add_subcommand("grid", "2 sigma_FDE over an (N, K) grid");
    add_common(grid, grid_o);
    add_target(grid, grid_t);
    grid->add_option("--n-min", n_range.lo);
    grid->add_option("--n-max", n_range.hi);
    grid->add_option("--n-count", n_range.count);
    grid->add_option("--k-min", k_range.lo);
    grid->add_option("--k-max", k_range.hi);
    grid->add_option("--k-count", k_range.count);
    grid->add_option("--tc", grid_tc, "drift time constant (default: first config drift, else 1 h)");

    // contour
    CommonOptions contour_o;
    TargetOptions contour_t;
    std::string over = "noise";
    RangeOptions cn_range{"1e-4 deg_per_sqrt_h", "1e-1 deg_per_sqrt_h", 60};
    RangeOptions tc_range{"0.01 h", "100 h", 60};
    std::string contour_tc;
    auto* contour = app.add_subcommand("contour", "required K along an N or Tc sweep");
    add_common(contour, contour_o);
    add_target(contour, contour_t);
    contour->add_option("--over", over, "sweep axis: noise or tc")
        ->check(CLI::IsMember({"noise", "tc"}));
    contour->add_option("--n-min", cn_range.lo);
    contour->add_option("--n-max", cn_range.hi);
    contour->add_option("--n-count", cn_range.count);
    contour->add_option("--tc-min", tc_range.lo);
    contour->add_option("--tc-max", tc_range.hi);
    contour->add_option("--tc-count", tc_range.count);
    contour->add_option("--tc", contour_tc, "Tc for a noise sweep (default: first config drift, else 1 h)");

    // check
    CommonOptions check_o;
    TargetOptions check_t;
    auto* check = app.add_subcommand("check", "RNP compliance check (exit 1 on failure)");
    add_common(check, check_o);
    add_target(check, check_t);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*analytic) {
            const auto cfg = resolve(analytic_o);
            const double step = flag_quantity("step", analytic_step, Dimension::time);
            if (!(step > 0.0)) throw ConfigError("step", "must be > 0");
            Output out(analytic_o.output);
            write_budget_csv_header(out.stream());
            const auto rows = static_cast<std::size_t>(std::floor(cfg.flight.duration / step + 1e-9));
            for (std::size_t i = 0; i <= rows; ++i) {
                const double t = std::min(static_cast<double>(i) * step, cfg.flight.duration);
                write_budget_csv_row(out.stream(), fde_sigma(cfg.model, cfg.flight, t));
            }
            if (static_cast<double>(rows) * step < cfg.flight.duration * (1.0 - 1e-12)) {
                write_budget_csv_row(out.stream(),
                                     fde_sigma(cfg.model, cfg.flight, cfg.flight.duration));
            }
            out.finish();
            return 0;
        }

        if (*simulate) {
            const auto cfg = resolve(sim_o);
            ens.master_seed = cfg.seed;
            ens.record_step = flag_quantity("record-step", record_step, Dimension::time);
            if (ens.n_flights < 2) throw ConfigError("flights", "must be >= 2");
            if (ens.n_groups < 1) throw ConfigError("groups", "must be >= 1");
            const auto stats = run_ensemble(cfg.model, cfg.flight, ens);
            const auto report = compare_to_analytic(stats, cfg.model, cfg.flight);
            Output out(sim_o.output);
            write_ensemble_csv(out.stream(), stats);
            out.finish();
            if (!report_path.empty()) write_json(report_path, comparison_json(report, stats));
            std::fprintf(stderr,
                         "final epoch t=%.3f h: pooled deviation atrk %+.2f%%, xtrk %+.2f%%; "
                         "group coverage atrk %.0f%%, xtrk %.0f%%\n",
                         report.atrk.times.empty() ? 0.0 : report.atrk.times.back(),
                         report.atrk.pooled_deviation.empty()
                             ? 0.0 : 100.0 * report.atrk.pooled_deviation.back(),
                         report.xtrk.pooled_deviation.empty()
                             ? 0.0 : 100.0 * report.xtrk.pooled_deviation.back(),
                         report.atrk.coverage.empty() ? 0.0 : 100.0 * report.atrk.coverage.back(),
                         report.xtrk.coverage.empty() ? 0.0 : 100.0 * report.xtrk.coverage.back());
            return 0;
        }

        if (*allan) {
            const auto cfg = resolve(allan_o);
            if (!trace_path.empty() && !synth_path.empty()) {
                throw ConfigError("trace", "--trace and --synthesize are mutually exclusive");
            }
            std::optional<RateTrace> trace;
            if (!trace_path.empty()) {
                auto in = open_input(trace_path);
                trace = read_rate_trace_csv(in);
            } else if (!synth_path.empty()) {
                const double len = flag_quantity("trace-duration", trace_duration, Dimension::time);
                trace = synthesize_rate_trace(cfg.model, len, cfg.flight.dt, cfg.seed);
                Output tout(synth_path);
                write_rate_trace_csv(tout.stream(), *trace);
                tout.finish();
            }
            Output out(allan_o.output);
            if (trace) {
                const auto taus = default_tau_grid(trace->dt, trace->duration);
                write_allan_csv(out.stream(), allan_variance_empirical(*trace, taus));
                if (!analytic_out.empty()) {
                    Output aout(analytic_out);
                    write_allan_csv(aout.stream(), allan_curve_analytic(cfg.model, taus));
                    aout.finish();
                }
            } else {
                const double lo = flag_quantity("tau-min", tau_min, Dimension::time);
                const double hi = flag_quantity("tau-max", tau_max, Dimension::time);
                if (!(lo > 0.0) || hi < lo) throw ConfigError("tau-min", "needs 0 < tau-min <= tau-max");
                if (per_decade < 1) throw ConfigError("per-decade", "must be >= 1");
                write_allan_csv(out.stream(),
                                allan_curve_analytic(cfg.model, log_grid(lo, hi, per_decade)));
            }
            out.finish();
            if (!landmarks_out.empty()) {
                const auto lm = allan_landmarks_analytic(cfg.model);
                std::optional<DriftSpec> id;
                if (lm.maximum) id = identify_from_max(lm.maximum->tau, lm.maximum->sigma);
                write_json(landmarks_out, landmarks_json(lm.minimum, lm.maximum, id));
            }
            return 0;
        }

        if (*fit) {
            std::optional<AllanExtremum> maximum;
            if (!fit_curve.empty()) {
                if (!fit_tau.empty() || !fit_sigma.empty()) {
                    throw ConfigError("curve", "--curve excludes --tau-max/--sigma-max");
                }
                auto in = open_input(fit_curve);
                maximum = curve_maximum(read_allan_csv(in));
                if (!maximum) throw ConfigError("curve", "no interior maximum in the curve");
            } else {
                if (fit_tau.empty() || fit_sigma.empty()) {
                    throw ConfigError("tau-max", "give --tau-max and --sigma-max, or --curve");
                }
                maximum = AllanExtremum{flag_quantity("tau-max", fit_tau, Dimension::time),
                                        flag_quantity("sigma-max", fit_sigma, Dimension::rate)};
                if (!(maximum->tau > 0.0)) throw ConfigError("tau-max", "must be > 0");
                if (!(maximum->sigma > 0.0)) throw ConfigError("sigma-max", "must be > 0");
            }
            const auto drift = identify_from_max(maximum->tau, maximum->sigma);
            write_json(fit_output, landmarks_json(std::nullopt, maximum, drift));
            return 0;
        }

        if (*grid) {
            const auto cfg = resolve(grid_o);
            const auto target = make_target(grid_t, cfg);
            const double tc = grid_tc.empty() ? default_tc(cfg)
                                              : flag_quantity("tc", grid_tc, Dimension::time);
            if (!(tc > 0.0)) throw ConfigError("tc", "must be > 0");
            const auto g = fde_grid(make_range("n", n_range, Dimension::angle_random_walk),
                                    make_range("k", k_range, Dimension::rate_random_walk), tc,
                                    target);
            Output out(grid_o.output);
            write_grid_csv(out.stream(), g);
            out.finish();
            return 0;
        }

        if (*contour) {
            const auto cfg = resolve(contour_o);
            const auto target = make_target(contour_t, cfg);
            ContourResult result;
            if (over == "noise") {
                const double tc = contour_tc.empty()
                                      ? default_tc(cfg)
                                      : flag_quantity("tc", contour_tc, Dimension::time);
                if (!(tc > 0.0)) throw ConfigError("tc", "must be > 0");
                result = contour_over_noise(
                    make_range("n", cn_range, Dimension::angle_random_walk), tc, target);
            } else {
                result = contour_over_tc(cfg.model.noise.N,
                                         make_range("tc", tc_range, Dimension::time), target);
            }
            Output out(contour_o.output);
            write_contour_csv(out.stream(), result);
            out.finish();
            return 0;
        }

        if (*check) {
            const auto cfg = resolve(check_o);
            const auto target = make_target(check_t, cfg);
            const auto result = check_requirement(cfg.model, target);
            write_json(check_o.output, compliance_json(result, target, cfg.model));
            return result.pass ? 0 : 1;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
