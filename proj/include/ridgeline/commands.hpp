#ifndef RIDGELINE_COMMANDS_HPP
#define RIDGELINE_COMMANDS_HPP

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include "ridgeline/config.hpp"
#include "ridgeline/csv.hpp"
#include "ridgeline/dynamics.hpp"
#include "ridgeline/linestab.hpp"

namespace ridgeline {

// --- config -> domain objects ---------------------------------------------

inline CutoffMode parse_cutoff_mode(const RunConfig& config, const std::string& key,
                                    const std::string& fallback) {
    const std::string mode = config.get_string(key, fallback);
    if (mode == "blend") return CutoffMode::BlendToZero;
    if (mode == "shift_blend") return CutoffMode::ShiftThenBlend;
    throw ConfigError("key '" + key + "': expected 'blend' or 'shift_blend', got '" + mode + "'");
}

// Reads `<prefix>.family` plus its parameter keys; cutoff radius and width
// are shared pair-level keys.
inline CoefficientSpec build_coefficient(const RunConfig& config, const std::string& prefix) {
    const double r_cutoff = config.get_double("pair.r_cutoff", 0.5);
    const double epsilon = config.get_double("pair.epsilon", 0.0);
    const std::string family = config.require_string(prefix + ".family");

    if (family == "linear") {
        const CutoffMode mode = parse_cutoff_mode(config, prefix + ".cutoff_mode", "blend");
        return {LinearCoeff{config.require_double(prefix + ".a"),
                            config.require_double(prefix + ".b")},
                r_cutoff, epsilon, mode};
    }
    if (family == "algebraic") {
        const CutoffMode mode = parse_cutoff_mode(config, prefix + ".cutoff_mode", "blend");
        return {AlgebraicCoeff{config.require_double(prefix + ".a"),
                               config.require_double(prefix + ".b"),
                               config.get_double(prefix + ".c", 1.0)},
                r_cutoff, epsilon, mode};
    }
    if (family == "exp_shifted") {
        const CutoffMode mode = parse_cutoff_mode(config, prefix + ".cutoff_mode", "shift_blend");
        return {ExpCoeff{config.require_double(prefix + ".c"),
                         config.require_double(prefix + ".e_s")},
                r_cutoff, epsilon, mode};
    }
    if (family == "exp_sum") {
        const CutoffMode mode = parse_cutoff_mode(config, prefix + ".cutoff_mode", "shift_blend");
        return {ExpSumCoeff{config.require_double(prefix + ".c1"),
                            config.require_double(prefix + ".c2"),
                            config.require_double(prefix + ".e1"),
                            config.require_double(prefix + ".e2")},
                r_cutoff, epsilon, mode};
    }
    if (family == "kucken_repulsion") {
        const CutoffMode mode = parse_cutoff_mode(config, prefix + ".cutoff_mode", "blend");
        return {KuckenRepulsion{config.require_double(prefix + ".alpha"),
                                config.require_double(prefix + ".beta"),
                                config.require_double(prefix + ".e_r")},
                r_cutoff, epsilon, mode};
    }
    if (family == "kucken_attraction") {
        const CutoffMode mode = parse_cutoff_mode(config, prefix + ".cutoff_mode", "blend");
        return {KuckenAttraction{config.require_double(prefix + ".gamma"),
                                 config.require_double(prefix + ".e_a")},
                r_cutoff, epsilon, mode};
    }
    if (family == "kucken") {
        // weight * f_A + f_R as a composite; weight is chi along s, 1 along l
        const CutoffMode mode = parse_cutoff_mode(config, prefix + ".cutoff_mode", "shift_blend");
        const KuckenAttraction att{config.get_double(prefix + ".gamma", 35.0),
                                   config.get_double(prefix + ".e_a", 95.0)};
        const KuckenRepulsion rep{config.get_double(prefix + ".alpha", 270.0),
                                  config.get_double(prefix + ".beta", 0.1),
                                  config.get_double(prefix + ".e_r", 100.0)};
        const double weight = config.get_double(prefix + ".chi", 1.0);
        return make_kucken_pair_member(weight, att, rep, r_cutoff, epsilon, mode);
    }
    throw ConfigError("key '" + prefix + ".family': unknown family '" + family + "'");
}

inline ForcePair build_force_pair(const RunConfig& config) {
    ForcePair pair;
    pair.fs = build_coefficient(config, "fs");
    pair.fl = build_coefficient(config, "fl");
    pair.domain_size = config.get_double("domain.delta", 1.0);
    pair.validate();
    return pair;
}

inline TensorField build_field(const RunConfig& config) {
    const auto field = TensorField::rotated(config.get_double("field.theta", 0.0),
                                            config.get_double("field.chi", 1.0));
    field.validate();
    return field;
}

inline SimConfig build_sim_config(const RunConfig& config) {
    SimConfig sim;
    sim.pair = build_force_pair(config);
    sim.field = build_field(config);

    const std::string integrator = config.get_string("sim.integrator", "euler");
    if (integrator == "euler") {
        sim.integrator = EulerParams{
            config.get_double("sim.dt", default_euler_dt(sim.pair.r_cutoff()))};
    } else if (integrator == "dopri") {
        sim.integrator = DormandPrinceParams{
            config.get_double("sim.abs_tol", 1e-9), config.get_double("sim.rel_tol", 1e-6),
            config.get_double("sim.dt_init", 1e-3), config.get_double("sim.dt_max", 1.0)};
    } else {
        throw ConfigError("key 'sim.integrator': expected 'euler' or 'dopri', got '" +
                          integrator + "'");
    }

    sim.t_max = config.get_double("sim.t_max", 1.0);
    sim.stationary_tol = config.get_double("sim.stationary_tol", 1e-8);
    if (config.has("sim.snapshot_every"))
        sim.snapshot_every = config.require_double("sim.snapshot_every");

    const std::string method = config.get_string("sim.method", "cells");
    if (method == "cells") {
        sim.method = ForceMethod::CellList;
    } else if (method == "brute") {
        sim.method = ForceMethod::BruteForce;
    } else {
        throw ConfigError("key 'sim.method': expected 'cells' or 'brute', got '" + method + "'");
    }
    return sim;
}

inline ParticleState build_initial_state(const RunConfig& config, double delta) {
    const std::string kind = config.get_string("init.kind", "circle");
    const int n = static_cast<int>(config.get_int("init.n", 600));
    if (kind == "circle") {
        return init_circle(n,
                           {config.get_double("init.center_x", 0.5 * delta),
                            config.get_double("init.center_y", 0.5 * delta)},
                           config.get_double("init.radius", 0.005), delta);
    }
    if (kind == "line") {
        const auto ansatz = make_line_ansatz(n, config.get_double("init.theta", M_PI_2), delta);
        return init_line(ansatz, config.get_double("init.jitter", 0.0),
                         config.get_seed("seed", 0));
    }
    throw ConfigError("key 'init.kind': expected 'circle' or 'line', got '" + kind + "'");
}

inline std::filesystem::path output_directory(const RunConfig& config) {
    std::string dir = config.get_string("output.dir", ".");
    if (const char* env = std::getenv("RIDGELINE_OUTPUT_DIR")) dir = env;
    std::filesystem::path path{dir};
    std::filesystem::create_directories(path);
    return path;
}

// --- subcommands -----------------------------------------------------------

inline void write_snapshot(const std::filesystem::path& dir, double time,
                           const std::vector<Vec2>& positions) {
    char stamp[32];
    std::snprintf(stamp, sizeof(stamp), "%.6f", time);
    CsvWriter csv((dir / ("snapshot_" + std::string(stamp) + ".csv")).string(), "x,y");
    for (const auto& p : positions) csv.row(p.x, p.y);
}

inline void cmd_simulate(const RunConfig& config) {
    const auto dir = output_directory(config);
    const auto sim = build_sim_config(config);
    const auto init = build_initial_state(config, sim.pair.domain_size);
    config.ensure_all_consumed();

    const auto wall_start = std::chrono::steady_clock::now();
    const auto result = simulate(init, sim);
    const double wall_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();

    for (const auto& snapshot : result.snapshots)
        write_snapshot(dir, snapshot.time, snapshot.positions);
    write_snapshot(dir, result.final_state.time, result.final_state.positions);

    CsvWriter summary((dir / "summary.csv").string(), "termination,final_residual,wall_time_s");
    summary.row(result.termination == Termination::Stationary ? "stationary" : "time_exhausted",
                result.final_max_speed, wall_s);
}

inline void cmd_spectrum(const RunConfig& config) {
    const auto dir = output_directory(config);
    const auto pair = build_force_pair(config);
    build_field(config); // validated; the spectrum itself only needs the pair

    const std::string source = config.get_string("spectrum.source", "continuum");
    const int m_min = static_cast<int>(config.get_int("spectrum.m_min", 1));
    std::optional<int> discrete_n;
    int default_m_max = std::max(500, static_cast<int>(std::ceil(4.0 / pair.r_cutoff())));
    if (source == "discrete") {
        discrete_n = static_cast<int>(config.require_int("spectrum.n"));
        default_m_max = *discrete_n - 1;
    } else if (source != "continuum") {
        throw ConfigError("key 'spectrum.source': expected 'continuum' or 'discrete', got '" +
                          source + "'");
    }
    const int m_max = static_cast<int>(config.get_int("spectrum.m_max", default_m_max));
    QuadratureSpec quad;
    quad.min_nodes = static_cast<int>(config.get_int("spectrum.quad_min_nodes", 2000));
    config.ensure_all_consumed();

    const auto spectrum = classify_vertical_line(pair, discrete_n, m_min, m_max, quad);

    CsvWriter csv((dir / "spectrum.csv").string(),
                  "m,re_lambda1,im_lambda1,re_lambda2,im_lambda2,source");
    for (const auto& mode : spectrum.modes)
        csv.row(mode.m, mode.lambda1.real(), mode.lambda1.imag(), mode.lambda2.real(),
                mode.lambda2.imag(), source);

    CsvWriter verdict((dir / "verdict.csv").string(), "verdict,m_min,m_max,source");
    verdict.row(to_string(spectrum.verdict), m_min, m_max, source);
}

inline void cmd_force_table(const RunConfig& config) {
    const auto dir = output_directory(config);
    const auto pair = build_force_pair(config);
    const double r_min = config.get_double("table.r_min", 0.0);
    const double r_max = config.get_double("table.r_max", pair.r_cutoff());
    const int points = static_cast<int>(config.get_int("table.points", 500));
    config.ensure_all_consumed();
    if (points < 2 || !(r_max > r_min))
        throw ConfigError("force table: need points >= 2 and table.r_max > table.r_min");

    // f_R / f_A columns carry the raw repulsion/attraction components when
    // the coefficient is a composite of them; otherwise they stay zero.
    const auto kc_members = [](const CoefficientSpec& spec) {
        std::pair<const CoefficientSpec*, const CoefficientSpec*> members{nullptr, nullptr};
        if (const auto* comp = std::get_if<CompositeCoeff>(&spec.family)) {
            for (const auto& [w, member] : comp->terms) {
                if (std::holds_alternative<KuckenAttraction>(member.family)) members.first = &member;
                if (std::holds_alternative<KuckenRepulsion>(member.family)) members.second = &member;
            }
        }
        return members;
    };
    const auto [fa, fr] = kc_members(pair.fl);

    CsvWriter csv((dir / "forces.csv").string(), "r,f_R,f_A,f_l,f_s");
    for (int i = 0; i < points; ++i) {
        const double r = r_min + (r_max - r_min) * i / (points - 1);
        csv.row(r, fr ? eval_raw(*fr, r) : 0.0, fa ? eval_raw(*fa, r) : 0.0,
                eval(pair.fl, r).value, eval(pair.fs, r).value);
    }
}

inline void cmd_a0_scan(const RunConfig& config) {
    const auto dir = output_directory(config);
    const double b = config.get_double("a0.b", 0.1);
    const double epsilon = config.get_double("a0.epsilon", 0.0);
    const int m_max = static_cast<int>(config.get_int("a0.m_max", 10000));
    const auto r_cutoffs = config.get_double_list("a0.r_cutoffs", {0.1, 0.2, 0.3, 0.4, 0.5});
    config.ensure_all_consumed();

    CsvWriter csv((dir / "a0_scan.csv").string(), "R_c,m,h_over_g,Rc_times_max");
    for (const double rc : r_cutoffs) {
        const auto scan = linear_threshold_a0(b, rc, epsilon, m_max);
        const double rc_max = -rc * scan.a0 / b;
        for (const auto& [m, q] : scan.curve) csv.row(rc, m, q, rc_max);
    }
}

inline void cmd_rotated_scan(const RunConfig& config) {
    const auto dir = output_directory(config);
    const auto pair = build_force_pair(config);
    const int max_n = static_cast<int>(config.get_int("rotated.max_n", 5));
    config.ensure_all_consumed();

    CsvWriter csv((dir / "rotated.csv").string(),
                  "theta,I11,I12,I21,I22,trace,det,stable_necessary");
    for (const double theta : admissible_angles(max_n)) {
        const auto report = rotated_line_highwave(theta, pair);
        csv.row(theta, report.i11, report.i12, report.i21, report.i22, report.trace, report.det,
                report.stable_necessary ? 1 : 0);
    }
}

} // namespace ridgeline

#endif
