// Copyright 2026 The qsurrogate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qsurrogate/commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qsurrogate/report.hpp"

namespace qsurrogate {

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SfRefusal : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("cannot read config file '" + path + "'");
    return ss.str();
}

void emit(const std::string &content, const CommandOptions &opts, std::ostream &out) {
    if (!opts.out) {
        out << content;
        out.flush();
        if (!out) throw IoError("cannot write to standard output");
        return;
    }
    std::ofstream f(*opts.out, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open output file '" + *opts.out + "'");
    f << content;
    f.flush();
    if (!f) throw IoError("cannot write output file '" + *opts.out + "'");
}

struct Context {
    const ScenarioConfig &cfg;
    const CommandOptions &opts;
    std::string config_hash;
    std::ostream &err;

    [[nodiscard]] TableLimits limits() const { return {cfg.caps.max_table_entries}; }
    [[nodiscard]] double eps() const { return cfg.tolerances.epsilon; }
    [[nodiscard]] std::size_t max_order(const TimeGrid &g) const {
        return cfg.n_max ? std::min(*cfg.n_max, g.size()) : g.size();
    }
    [[nodiscard]] std::uint64_t seed() const { return opts.seed ? *opts.seed : cfg.sampling->seed; }

    [[nodiscard]] ReportJson header(std::string_view command) const {
        return {{"schema", kReportSchema},
                {"command", command},
                {"tool", {{"name", kToolName}, {"version", kToolVersion}}},
                {"config_sha256", config_hash},
                {"kind", kind_name(cfg.kind)},
                {"tolerances", to_json(cfg.tolerances)},
                {"caps",
                 {{"max_table_entries", cfg.caps.max_table_entries},
                  {"max_joint_dim", cfg.caps.max_joint_dim},
                  {"report_table_entries", cfg.caps.report_table_entries}}}};
    }

    void require_sampling(std::string_view command) const {
        if (!cfg.sampling) {
            throw ConfigError("sampling", std::nullopt,
                              "sampling: required by the " + std::string(command) + " command");
        }
    }

    void require_kind(ScenarioKind kind, std::string_view command) const {
        if (cfg.kind != kind) {
            throw ConfigError("kind", std::nullopt,
                              "kind: the " + std::string(command) + " command needs kind \"" +
                                  std::string(kind_name(kind)) + "\"");
        }
    }
};

bool implication_chain(const ConsistencyReport &r) {
    const bool sf = r.get(Condition::SurrogateField).passed;
    const bool cm = r.get(Condition::ConsistentMeasurements).passed;
    const bool kc = r.get(Condition::Kolmogorov).passed;
    return (!sf || cm) && (!cm || kc);
}

std::string cmd_analyze(const Context &ctx) {
    const ProcessModel &proc = *ctx.cfg.process;
    const auto values = proc.observable().values();
    ReportJson report = ctx.header("analyze");
    report["observable"] = observable_json(proc.observable());
    ReportJson runs = ReportJson::array();
    bool chain = true;
    for (const auto &[name, grid] : ctx.cfg.grids) {
        for (std::size_t k = 1; k <= ctx.max_order(grid); ++k) {
            const TimeGrid g = grid.prefix(k);
            const auto born = proc.born_distribution(g, ctx.limits());
            const auto q = proc.bi_probability(g, ctx.limits());
            const auto cons = analyze(proc, g, ctx.eps(), ctx.limits());
            chain = chain && implication_chain(cons);
            runs.push_back({{"grid", name},
                            {"n", k},
                            {"times", g.times()},
                            {"born", to_json(born)},
                            {"biprob", to_json(q, ctx.cfg.caps.report_table_entries)},
                            {"consistency", to_json(cons, values)}});
        }
    }
    report["runs"] = std::move(runs);
    report["implication_chain_holds"] = chain;
    return dump(report);
}

std::string cmd_qrf(const Context &ctx) {
    ctx.require_kind(ScenarioKind::Qrf, "qrf");
    const QRFModel &model = *ctx.cfg.qrf.model;
    const auto &gen = model.generator();
    const auto values = model.observable().values();
    ReportJson report = ctx.header("qrf");
    ReportJson terms = ReportJson::array();
    for (const auto &t : gen.terms()) terms.push_back({{"omega", t.omega}, {"gamma", complex_json(t.gamma)}});
    report["generator"] = {{"raw", ctx.cfg.qrf.raw_generator},
                           {"dim", gen.dim()},
                           {"mu", gen.mu()},
                           {"terms", terms},
                           {"trace_defect", gen.trace_defect()},
                           {"hermiticity_defect", gen.hermiticity_defect()}};
    report["observable"] = observable_json(model.observable());

    const BlockStructure bs = classify_block_structure(model, ctx.eps(), ctx.cfg.qrf.sample_times);
    report["classification"] = to_json(bs);

    ReportJson cp = ReportJson::array();
    bool cp_ok = true;
    for (double t : ctx.cfg.qrf.sample_times) {
        const double m = choi_min_eigenvalue(model, t);
        cp_ok = cp_ok && m >= -1e-10;
        cp.push_back({{"t", t}, {"choi_min_eigenvalue", m}});
    }
    report["complete_positivity"] = {{"samples", cp}, {"passed", cp_ok}, {"threshold", -1e-10}};

    bool ncgd_all = true, cm_all = true, sf_all = true, agree_all = true;
    ReportJson grids = ReportJson::array();
    for (const auto &[name, grid] : ctx.cfg.grids) {
        const TimeGrid g = grid.prefix(ctx.max_order(grid));
        const NcgdReport ncgd = check_ncgd(model, grid_time_pairs(g), ctx.eps());
        ncgd_all = ncgd_all && ncgd.passed;
        ReportJson orders = ReportJson::array();
        for (std::size_t k = 1; k <= g.size(); ++k) {
            const auto q = qrf_bi_probability(model, g.prefix(k), ctx.limits());
            const auto cm = check_cm(q, ctx.eps());
            const auto sf = check_sf(q, ctx.eps());
            cm_all = cm_all && cm.get(Condition::ConsistentMeasurements).passed;
            sf_all = sf_all && sf.get(Condition::SurrogateField).passed;
            ReportJson recs = to_json(cm, values);
            for (auto &r : to_json(sf, values)) recs.push_back(r);
            orders.push_back({{"n", k}, {"times", g.prefix(k).times()}, {"records", recs}});
        }
        ReportJson equiv;
        try {
            const auto e = verify_ncgd_cm_equivalence(model, g, ctx.eps(), ctx.limits());
            agree_all = agree_all && e.agree;
            equiv = to_json(e);
        } catch (const Error &e) {
            if (e.code() != ErrorCode::NonBlockDiagonalState) throw;
            equiv = {{"applicable", false}, {"reason", e.what()}};
        }
        grids.push_back({{"grid", name},
                         {"times", g.times()},
                         {"ncgd", to_json(ncgd)},
                         {"orders", orders},
                         {"equivalence", equiv}});
    }
    report["grids"] = std::move(grids);
    report["summary"] = {{"lower_triangular", bs.lower_triangular},
                         {"upper_triangular", bs.upper_triangular},
                         {"NCGD", ncgd_all},
                         {"CM", cm_all},
                         {"SF", sf_all},
                         {"equivalence_agrees", agree_all}};
    return dump(report);
}

std::string cmd_sample(const Context &ctx) {
    ctx.require_sampling("sample");
    const auto &samp = *ctx.cfg.sampling;
    const TimeGrid &grid = ctx.cfg.grid(samp.grid);
    const ProcessModel &proc = *ctx.cfg.process;
    if (grid.size() >= 2) {
        try {
            const auto kc = check_kc(proc, grid, ctx.eps(), ctx.limits());
            if (!kc.get(Condition::Kolmogorov).passed) {
                ctx.err << "warning: KC fails on grid '" << samp.grid << "' (max violation "
                        << kc.get(Condition::Kolmogorov).max_abs_violation
                        << "); sampled trajectories depend on the measurement grid\n";
            }
        } catch (const Error &e) {
            if (e.code() != ErrorCode::TableTooLarge) throw;
            ctx.err << "warning: KC not checked, table exceeds caps.max_table_entries\n";
        }
    }
    const Ensemble ens = sample_ensemble(proc, grid, samp.count, ctx.seed(), ctx.opts.threads);
    std::ostringstream os;
    write_csv(ens, os);
    return os.str();
}

std::string cmd_simulate(const Context &ctx) {
    ctx.require_kind(ScenarioKind::Joint, "simulate");
    const auto &cfg = ctx.cfg;
    const auto &samp = *cfg.sampling;
    const auto &sim = *cfg.simulate;
    const TimeGrid &grid = cfg.grid(samp.grid);
    const QuantumSystem &sys = *cfg.system;
    const auto values = sys.observable().values();
    ReportJson report = ctx.header("simulate");

    const TimeGrid check_grid = grid.prefix(ctx.max_order(grid));
    const auto sf = check_sf(bi_probability(sys, check_grid, ctx.limits()), ctx.eps());
    const auto &sf_rec = sf.get(Condition::SurrogateField);
    ReportJson warnings = ReportJson::array();
    if (!sf_rec.passed) {
        std::ostringstream msg;
        msg << "SF condition fails on grid '" << samp.grid << "' up to n = " << check_grid.size()
            << " (max off-diagonal " << sf_rec.max_abs_violation << ")";
        if (!ctx.opts.force) throw SfRefusal(msg.str() + "; rerun with --force to simulate anyway");
        warnings.push_back(msg.str() + "; surrogate averages are not expected to match");
        ctx.err << "warning: " << msg.str() << "\n";
    }
    report["forced"] = ctx.opts.force;
    report["warnings"] = warnings;
    report["sf_precheck"] = {{"grid", samp.grid}, {"n", check_grid.size()}, {"times", check_grid.times()},
                             {"record", to_json(sf_rec, values)}};

    const JointScenario js(*cfg.observer, sys, cfg.caps.max_joint_dim);
    const Ensemble ens = sample_ensemble(*cfg.process, grid, samp.count, ctx.seed(), ctx.opts.threads);
    report["sampling"] = {{"N", samp.count}, {"seed", ctx.seed()}, {"grid", samp.grid}, {"times", grid.times()},
                          {"rng", kRngAlgorithm}};

    ReportJson probes = ReportJson::array();
    double worst = 0.0;
    for (double t : sim.times) {
        const DensityMatrix exact = exact_reduced_state(js, t);
        const SurrogateAverage avg = surrogate_average(*cfg.observer, ens, t, ctx.opts.threads);
        const Comparison cmp = compare(exact, avg);
        worst = std::max(worst, cmp.trace_distance);
        probes.push_back({{"t", t},
                          {"exact", to_json(exact.matrix())},
                          {"monte_carlo", to_json(avg.mean.matrix())},
                          {"std_error_re", to_json(avg.std_error_re)},
                          {"std_error_im", to_json(avg.std_error_im)},
                          {"trace_distance", cmp.trace_distance},
                          {"max_abs_z", cmp.max_abs_z}});
    }
    report["probes"] = std::move(probes);
    report["max_trace_distance"] = worst;

    // Same probes on the grid thinned to every second time, counted back from
    // t_n, to show how the interpolation error moves with grid density.
    ReportJson refinement = ReportJson::array();
    if (grid.size() >= 2) {
        std::vector<double> coarse_times;
        for (std::size_t k = grid.size(); k >= 1; k -= std::min<std::size_t>(k, 2)) coarse_times.push_back(grid[k - 1]);
        std::reverse(coarse_times.begin(), coarse_times.end());
        const TimeGrid coarse(coarse_times);
        const Ensemble coarse_ens = sample_ensemble(*cfg.process, coarse, samp.count, ctx.seed(), ctx.opts.threads);
        double coarse_worst = 0.0;
        for (double t : sim.times) {
            const auto avg = surrogate_average(*cfg.observer, coarse_ens, t, ctx.opts.threads);
            coarse_worst = std::max(coarse_worst, compare(exact_reduced_state(js, t), avg).trace_distance);
        }
        refinement.push_back({{"times", coarse.times()}, {"max_trace_distance", coarse_worst}});
    }
    refinement.push_back({{"times", grid.times()}, {"max_trace_distance", worst}});
    report["grid_refinement"] = std::move(refinement);

    if (sim.x_o) {
        const auto exact = observer_observable_biprob(js, *sim.x_o, *sim.observer_grid, ctx.limits()).diagonal();
        const auto est = surrogate_observer_born(*cfg.observer, *sim.x_o, ens, *sim.observer_grid, ctx.opts.threads);
        ReportJson z = ReportJson::array();
        double max_z = 0.0;
        for (std::size_t f = 0; f < exact.size(); ++f) {
            const double diff = exact[f] - est.mean[f];
            const double zf = std::abs(diff) <= 1e-12 ? 0.0 : diff / est.std_error[f];
            max_z = std::max(max_z, std::abs(zf));
            z.push_back(zf);
        }
        report["observer_observable"] = {{"observable", observable_json(*sim.x_o)},
                                         {"exact", to_json(exact)},
                                         {"monte_carlo", to_json(est.mean)},
                                         {"std_error", est.std_error},
                                         {"z", z},
                                         {"max_abs_z", max_z}};
    }
    return dump(report);
}

} // namespace

ExitCode run_command(std::string_view command, const CommandOptions &options, std::ostream &out, std::ostream &err) {
    try {
        const std::string text = read_file(options.config_path);
        const ScenarioConfig cfg = parse_config(text);
        const Context ctx{cfg, options, sha256_hex(text), err};
        std::string result;
        if (command == "analyze") {
            result = cmd_analyze(ctx);
        } else if (command == "qrf") {
            result = cmd_qrf(ctx);
        } else if (command == "sample") {
            result = cmd_sample(ctx);
        } else if (command == "simulate") {
            ctx.require_sampling("simulate");
            result = cmd_simulate(ctx);
        } else {
            err << "error: unknown command '" << command << "'\n";
            return ExitCode::Config;
        }
        emit(result, options, out);
        return ExitCode::Success;
    } catch (const IoError &e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::Io;
    } catch (const ConfigError &e) {
        err << "config error";
        if (!e.field().empty()) err << " in field '" << e.field() << "'";
        if (e.line()) err << " (line " << *e.line() << ")";
        err << ": " << e.what() << "\n";
        return ExitCode::Config;
    } catch (const SfRefusal &e) {
        err << "refused: " << e.what() << "\n";
        return ExitCode::SfRefusal;
    } catch (const Error &e) {
        err << "error [" << error_code_name(e.code()) << "]: " << e.what() << "\n";
        switch (e.code()) {
        case ErrorCode::DimensionMismatch:
        case ErrorCode::DimensionCap:
        case ErrorCode::TableTooLarge: return ExitCode::Dimension;
        default: return ExitCode::Config;
        }
    }
}

} // namespace qsurrogate
