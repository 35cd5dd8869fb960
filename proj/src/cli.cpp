#include "svarpg/cli.hpp"

#include "svarpg/error.hpp"
#include "svarpg/graph.hpp"
#include "svarpg/identify.hpp"
#include "svarpg/io.hpp"
#include "svarpg/model.hpp"
#include "svarpg/sep.hpp"
#include "svarpg/simulate.hpp"
#include "svarpg/spectral.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>

namespace svarpg::cli {

namespace {

using nlohmann::json;

struct Options {
    std::string model;
    std::string input;
    std::string output;
    std::string format = "csv";
    std::string from;
    std::string to;
    std::vector<std::string> controls;
    std::string ancestor;
    std::string target;
    std::string method;
    std::string x, w, m, y;
    std::vector<std::string> parents;
    int grid = kDefaultGrid;
    int depth = 1;
    int lags = 10;
    int filter_lags = kDefaultFilterLags;
    double tail_tol = kDefaultTailTol;
    bool treks = false;
    bool by_source = false;
    bool edge = false;
    bool include_latents = false;
    std::size_t length = 10000;
    std::uint64_t seed = 0;
    std::size_t burn_in = kDefaultBurnIn;
    std::size_t segment = kDefaultSegmentLen;
    std::size_t overlap = kDefaultSegmentLen / 2;
};

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::set<std::size_t> index_set(const SvarModel& model, const std::vector<std::string>& names) {
    std::set<std::size_t> out;
    for (const auto& n : names) out.insert(model.index_of(n));
    return out;
}

std::size_t observed_index(const SvarModel& model, const std::string& name, const char* flag) {
    if (name.empty()) throw UsageError(std::string("missing required option ") + flag);
    const auto i = model.index_of(name);
    if (model.is_latent(i)) throw Error(ErrorKind::Semantic, "'" + name + "' is a latent process");
    return i;
}

void need(const std::string& value, const char* flag) {
    if (value.empty()) throw UsageError(std::string("missing required option ") + flag);
}

int cmd_validate(const Options& o, std::ostream& out) {
    const auto model = SvarModel::load(o.model);
    const auto rep = full_stability_report(model, o.grid);
    out << rep.to_json().dump(2) << '\n';
    return rep.sep_representable() ? kExitOk : kExitFailure;
}

int cmd_paths(const Options& o, std::ostream& out) {
    const auto model = SvarModel::load(o.model);
    const auto proj = latent_projection(process_graph(model));
    const auto from = observed_index(model, o.from, "--from");
    const auto to = observed_index(model, o.to, "--to");
    std::vector<std::string> items;
    if (o.treks) {
        TrekStream stream(proj, from, to, o.depth);
        while (auto t = stream.next()) items.push_back(t->to_string(proj.directed));
    } else {
        std::set<std::size_t> avoid = index_set(model, o.controls);
        PathStream stream(proj.directed, from, to, avoid, o.depth);
        while (auto p = stream.next()) items.push_back(p->to_string(proj.directed));
    }
    if (o.format == "json") {
        out << json(items).dump(2) << '\n';
    } else {
        out << (o.treks ? "index,trek\n" : "index,path\n");
        for (std::size_t i = 0; i < items.size(); ++i) out << i << ',' << items[i] << '\n';
    }
    return kExitOk;
}

int cmd_transfer(const Options& o, std::ostream& out) {
    const auto model = SvarModel::load(o.model);
    const auto from = observed_index(model, o.from, "--from");
    const auto to = observed_index(model, o.to, "--to");
    write_spectral_header(out);
    if (o.edge) {
        const auto t = edge_transfer(model, from, to);
        for (double w : frequency_grid(o.grid)) write_spectral_row(out, {w, "H", o.from, o.to, t(w)});
        return kExitOk;
    }
    const auto h = cctf(model, from, to, index_set(model, o.controls), o.grid);
    for (std::size_t j = 0; j < h.size(); ++j) write_spectral_row(out, {h.omega[j], "CCTF", o.from, o.to, h.values[j]});
    return kExitOk;
}

int cmd_spectral(const Options& o, std::ostream& out) {
    const auto model = SvarModel::load(o.model);
    write_spectral_header(out);
    write_spectral_matrix(out, spectral_density(model, o.grid), "S");
    return kExitOk;
}

void write_decomposition(std::ostream& out, const SpectralDecomposition& d, const std::string& quantity_prefix,
                         bool factor_as_row) {
    for (std::size_t j = 0; j < d.omega.size(); ++j) {
        const std::pair<const char*, double> factors[] = {
            {"causal", d.causal[j]}, {"confounding", d.confounding[j]}, {"residual", d.residual[j]}};
        for (const auto& [name, value] : factors) {
            if (factor_as_row)
                write_spectral_row(out, {d.omega[j], quantity_prefix, name, d.target, cplx(value, 0.0)});
            else
                write_spectral_row(out, {d.omega[j], name, d.ancestor, d.target, cplx(value, 0.0)});
        }
    }
}

int cmd_decompose(const Options& o, std::ostream& out) {
    const auto model = SvarModel::load(o.model);
    const auto v = observed_index(model, o.ancestor, "--ancestor");
    const auto w = observed_index(model, o.target, "--target");
    write_spectral_header(out);
    if (!o.by_source) {
        write_decomposition(out, decompose_spectrum(model, v, w, o.grid), "", false);
        return kExitOk;
    }
    const auto d = decompose_by_source(model, v, w, o.grid);
    write_decomposition(out, d.combined, "", false);
    for (std::size_t k = 0; k < d.sources.size(); ++k) write_decomposition(out, d.parts[k], "source:" + d.sources[k], true);
    return kExitOk;
}

void write_acs(std::ostream& out, const AcsSequence& acs) {
    out << "lag,row,col,value\n";
    for (int t = 0; t <= acs.max_lag(); ++t)
        for (std::size_t a = 0; a < acs.labels.size(); ++a)
            for (std::size_t b = 0; b < acs.labels.size(); ++b)
                out << t << ',' << acs.labels[a] << ',' << acs.labels[b] << ','
                    << format_double(acs.values[static_cast<std::size_t>(t)](static_cast<Eigen::Index>(a),
                                                                              static_cast<Eigen::Index>(b)))
                    << '\n';
}

int cmd_acs(const Options& o, std::ostream& out) {
    const auto model = SvarModel::load(o.model);
    if (o.method.empty() || o.method == "sep")
        write_acs(out, acs_via_sep(model, o.lags, o.filter_lags, o.tail_tol));
    else if (o.method == "ma")
        write_acs(out, acs_via_ma_infinity(model, o.lags, std::max(o.filter_lags, 8 * o.lags)));
    else
        throw UsageError("--method must be sep or ma");
    return kExitOk;
}

int cmd_ccf(const Options& o, std::ostream& out) {
    const auto model = SvarModel::load(o.model);
    const auto x = observed_index(model, o.from, "--from");
    const auto y = observed_index(model, o.to, "--to");
    const auto f = ccf(model, x, y, index_set(model, o.controls), std::max(o.filter_lags, o.lags), o.tail_tol);
    out << "lag,row,col,value\n";
    for (int s = 0; s <= o.lags; ++s) out << s << ',' << o.from << ',' << o.to << ',' << format_double(f.scalar_at(s)) << '\n';
    return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
    const auto model = SvarModel::load(o.model);
    const auto traj = simulate(model, o.length, o.seed, o.burn_in);
    write_trajectory_csv(out, o.include_latents ? traj : traj.observed_only());
    return kExitOk;
}

int cmd_estimate(const Options& o, std::ostream& out) {
    std::ifstream in(o.input);
    if (!in) throw Error(ErrorKind::Schema, "cannot read trajectory file '" + o.input + "'");
    const auto traj = read_trajectory_csv(in);
    const auto est = welch_spectrum(traj, o.segment, o.overlap, o.grid);
    write_spectral_header(out);
    write_spectral_matrix(out, est.spectrum, "S");
    return kExitOk;
}

bool is_csv(const std::string& path) { return path.size() >= 4 && path.substr(path.size() - 4) == ".csv"; }

int cmd_identify(const Options& o, std::ostream& out) {
    SpectralMatrix s;
    std::optional<SvarModel> model;
    if (is_csv(o.input)) {
        std::ifstream in(o.input);
        if (!in) throw Error(ErrorKind::Schema, "cannot read spectral file '" + o.input + "'");
        s = read_spectral_csv(in, "S");
    } else {
        model = SvarModel::load(o.input);
        s = spectral_density(*model, o.grid);
    }
    IdentificationResult r;
    if (o.method == "frontdoor") {
        need(o.x, "--x");
        need(o.w, "--w");
        need(o.y, "--y");
        r = identify_frontdoor(s, o.x, o.w, o.y);
    } else if (o.method == "instrument") {
        need(o.x, "--x");
        need(o.m, "--m");
        need(o.y, "--y");
        r = identify_instrument(s, o.x, o.m, o.y);
    } else if (o.method == "unconfounded") {
        need(o.target, "--target");
        LatentProjection g;
        if (model) {
            g = latent_projection(process_graph(*model));
        } else {
            if (o.parents.empty()) throw UsageError("--parents is required when identifying from a spectral CSV");
            g = LatentProjection{Digraph(s.labels), std::vector<std::vector<char>>(
                                                        s.labels.size(), std::vector<char>(s.labels.size(), 0))};
            const auto t = s.index_of(o.target);
            for (const auto& p : o.parents) g.directed.add_edge(s.index_of(p), t);
        }
        r = identify_unconfounded_parents(s, g, o.target);
    } else {
        throw UsageError("--method must be frontdoor, instrument or unconfounded");
    }
    write_spectral_header(out);
    for (const auto& e : r.edges)
        for (std::size_t j = 0; j < r.omega.size(); ++j)
            write_spectral_row(out, {r.omega[j], r.patched[j] && r.method == IdentMethod::Instrument && e.from == o.m
                                                     ? "H:patched"
                                                     : "H",
                                     e.from, e.to, e.values[j]});
    return kExitOk;
}

json error_json(const Error& e) {
    json j{{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
    if (e.omega()) j["omega"] = *e.omega();
    return j;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Structural VAR processes as structural equation processes", "svarpg"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    auto add_model = [&](CLI::App* sub) { sub->add_option("model", o.model, "Model JSON file")->required(); };
    auto add_grid = [&](CLI::App* sub) {
        sub->add_option("--grid", o.grid, "Frequency grid size N")->check(CLI::PositiveNumber);
    };
    auto add_output = [&](CLI::App* sub) { sub->add_option("-o,--output", o.output, "Write output to this file"); };

    auto* validate = app.add_subcommand("validate", "Stability report (JSON)");
    add_model(validate);
    add_grid(validate);
    add_output(validate);

    auto* paths = app.add_subcommand("paths", "Enumerate directed paths or treks on the latent projection");
    add_model(paths);
    paths->add_option("--from", o.from, "Start process")->required();
    paths->add_option("--to", o.to, "End process")->required();
    paths->add_option("--avoid", o.controls, "Processes intermediates must avoid")->delimiter(',');
    paths->add_option("--depth", o.depth, "Maximum traversals per minimal cycle")->check(CLI::NonNegativeNumber);
    paths->add_flag("--treks", o.treks, "Enumerate treks instead of directed paths");
    paths->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    add_output(paths);

    auto* transfer = app.add_subcommand("transfer", "Controlled causal transfer function on the grid");
    add_model(transfer);
    transfer->add_option("--from", o.from, "Cause")->required();
    transfer->add_option("--to", o.to, "Effect")->required();
    transfer->add_option("--controls", o.controls, "Intervened processes")->delimiter(',');
    transfer->add_flag("--edge", o.edge, "Emit the single edge transfer instead");
    add_grid(transfer);
    add_output(transfer);

    auto* spectral = app.add_subcommand("spectral", "Analytic spectral density of the observed processes");
    add_model(spectral);
    add_grid(spectral);
    add_output(spectral);

    auto* decompose = app.add_subcommand("decompose", "Causal / confounding / residual split of a spectrum");
    add_model(decompose);
    decompose->add_option("--ancestor", o.ancestor, "Ancestor process")->required();
    decompose->add_option("--target", o.target, "Target process")->required();
    decompose->add_flag("--by-source", o.by_source, "Also split every factor by noise source");
    add_grid(decompose);
    add_output(decompose);

    auto* acs = app.add_subcommand("acs", "Auto-covariance sequence of the observed processes");
    add_model(acs);
    acs->add_option("--lags", o.lags, "Largest lag")->check(CLI::NonNegativeNumber);
    acs->add_option("--filter-lags", o.filter_lags, "Filter truncation lag")->check(CLI::PositiveNumber);
    acs->add_option("--tail-tol", o.tail_tol, "Power series tolerance")->check(CLI::PositiveNumber);
    acs->add_option("--method", o.method, "sep (default) or ma");
    add_output(acs);

    auto* ccf_cmd = app.add_subcommand("ccf", "Controlled causal effect filter");
    add_model(ccf_cmd);
    ccf_cmd->add_option("--from", o.from, "Cause")->required();
    ccf_cmd->add_option("--to", o.to, "Effect")->required();
    ccf_cmd->add_option("--controls", o.controls, "Intervened processes")->delimiter(',');
    ccf_cmd->add_option("--lags", o.lags, "Largest lag")->check(CLI::NonNegativeNumber);
    ccf_cmd->add_option("--filter-lags", o.filter_lags, "Filter truncation lag")->check(CLI::PositiveNumber);
    ccf_cmd->add_option("--tail-tol", o.tail_tol, "Power series tolerance")->check(CLI::PositiveNumber);
    add_output(ccf_cmd);

    auto* sim = app.add_subcommand("simulate", "Sample a trajectory");
    add_model(sim);
    sim->add_option("--length,-T", o.length, "Number of samples")->check(CLI::PositiveNumber);
    sim->add_option("--seed", o.seed, "Master seed");
    sim->add_option("--burn-in", o.burn_in, "Discarded initial samples");
    sim->add_flag("--include-latents", o.include_latents, "Also emit latent series");
    add_output(sim);

    auto* estimate = app.add_subcommand("estimate", "Welch spectral estimate from a trajectory CSV");
    estimate->add_option("trajectory", o.input, "Trajectory CSV from simulate")->required();
    estimate->add_option("--segment", o.segment, "Segment length (multiple of the grid size)")->check(CLI::PositiveNumber);
    estimate->add_option("--overlap", o.overlap, "Samples shared by consecutive segments");
    add_grid(estimate);
    add_output(estimate);

    auto* identify = app.add_subcommand("identify", "Recover edge transfer functions from a spectral density");
    identify->add_option("input", o.input, "Model JSON or spectral CSV")->required();
    identify->add_option("--method", o.method, "frontdoor, instrument or unconfounded")->required();
    identify->add_option("--x", o.x, "Cause X");
    identify->add_option("--w", o.w, "Front-door mediator W");
    identify->add_option("--m", o.m, "Instrumented mediator M");
    identify->add_option("--y", o.y, "Effect Y");
    identify->add_option("--target", o.target, "Target for the parent regression");
    identify->add_option("--parents", o.parents, "Parents of the target (spectral CSV input)")->delimiter(',');
    add_grid(identify);
    add_output(identify);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    std::ofstream file;
    std::ostream* sink = &out;
    if (!o.output.empty()) {
        file.open(o.output, std::ios::binary);
        if (!file) {
            err << json{{"error", "IOError"}, {"message", "cannot open output file '" + o.output + "'"}}.dump() << '\n';
            return kExitFailure;
        }
        sink = &file;
    }

    try {
        if (validate->parsed()) return cmd_validate(o, *sink);
        if (paths->parsed()) return cmd_paths(o, *sink);
        if (transfer->parsed()) return cmd_transfer(o, *sink);
        if (spectral->parsed()) return cmd_spectral(o, *sink);
        if (decompose->parsed()) return cmd_decompose(o, *sink);
        if (acs->parsed()) return cmd_acs(o, *sink);
        if (ccf_cmd->parsed()) return cmd_ccf(o, *sink);
        if (sim->parsed()) return cmd_simulate(o, *sink);
        if (estimate->parsed()) return cmd_estimate(o, *sink);
        if (identify->parsed()) return cmd_identify(o, *sink);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << error_json(e).dump() << '\n';
        return kExitFailure;
    } catch (const std::exception& e) {
        err << json{{"error", "InternalError"}, {"message", e.what()}}.dump() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace svarpg::cli
