// varjac: critical graphs, limit zero distributions and checks for Jacobi
// polynomials with varying complex parameters.
//
// Option precedence: built-in defaults, then command-line flags, then the
// --config file (values present in the file win).

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "varjac/error.hpp"

namespace {

int exit_code_for(const varjac::Error& e)
{
    switch (e.code()) {
    case varjac::ErrorCode::ParametersOutOfScope:
    case varjac::ErrorCode::InvalidArgument: return 2;
    default: return 3;
    }
}

}  // namespace

int main(int argc, char** argv)
{
    using namespace varjac::cli;

    CLI::App app{"Jacobi polynomials with varying complex parameters: critical graph, zeros, verification"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string a_text, b_text, config_path, out_dir;
    std::vector<int> degrees, criteria;
    int nodes = 0;
    double tol = 0.0;
    std::uint64_t seed = 0;
    bool no_svg = false;
    auto* o_a = app.add_option("--A", a_text, "parameter A as a+bi (no spaces)");
    auto* o_b = app.add_option("--B", b_text, "parameter B > 0");
    auto* o_n = app.add_option("--n", degrees, "polynomial degrees (comma separated)")->delimiter(',');
    auto* o_nodes = app.add_option("--nodes", nodes, "discretization nodes of the limit measure");
    auto* o_tol = app.add_option("--tol", tol, "trajectory tracing tolerance");
    auto* o_out = app.add_option("--out", out_dir, "output directory");
    auto* o_seed = app.add_option("--seed", seed, "seed for randomized checks");
    auto* o_crit = app.add_option("--criteria", criteria, "verify: criterion numbers to run (default all)")->delimiter(',');
    app.add_flag("--no-svg", no_svg, "skip SVG figures");
    app.add_option("--config", config_path, "JSON run configuration; overrides flags");

    auto* graph = app.add_subcommand("graph", "critical graph: graph.json, graph.svg");
    auto* zeros = app.add_subcommand("zeros", "zeros of p_n: zeros.json, zeros_n*.svg");
    auto* verify = app.add_subcommand("verify", "acceptance checks: verify.json");
    auto* sweep = app.add_subcommand("sweep", "graph classification over a parameter grid: sweep.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    RunConfig cfg;
    try {
        if (*o_a) cfg.A = parse_complex(a_text);
        if (*o_b) {
            const auto b = parse_complex(b_text);
            if (b.imag() != 0.0) throw UsageError("B must be real");
            cfg.B = b.real();
        }
        if (*o_n) cfg.degrees = degrees;
        if (*o_nodes) cfg.nodes = nodes;
        if (*o_tol) cfg.tol = tol;
        if (*o_out) cfg.out = out_dir;
        if (*o_seed) cfg.seed = seed;
        if (*o_crit) cfg.criteria = criteria;
        if (no_svg) cfg.graph_svg = cfg.zeros_svg = false;
        if (!config_path.empty()) cfg = load_config(config_path, cfg);
        cfg.validate();
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    }

    std::string command;
    try {
        RunLog log(cfg.out);
        command = app.get_subcommands().front()->get_name();
        log.line("start " + command + " config " + to_json(cfg).dump());
        int rc = 0;
        if (*graph) rc = cmd_graph(cfg, log);
        else if (*zeros) rc = cmd_zeros(cfg, log);
        else if (*verify) rc = cmd_verify(cfg, log);
        else if (*sweep) rc = cmd_sweep(cfg, log);
        log.line("end " + command + " exit " + std::to_string(rc));
        return rc;
    } catch (const varjac::Error& e) {
        std::fprintf(stderr, "error [%s, %s]: %s\n", e.module().c_str(), varjac::to_string(e.code()), e.what());
        return exit_code_for(e);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error in %s: %s\n", command.c_str(), e.what());
        return 3;
    }
}
