#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <sstream>

#include "varjac/arc.hpp"
#include "varjac/numerics/geometry.hpp"

namespace varjac::cli {

namespace fs = std::filesystem;

namespace {

std::string join(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

tracer::GraphOptions graph_options(const RunConfig& c)
{
    tracer::GraphOptions go;
    go.trace.abs_tol = c.tol;
    return go;
}

// inverse of the normalization: user frame -> normalized frame
Complex to_normalized(const quaddiff::SymmetryTransform& t, Complex z)
{
    for (auto it = t.maps.rbegin(); it != t.maps.rend(); ++it) z = quaddiff::apply_map(*it, z);
    return z;
}

bool matches_theorem(const tracer::CriticalGraph& g)
{
    if (g.gamma.start != StartTag::ZetaMinus || g.gamma.end != EndTag::ZetaPlus) return false;
    if (g.sigma_minus.end != EndTag::ClosedLoop || g.sigma_plus.end != EndTag::PolePlus1) return false;
    if (!g.sigma_inf || g.sigma_inf->end != EndTag::Infinity) return false;
    if (numerics::winding_number(tracer::closed_polyline(g.sigma_minus), -1.0) != 1) return false;
    for (double x : numerics::real_axis_crossings(g.gamma.points))
        if (!(x > 1.0)) return false;
    return true;
}

}  // namespace

RunLog::RunLog(const std::string& dir)
{
    fs::create_directories(dir);
    out_.open(join(dir, "run.log"), std::ios::app);
}

void RunLog::line(const std::string& text)
{
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    out_ << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ") << "  " << text << "\n";
    out_.flush();
}

GraphRun compute_graph(const RunConfig& c)
{
    GraphRun g;
    if (c.A.imag() == 0.0) {
        g.norm = {quaddiff::real_limit(c.A.real(), c.B), {}};
    } else {
        g.norm = quaddiff::normalize(c.A, c.B);
    }
    g.qd = quaddiff::QuadraticDifferential::build(g.norm.params);
    g.graph = tracer::build_critical_graph(g.qd, graph_options(c));
    return g;
}

int cmd_graph(const RunConfig& c, RunLog& log)
{
    const auto t0 = std::chrono::steady_clock::now();
    const GraphRun g = compute_graph(c);
    write_json(join(c.out, "graph.json"), graph_json(c, g));
    if (c.graph_svg) write_text(join(c.out, "graph.svg"), graph_svg(g, nullptr, "critical graph, A = " + format_complex(c.A) + ", B = " + format_double(c.B)));
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    log.line("graph done in " + std::to_string(dt) + " s");
    std::printf("graph: %s, %s arcs written to %s\n", g.graph.shape == tracer::GraphShape::RealLimit ? "real limit" : "complex parameters",
                g.graph.sigma_inf ? "4" : "3", c.out.c_str());
    return 0;
}

int cmd_zeros(const RunConfig& c, RunLog& log)
{
    const GraphRun g = compute_graph(c);
    const ArcCurve curve = ArcCurve::from_trajectory(g.graph.gamma);
    std::vector<ZerosRun> runs;
    for (int n : c.degrees) {
        const auto t0 = std::chrono::steady_clock::now();
        ZerosRun z;
        z.n = n;
        z.roots = jacobi::roots(jacobi::VaryingJacobiSpec::make(n, c.A, c.B));
        int close = 0;
        double sum = 0.0;
        for (Complex r : z.roots.roots) {
            const double d = curve.nearest(to_normalized(g.norm.transform, r)).distance;
            close += d <= 0.1;
            sum += d;
        }
        z.fraction_near_gamma = static_cast<double>(close) / n;
        z.mean_distance = sum / n;
        runs.push_back(z);
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        log.line("zeros n=" + std::to_string(n) + " in " + std::to_string(dt) + " s, residual " + std::to_string(z.roots.residual));
        std::printf("zeros: n=%d  residual %.2e  within 0.1 of gamma: %.1f%%  mean distance %.4f\n", n, z.roots.residual,
                    100.0 * z.fraction_near_gamma, z.mean_distance);
        if (c.zeros_svg)
            write_text(join(c.out, "zeros_n" + std::to_string(n) + ".svg"),
                       graph_svg(g, &z.roots.roots, "zeros of p_" + std::to_string(n) + ", A = " + format_complex(c.A) + ", B = " + format_double(c.B)));
    }
    write_json(join(c.out, "zeros.json"), zeros_json(c, g, runs));
    return 0;
}

int cmd_verify(const RunConfig& c, RunLog& log)
{
    verify::Settings s;
    s.A = c.A;
    s.B = c.B;
    s.nodes = c.nodes;
    s.trace_tol = c.tol;
    s.seed = c.seed;
    const auto results = verify::run_criteria(s, c.criteria);
    bool all = true;
    for (const auto& r : results) {
        all = all && r.pass;
        std::printf("criterion %2d  %-32s %s\n", r.id, r.title.c_str(), r.pass ? "PASS" : "FAIL");
        std::ostringstream os;
        os << "criterion " << r.id << " " << (r.pass ? "pass" : "FAIL") << " in " << std::fixed << std::setprecision(3)
           << r.seconds << " s (limit " << r.time_limit << " s)";
        if (!r.error.empty()) os << " error: " << r.error;
        for (const auto& m : r.metrics)
            if (!m.pass) os << " [" << m.name << " = " << m.value << "]";
        log.line(os.str());
    }
    write_json(join(c.out, "verify.json"), verify_json(c, results));
    std::printf("verify: %s\n", all ? "all checks pass" : "verification failure");
    return all ? 0 : 1;
}

int cmd_sweep(const RunConfig& c, RunLog& log)
{
    const auto& sg = c.sweep;
    auto at = [&](double lo, double hi, int k) { return sg.steps == 1 ? lo : lo + (hi - lo) * k / (sg.steps - 1); };
    std::vector<SweepCell> cells;
    for (int i = 0; i < sg.steps; ++i)
        for (int j = 0; j < sg.steps; ++j) {
            SweepCell cell;
            cell.A = {at(sg.re_min, sg.re_max, i), at(sg.im_min, sg.im_max, j)};
            try {
                const auto n = quaddiff::normalize(cell.A, c.B);
                cell.A_normalized = n.params.A;
                const auto qd = quaddiff::QuadraticDifferential::build(n.params);
                const auto g = tracer::build_critical_graph(qd, graph_options(c));
                cell.matches = matches_theorem(g);
                cell.status = "ok";
                for (const TrajectoryArc* a : {&g.gamma, &g.sigma_minus, &g.sigma_plus})
                    cell.ends.push_back(to_string(a->end));
                if (g.sigma_inf) cell.ends.push_back(to_string(g.sigma_inf->end));
            } catch (const Error& e) {
                cell.status = to_string(e.code());
            }
            cells.push_back(cell);
        }
    const auto doc = sweep_json(c, cells);
    write_json(join(c.out, "sweep.json"), doc);
    log.line("sweep " + std::to_string(doc["matching"].get<int>()) + "/" + std::to_string(cells.size()) + " cells match");
    std::printf("sweep: %d of %zu cells match the theorem's graph\n", doc["matching"].get<int>(), cells.size());
    return 0;
}

}  // namespace varjac::cli
