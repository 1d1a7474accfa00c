#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "varjac/numerics/geometry.hpp"

namespace varjac::cli {

using nlohmann::json;

namespace {

json point(Complex z) { return json::array({z.real(), z.imag()}); }

json points(const Polyline& p, const quaddiff::SymmetryTransform& t)
{
    json a = json::array();
    for (Complex z : p) a.push_back(point(t.apply(z)));
    return a;
}

json parameters(const RunConfig& c, const quaddiff::Normalization& n)
{
    json maps = json::array();
    for (auto m : n.transform.maps) maps.push_back(quaddiff::to_string(m));
    return {{"A", format_complex(c.A)},
            {"B", format_double(c.B)},
            {"A_normalized", format_complex(n.params.A)},
            {"B_normalized", format_double(n.params.B)},
            {"transform_to_input", maps}};
}

json arc_json(const std::string& name, const std::string& classification, const TrajectoryArc& a,
              const quaddiff::SymmetryTransform& t)
{
    json j = {{"name", name},
              {"classification", classification},
              {"start", to_string(a.start)},
              {"end", to_string(a.end)},
              {"arc_length", a.arc_length},
              {"phase_drift", a.phase_drift},
              {"points", points(a.points, t)}};
    if (a.end == EndTag::ClosedLoop) {
        const Polyline loop = tracer::closed_polyline(a);
        j["winding_about_minus1"] = numerics::winding_number(loop, -1.0);
        j["winding_about_plus1"] = numerics::winding_number(loop, 1.0);
    }
    return j;
}

// --- validation ------------------------------------------------------------

struct Checker {
    std::vector<std::string> problems;

    const json* need(const json& obj, const std::string& key, const std::string& where)
    {
        if (!obj.is_object() || !obj.contains(key)) {
            problems.push_back(where + ": missing '" + key + "'");
            return nullptr;
        }
        return &obj[key];
    }
    void type(const json& obj, const std::string& key, json::value_t t, const std::string& where)
    {
        const json* v = need(obj, key, where);
        if (!v) return;
        const bool number = t == json::value_t::number_float;
        const bool ok = number ? v->is_number() : v->type() == t;
        if (!ok) problems.push_back(where + ": '" + key + "' has the wrong type");
    }
    void string(const json& o, const std::string& k, const std::string& w) { type(o, k, json::value_t::string, w); }
    void number(const json& o, const std::string& k, const std::string& w) { type(o, k, json::value_t::number_float, w); }
    void boolean(const json& o, const std::string& k, const std::string& w) { type(o, k, json::value_t::boolean, w); }
    void array(const json& o, const std::string& k, const std::string& w) { type(o, k, json::value_t::array, w); }
    void object(const json& o, const std::string& k, const std::string& w) { type(o, k, json::value_t::object, w); }

    void pair(const json& v, const std::string& where)
    {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            problems.push_back(where + ": expected [re, im]");
    }
    void config(const json& doc)
    {
        object(doc, "config", "document");
        if (!doc.contains("config") || !doc["config"].is_object()) return;
        try {
            (void)from_json(doc["config"]);
        } catch (const std::exception& e) {
            problems.push_back(std::string("config: ") + e.what());
        }
    }
    void params(const json& doc)
    {
        object(doc, "parameters", "document");
        if (!doc.contains("parameters")) return;
        for (const char* k : {"A", "B", "A_normalized", "B_normalized"}) string(doc["parameters"], k, "parameters");
        array(doc["parameters"], "transform_to_input", "parameters");
    }
};

void check_graph(Checker& c, const json& doc)
{
    c.config(doc);
    c.params(doc);
    c.string(doc, "shape", "document");
    c.object(doc, "zeros", "document");
    if (doc.contains("zeros"))
        for (const char* k : {"zeta_minus", "zeta_plus"})
            if (const json* v = c.need(doc["zeros"], k, "zeros")) c.pair(*v, std::string("zeros.") + k);
    c.array(doc, "arcs", "document");
    if (doc.contains("arcs") && doc["arcs"].is_array()) {
        if (doc["arcs"].size() < 3) c.problems.push_back("arcs: expected at least three arcs");
        for (std::size_t i = 0; i < doc["arcs"].size(); ++i) {
            const json& a = doc["arcs"][i];
            const std::string w = "arcs[" + std::to_string(i) + "]";
            for (const char* k : {"name", "classification", "start", "end"}) c.string(a, k, w);
            c.number(a, "arc_length", w);
            c.number(a, "phase_drift", w);
            c.array(a, "points", w);
            if (a.contains("points") && a["points"].is_array())
                for (const auto& p : a["points"]) c.pair(p, w + ".points");
        }
    }
    c.object(doc, "periods", "document");
    if (doc.contains("periods"))
        for (const auto& [k, v] : doc["periods"].items()) c.pair(v, "periods." + k);
}

void check_zeros(Checker& c, const json& doc)
{
    c.config(doc);
    c.params(doc);
    c.array(doc, "results", "document");
    if (!doc.contains("results") || !doc["results"].is_array()) return;
    for (std::size_t i = 0; i < doc["results"].size(); ++i) {
        const json& r = doc["results"][i];
        const std::string w = "results[" + std::to_string(i) + "]";
        for (const char* k : {"n", "residual", "iterations", "fraction_within_0.1", "mean_distance_to_gamma"})
            c.number(r, k, w);
        c.array(r, "roots", w);
        if (r.contains("roots") && r["roots"].is_array()) {
            for (const auto& p : r["roots"]) c.pair(p, w + ".roots");
            if (r.contains("n") && r["n"].is_number_integer() && r["roots"].size() != r["n"].get<std::size_t>())
                c.problems.push_back(w + ": root count differs from n");
        }
    }
}

void check_verify(Checker& c, const json& doc)
{
    c.config(doc);
    c.params(doc);
    c.boolean(doc, "all_pass", "document");
    c.array(doc, "criteria", "document");
    if (!doc.contains("criteria") || !doc["criteria"].is_array()) return;
    bool all = true;
    for (std::size_t i = 0; i < doc["criteria"].size(); ++i) {
        const json& r = doc["criteria"][i];
        const std::string w = "criteria[" + std::to_string(i) + "]";
        c.number(r, "id", w);
        c.string(r, "title", w);
        c.boolean(r, "pass", w);
        c.number(r, "time_limit_seconds", w);
        c.boolean(r, "within_time_limit", w);
        c.need(r, "error", w);
        c.array(r, "metrics", w);
        if (r.contains("pass") && r["pass"].is_boolean()) all = all && r["pass"].get<bool>();
        if (!r.contains("metrics") || !r["metrics"].is_array()) continue;
        for (const auto& m : r["metrics"]) {
            c.string(m, "name", w + ".metrics");
            c.string(m, "relation", w + ".metrics");
            c.boolean(m, "pass", w + ".metrics");
            if (const json* v = c.need(m, "value", w + ".metrics"); v && !v->is_number() && !v->is_null())
                c.problems.push_back(w + ".metrics: value must be a number or null");
            c.need(m, "threshold", w + ".metrics");
        }
    }
    if (doc.contains("all_pass") && doc["all_pass"].is_boolean() && doc["all_pass"].get<bool>() != all)
        c.problems.push_back("all_pass disagrees with the criteria");
}

void check_sweep(Checker& c, const json& doc)
{
    c.config(doc);
    c.number(doc, "matching", "document");
    c.number(doc, "total", "document");
    c.array(doc, "cells", "document");
    if (!doc.contains("cells") || !doc["cells"].is_array()) return;
    for (std::size_t i = 0; i < doc["cells"].size(); ++i) {
        const json& r = doc["cells"][i];
        const std::string w = "cells[" + std::to_string(i) + "]";
        c.string(r, "A", w);
        c.string(r, "status", w);
        c.boolean(r, "matches_theorem", w);
        c.array(r, "ends", w);
    }
}

// --- svg -------------------------------------------------------------------

std::string xml_escape(const std::string& s)
{
    std::string r;
    for (char ch : s) {
        switch (ch) {
        case '&': r += "&amp;"; break;
        case '<': r += "&lt;"; break;
        case '>': r += "&gt;"; break;
        case '"': r += "&quot;"; break;
        default: r += ch;
        }
    }
    return r;
}

struct View {
    double x0, x1, y0, y1;  // world box
    double px = 800.0;      // width in pixels
    double scale() const { return px / (x1 - x0); }
    double X(Complex z) const { return (z.real() - x0) * scale(); }
    double Y(Complex z) const { return (y1 - z.imag()) * scale(); }
    double height() const { return (y1 - y0) * scale(); }
    bool near(Complex z) const
    {
        const double mx = 0.5 * (x1 - x0), my = 0.5 * (y1 - y0);
        return z.real() > x0 - mx && z.real() < x1 + mx && z.imag() > y0 - my && z.imag() < y1 + my;
    }
};

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

// polyline pieces inside the (padded) view, thinned to about a pixel
void emit_polyline(std::ostringstream& os, const View& v, const Polyline& pts, const char* colour, double width)
{
    std::string d;
    Complex last{};
    bool open = false;
    const double step = 1.0 / v.scale();
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const Complex z = pts[k];
        if (!v.near(z)) {
            open = false;
            continue;
        }
        const bool final_point = k + 1 == pts.size();
        if (open && std::abs(z - last) < step && !final_point) continue;
        d += (open ? " L" : " M") + fmt(v.X(z)) + "," + fmt(v.Y(z));
        last = z;
        open = true;
    }
    if (d.empty()) return;
    os << "  <path d=\"" << d.substr(1) << "\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"" << width
       << "\"/>\n";
}

}  // namespace

json graph_json(const RunConfig& c, const GraphRun& g)
{
    const auto& t = g.norm.transform;
    json arcs = json::array();
    const bool real = g.graph.shape == tracer::GraphShape::RealLimit;
    arcs.push_back(arc_json("gamma", "short trajectory zeta_- to zeta_+", g.graph.gamma, t));
    arcs.push_back(arc_json("sigma_minus", "closed loop at zeta_- around -1", g.graph.sigma_minus, t));
    arcs.push_back(arc_json("sigma_plus", real ? "closed loop at zeta_+ around +1" : "zeta_+ to the pole +1",
                            g.graph.sigma_plus, t));
    if (g.graph.sigma_inf) arcs.push_back(arc_json("sigma_inf", "zeta_+ to infinity", *g.graph.sigma_inf, t));

    json periods = json::object();
    periods["gamma"] = point(quaddiff::arc_integral(g.qd, g.graph.gamma));
    periods["sigma_minus"] = point(quaddiff::arc_integral(g.qd, g.graph.sigma_minus));
    if (real) periods["sigma_plus"] = point(quaddiff::arc_integral(g.qd, g.graph.sigma_plus));

    return {{"schema", kGraphSchema},
            {"config", to_json(c)},
            {"parameters", parameters(c, g.norm)},
            {"shape", real ? "real_limit" : "complex"},
            {"zeros", {{"zeta_minus", point(t.apply(g.qd.zeta_minus()))}, {"zeta_plus", point(t.apply(g.qd.zeta_plus()))}}},
            {"arcs", arcs},
            {"periods", periods}};
}

json zeros_json(const RunConfig& c, const GraphRun& g, const std::vector<ZerosRun>& z)
{
    json results = json::array();
    for (const auto& r : z) {
        json roots = json::array();
        for (Complex x : r.roots.roots) roots.push_back(point(x));
        results.push_back({{"n", r.n},
                           {"residual", r.roots.residual},
                           {"iterations", r.roots.iterations},
                           {"fraction_within_0.1", r.fraction_near_gamma},
                           {"mean_distance_to_gamma", r.mean_distance},
                           {"roots", roots}});
    }
    return {{"schema", kZerosSchema}, {"config", to_json(c)}, {"parameters", parameters(c, g.norm)}, {"results", results}};
}

json verify_json(const RunConfig& c, const std::vector<verify::CriterionResult>& rs)
{
    json crit = json::array();
    bool all = true;
    for (const auto& r : rs) {
        all = all && r.pass;
        json metrics = json::array();
        bool in_time = true;
        for (const auto& m : r.metrics) {
            if (m.name == "runtime_seconds") {
                in_time = m.pass;
                continue;
            }
            json jm = {{"name", m.name}, {"value", m.value}, {"relation", verify::to_string(m.relation)}, {"pass", m.pass}};
            jm["threshold"] = m.relation == verify::Relation::Info ? json(nullptr) : json(m.threshold);
            metrics.push_back(jm);
        }
        crit.push_back({{"id", r.id},
                        {"title", r.title},
                        {"pass", r.pass},
                        {"time_limit_seconds", r.time_limit},
                        {"within_time_limit", in_time},
                        {"error", r.error.empty() ? json(nullptr) : json(r.error)},
                        {"error_module", r.error_module.empty() ? json(nullptr) : json(r.error_module)},
                        {"metrics", metrics}});
    }
    // out-of-scope parameters still get a valid document; the criteria carry the error
    json params = {{"A", format_complex(c.A)},
                   {"B", format_double(c.B)},
                   {"A_normalized", "unavailable"},
                   {"B_normalized", "unavailable"},
                   {"transform_to_input", json::array()}};
    try {
        if (c.A.imag() == 0.0)
            params = parameters(c, {quaddiff::real_limit(c.A.real(), c.B), {}});
        else
            params = parameters(c, quaddiff::normalize(c.A, c.B));
    } catch (const Error&) {
    }
    return {{"schema", kVerifySchema}, {"config", to_json(c)}, {"parameters", params}, {"all_pass", all}, {"criteria", crit}};
}

json sweep_json(const RunConfig& c, const std::vector<SweepCell>& cells)
{
    json arr = json::array();
    int matching = 0;
    for (const auto& s : cells) {
        matching += s.matches;
        arr.push_back({{"A", format_complex(s.A)},
                       {"A_normalized", format_complex(s.A_normalized)},
                       {"status", s.status},
                       {"matches_theorem", s.matches},
                       {"ends", s.ends}});
    }
    return {{"schema", kSweepSchema},
            {"config", to_json(c)},
            {"matching", matching},
            {"total", static_cast<int>(cells.size())},
            {"cells", arr}};
}

std::vector<std::string> validate_document(const json& doc)
{
    Checker c;
    if (!doc.is_object() || !doc.contains("schema") || !doc["schema"].is_string()) return {"document: missing 'schema'"};
    const std::string s = doc["schema"].get<std::string>();
    if (s == kGraphSchema) {
        check_graph(c, doc);
    } else if (s == kZerosSchema) {
        check_zeros(c, doc);
    } else if (s == kVerifySchema) {
        check_verify(c, doc);
    } else if (s == kSweepSchema) {
        check_sweep(c, doc);
    } else {
        c.problems.push_back("unknown schema '" + s + "'");
    }
    return c.problems;
}

void write_json(const std::string& path, const json& doc)
{
    const std::string text = doc.dump(2);
    {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path);
        out << text << "\n";
    }
    std::ifstream in(path);
    const json back = json::parse(in);
    const auto problems = validate_document(back);
    if (!problems.empty()) throw std::runtime_error(path + " fails its schema: " + problems.front());
    if (back.dump(2) != text) throw std::runtime_error(path + " does not round-trip");
}

std::string graph_svg(const GraphRun& g, const std::vector<Complex>* zeros, const std::string& title)
{
    const auto& t = g.norm.transform;
    auto user = [&](const Polyline& p) {
        Polyline q;
        q.reserve(p.size());
        for (Complex z : p) q.push_back(t.apply(z));
        return q;
    };
    const Polyline gamma = user(g.graph.gamma.points);
    const Complex zm = t.apply(g.qd.zeta_minus()), zp = t.apply(g.qd.zeta_plus());

    // frame: poles, zeros, gamma and the roots, padded, within [-6, 6]
    double x0 = -1.0, x1 = 1.0, y0 = 0.0, y1 = 0.0;
    auto grow = [&](Complex z) {
        if (std::abs(z.real()) > 6.0 || std::abs(z.imag()) > 6.0) return;
        x0 = std::min(x0, z.real());
        x1 = std::max(x1, z.real());
        y0 = std::min(y0, z.imag());
        y1 = std::max(y1, z.imag());
    };
    for (Complex z : gamma) grow(z);
    grow(zm);
    grow(zp);
    if (zeros)
        for (Complex z : *zeros) grow(z);
    const double pad = 0.6 + 0.15 * std::max(x1 - x0, y1 - y0);
    View v{x0 - pad, x1 + pad, y0 - pad, y1 + pad};

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(v.px) << "\" height=\"" << fmt(v.height())
       << "\" viewBox=\"0 0 " << fmt(v.px) << " " << fmt(v.height()) << "\">\n";
    os << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // real axis
    os << "  <line x1=\"0\" y1=\"" << fmt(v.Y(0.0)) << "\" x2=\"" << fmt(v.px) << "\" y2=\"" << fmt(v.Y(0.0))
       << "\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>\n";
    if (!title.empty())
        os << "  <text x=\"10\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" << xml_escape(title) << "</text>\n";

    emit_polyline(os, v, user(g.graph.sigma_minus.points), "#1f5fbf", 1.5);
    emit_polyline(os, v, user(g.graph.sigma_plus.points), "#2e8b57", 1.5);
    if (g.graph.sigma_inf) emit_polyline(os, v, user(g.graph.sigma_inf->points), "#8a2be2", 1.5);
    emit_polyline(os, v, gamma, "#d62728", 2.5);

    if (zeros)
        for (Complex z : *zeros)
            if (v.near(z))
                os << "  <circle cx=\"" << fmt(v.X(z)) << "\" cy=\"" << fmt(v.Y(z)) << "\" r=\"2.5\" fill=\"black\"/>\n";

    for (double p : {-1.0, 1.0}) {
        const double X = v.X(p), Y = v.Y(p);
        os << "  <path d=\"M" << fmt(X - 5) << "," << fmt(Y - 5) << " L" << fmt(X + 5) << "," << fmt(Y + 5) << " M"
           << fmt(X - 5) << "," << fmt(Y + 5) << " L" << fmt(X + 5) << "," << fmt(Y - 5)
           << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
        os << "  <text x=\"" << fmt(X + 7) << "\" y=\"" << fmt(Y + 16) << "\" font-family=\"sans-serif\" font-size=\"12\">"
           << (p < 0 ? "-1" : "+1") << "</text>\n";
    }
    for (auto [z, name] : {std::pair{zm, "&#950;&#8722;"}, std::pair{zp, "&#950;+"}}) {
        os << "  <circle cx=\"" << fmt(v.X(z)) << "\" cy=\"" << fmt(v.Y(z))
           << "\" r=\"5\" fill=\"white\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
        os << "  <text x=\"" << fmt(v.X(z) + 7) << "\" y=\"" << fmt(v.Y(z) - 7)
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << name << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace varjac::cli
