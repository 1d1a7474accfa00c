#include "run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

namespace varjac::cli {

namespace {

// Reads a floating literal at the front of s; returns characters consumed (0 on failure).
std::size_t read_number(std::string_view s, double& out)
{
    if (s.empty()) return 0;
    const char* first = s.data();
    // from_chars rejects a leading '+'
    std::size_t skip = (s.front() == '+') ? 1 : 0;
    if (skip && s.size() > 1 && s[1] == '-') return 0;
    const auto [ptr, ec] = std::from_chars(first + skip, first + s.size(), out);
    if (ec != std::errc{}) return 0;
    return static_cast<std::size_t>(ptr - first);
}

[[noreturn]] void bad_literal(std::string_view text, const char* why)
{
    throw UsageError("malformed complex literal '" + std::string(text) + "': " + why);
}

}  // namespace

Complex parse_complex(std::string_view text)
{
    if (text.empty()) bad_literal(text, "empty");
    for (char c : text)
        if (c == ' ' || c == '\t') bad_literal(text, "whitespace is not allowed");

    // pure imaginary: "i", "-i", "+i", "2.5i"
    if (text.back() == 'i') {
        const std::string_view body = text.substr(0, text.size() - 1);
        if (body.empty() || body == "+") return {0.0, 1.0};
        if (body == "-") return {0.0, -1.0};
        double im = 0.0;
        if (read_number(body, im) == body.size()) return {0.0, im};
    }

    double re = 0.0;
    const std::size_t n = read_number(text, re);
    if (n == 0) bad_literal(text, "expected a number");
    if (n == text.size()) return {re, 0.0};

    std::string_view rest = text.substr(n);
    if (rest.back() != 'i') bad_literal(text, "imaginary part must end in 'i'");
    rest.remove_suffix(1);
    if (rest.empty() || (rest.front() != '+' && rest.front() != '-')) bad_literal(text, "expected '+' or '-'");
    if (rest == "+") return {re, 1.0};
    if (rest == "-") return {re, -1.0};
    double im = 0.0;
    if (read_number(rest, im) != rest.size()) bad_literal(text, "bad imaginary part");
    return {re, im};
}

std::string format_double(double x)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

std::string format_complex(Complex z)
{
    std::string s = format_double(z.real());
    const double im = z.imag();
    if (std::signbit(im)) {
        s += "-" + format_double(-im);
    } else {
        s += "+" + format_double(im);
    }
    return s + "i";
}

void RunConfig::validate() const
{
    if (!std::isfinite(A.real()) || !std::isfinite(A.imag())) throw UsageError("A must be finite");
    if (!(B > 0.0) || !std::isfinite(B)) throw UsageError("B must be a positive real number");
    for (int n : degrees)
        if (n < 1 || n > 200) throw UsageError("degrees must lie in [1, 200]");
    if (nodes < 16) throw UsageError("nodes must be >= 16");
    if (!(tol > 0.0) || tol > 1e-3) throw UsageError("tol must lie in (0, 1e-3]");
    if (out.empty()) throw UsageError("output directory must not be empty");
    for (int id : criteria)
        if (id < 1 || id > 11) throw UsageError("criteria are numbered 1..11");
    if (sweep.steps < 1 || sweep.steps > 50) throw UsageError("sweep steps must lie in [1, 50]");
    if (!(sweep.re_min <= sweep.re_max) || !(sweep.im_min <= sweep.im_max)) throw UsageError("empty sweep range");
}

nlohmann::json to_json(const RunConfig& c)
{
    nlohmann::json j;
    j["A"] = format_complex(c.A);
    j["B"] = format_double(c.B);
    j["degrees"] = c.degrees;
    j["nodes"] = c.nodes;
    j["tol"] = c.tol;
    j["out"] = c.out;
    j["seed"] = c.seed;
    j["figures"] = {{"graph", c.graph_svg}, {"zeros", c.zeros_svg}};
    j["criteria"] = c.criteria;
    j["sweep"] = {{"re_min", c.sweep.re_min}, {"re_max", c.sweep.re_max}, {"im_min", c.sweep.im_min},
                  {"im_max", c.sweep.im_max}, {"steps", c.sweep.steps}};
    return j;
}

RunConfig from_json(const nlohmann::json& j, RunConfig c)
{
    if (!j.is_object()) throw UsageError("config must be a JSON object");
    static const std::set<std::string> known{"A", "B", "degrees", "nodes", "tol", "out", "seed", "figures", "criteria", "sweep"};
    for (const auto& [key, value] : j.items())
        if (!known.count(key)) throw UsageError("unknown config key '" + key + "'");
    try {
        if (j.contains("A")) c.A = j["A"].is_string() ? parse_complex(j["A"].get<std::string>()) : Complex(j["A"].get<double>(), 0.0);
        if (j.contains("B")) {
            const Complex b = j["B"].is_string() ? parse_complex(j["B"].get<std::string>()) : Complex(j["B"].get<double>(), 0.0);
            if (b.imag() != 0.0) throw UsageError("B must be real");
            c.B = b.real();
        }
        if (j.contains("degrees")) c.degrees = j["degrees"].get<std::vector<int>>();
        if (j.contains("nodes")) c.nodes = j["nodes"].get<int>();
        if (j.contains("tol")) c.tol = j["tol"].get<double>();
        if (j.contains("out")) c.out = j["out"].get<std::string>();
        if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("figures")) {
            const auto& f = j["figures"];
            if (f.contains("graph")) c.graph_svg = f["graph"].get<bool>();
            if (f.contains("zeros")) c.zeros_svg = f["zeros"].get<bool>();
        }
        if (j.contains("criteria")) c.criteria = j["criteria"].get<std::vector<int>>();
        if (j.contains("sweep")) {
            const auto& s = j["sweep"];
            if (s.contains("re_min")) c.sweep.re_min = s["re_min"].get<double>();
            if (s.contains("re_max")) c.sweep.re_max = s["re_max"].get<double>();
            if (s.contains("im_min")) c.sweep.im_min = s["im_min"].get<double>();
            if (s.contains("im_max")) c.sweep.im_max = s["im_max"].get<double>();
            if (s.contains("steps")) c.sweep.steps = s["steps"].get<int>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("bad config value: ") + e.what());
    }
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path, const RunConfig& base)
{
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return from_json(j, base);
}

}  // namespace varjac::cli
