#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "varjac/common.hpp"

namespace varjac::cli {

// Bad user input (flags, literals, config files). Maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// "a+bi", "a-bi", "a", "bi", "i", "-i"; no whitespace.
Complex parse_complex(std::string_view text);
// Shortest text that parses back to exactly the same value.
std::string format_complex(Complex z);
std::string format_double(double x);

struct SweepGrid {
    double re_min = -1.3, re_max = -0.9;
    double im_min = 0.06, im_max = 0.14;
    int steps = 5;  // per axis
    bool operator==(const SweepGrid&) const = default;
};

struct RunConfig {
    Complex A{-1.1, 0.1};
    double B = 1.0;
    std::vector<int> degrees{50};
    int nodes = 1024;
    double tol = 1e-10;
    std::string out = "out";
    std::uint64_t seed = 20240611;
    bool graph_svg = true;
    bool zeros_svg = true;
    std::vector<int> criteria;  // verify: empty means all
    SweepGrid sweep;
    bool operator==(const RunConfig&) const = default;

    void validate() const;
};

nlohmann::json to_json(const RunConfig& c);
// Fields missing from j keep their value in `base`; unknown keys are rejected.
RunConfig from_json(const nlohmann::json& j, RunConfig base = {});
RunConfig load_config(const std::string& path, const RunConfig& base);

}  // namespace varjac::cli
