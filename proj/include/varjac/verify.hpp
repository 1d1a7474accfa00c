#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "varjac/common.hpp"

namespace varjac::verify {

// How a metric is judged. Info metrics are reported but never fail a criterion.
enum class Relation { Less, LessEqual, Greater, GreaterEqual, Equal, Info };
const char* to_string(Relation r);

struct Metric {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    Relation relation = Relation::Info;
    bool pass = true;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    double seconds = 0.0;
    double time_limit = 0.0;
    std::vector<Metric> metrics;
    std::string error;        // set when the check itself threw
    std::string error_module;
};

struct Settings {
    Complex A{-1.1, 0.1};
    double B = 1.0;
    int nodes = 1024;           // discretization of mu (mass / Cauchy / equilibrium checks)
    double trace_tol = 1e-10;   // tracer absolute tolerance
    std::uint64_t seed = 20240611;
    bool parallel = true;
};

inline constexpr int kCriterionCount = 11;

const char* criterion_title(int id);
double criterion_time_limit(int id);

CriterionResult run_criterion(int id, const Settings& s);

// Runs the listed criteria (all when empty). Independent checks run
// concurrently when the machine has more than one core and s.parallel is set.
std::vector<CriterionResult> run_criteria(const Settings& s, std::span<const int> ids = {});

// Normalized (A, B) pairs drawn uniformly from a box inside the admissible region.
struct RandomPair {
    Complex A;
    double B;
};
std::vector<RandomPair> random_normalized_pairs(std::uint64_t seed, int count);

// Monomial coefficients (lowest degree first) of p_n from the explicit binomial sum.
std::vector<Complex> explicit_coefficients(int n, Complex A, double B);

// Roots of a polynomial from its companion matrix (coefficients lowest first).
std::vector<Complex> companion_roots(std::span<const Complex> coeffs);

}  // namespace varjac::verify
