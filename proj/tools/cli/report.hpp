#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "run_config.hpp"
#include "varjac/jacobi.hpp"
#include "varjac/quaddiff.hpp"
#include "varjac/tracer.hpp"
#include "varjac/verify.hpp"

namespace varjac::cli {

inline constexpr const char* kGraphSchema = "varjac.graph/1";
inline constexpr const char* kZerosSchema = "varjac.zeros/1";
inline constexpr const char* kVerifySchema = "varjac.verify/1";
inline constexpr const char* kSweepSchema = "varjac.sweep/1";

// Graph computed in the normalized frame, plus the map back to the user's frame.
struct GraphRun {
    quaddiff::Normalization norm;
    quaddiff::QuadraticDifferential qd;
    tracer::CriticalGraph graph;
};

struct ZerosRun {
    int n = 0;
    jacobi::RootSet roots;        // in the user's frame
    double fraction_near_gamma = 0.0;  // within 0.1
    double mean_distance = 0.0;
};

struct SweepCell {
    Complex A;
    Complex A_normalized;
    bool matches = false;
    std::string status;  // "ok" or the error code
    std::vector<std::string> ends;
};

nlohmann::json graph_json(const RunConfig& c, const GraphRun& g);
nlohmann::json zeros_json(const RunConfig& c, const GraphRun& g, const std::vector<ZerosRun>& z);
// Measured runtimes are left out so identical configs give identical files; they go to run.log.
nlohmann::json verify_json(const RunConfig& c, const std::vector<verify::CriterionResult>& r);
nlohmann::json sweep_json(const RunConfig& c, const std::vector<SweepCell>& cells);

// Structural check of an emitted document against its declared schema.
// Returns the list of problems (empty when valid).
std::vector<std::string> validate_document(const nlohmann::json& doc);

// Writes JSON deterministically, then re-reads and validates it.
void write_json(const std::string& path, const nlohmann::json& doc);

// Critical graph (and optionally zeros) as an SVG in the user's frame.
std::string graph_svg(const GraphRun& g, const std::vector<Complex>* zeros = nullptr, const std::string& title = "");

}  // namespace varjac::cli
