#pragma once

#include <fstream>
#include <string>

#include "report.hpp"
#include "run_config.hpp"

namespace varjac::cli {

// Sidecar log (run.log in the output directory); the only place with timestamps.
class RunLog {
public:
    explicit RunLog(const std::string& dir);
    void line(const std::string& text);

private:
    std::ofstream out_;
};

// Normalizes, or falls back to the real fixture when A is real (the `--A 1 --B 1` sanity mode).
GraphRun compute_graph(const RunConfig& c);

// Each returns the process exit code.
int cmd_graph(const RunConfig& c, RunLog& log);
int cmd_zeros(const RunConfig& c, RunLog& log);
int cmd_verify(const RunConfig& c, RunLog& log);
int cmd_sweep(const RunConfig& c, RunLog& log);

}  // namespace varjac::cli
