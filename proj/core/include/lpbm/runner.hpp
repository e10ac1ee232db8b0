#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lpbm/harness.hpp"

namespace lpbm {

// Everything a deterministic batch run depends on.  Two runs with equal
// configs (and equal body inputs) produce byte-identical reports.
struct RunConfig {
    std::uint64_t seed = 20260818;
    int circle_count = 720;          // 2D direction grid
    int sphere_min_vertices = 2562;  // 3D direction grid
    int mc_samples = 512;            // subspace draws per MC estimate
    long cap_walkers = 200000;       // walk-on-spheres budget
    std::vector<double> p_values = {1.5, 2.0, 3.0};
    int alpha_count = 21;
    Tolerances tol;
    std::vector<std::string> checks;       // empty = every applicable check
    std::vector<std::string> functionals;  // empty = per-check defaults
};

// One body input with its provenance; `text` is the exact spec the body was
// parsed from and is digested into the report.
struct BodyInput {
    std::string path;
    std::string text;
};

struct CheckOutcome {
    std::string id;
    std::string status;  // "ok" | "failed" | "skipped" | "inconclusive"
                         // | "error"
    std::string detail;
};

struct RunReport {
    std::vector<CheckOutcome> outcomes;
    std::string report_json;  // canonical report (the source of truth)
    std::string report_csv;   // flattened slack records and curve points
    bool any_failed = false;
    bool any_error = false;  // internal numeric failure in some check
};

// The ids run_checks understands, in execution order.
std::vector<std::string> registered_checks();

// Runs the selected checks on the pair (K, L).  Checks that need bodies of a
// different dimension or shape than supplied are reported as skipped.
// Throws std::invalid_argument for unknown check ids or functional names.
RunReport run_checks(const RunConfig& cfg, const ConvexBody& K,
                     const ConvexBody& L,
                     const std::vector<BodyInput>& inputs);

// CSV view of one curve: header plus alpha,value,stderr rows.
std::string curve_csv(const CurveSample& c);

}  // namespace lpbm
