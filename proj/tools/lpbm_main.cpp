#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lpbm/body_io.hpp"
#include "lpbm/projection_body.hpp"
#include "lpbm/runner.hpp"

namespace {

using lpbm::BodyInput;
using lpbm::ConvexBody;

// Body specs for the builtin names.  These strings are digested into the
// report, so they must stay byte-stable across releases.
std::optional<std::string> builtin_body(const std::string& name) {
    if (name == "cube") {
        return std::string(
            R"({"dim": 3, "rep": {"type": "polytope", "vertices": )"
            R"([[-0.5, -0.5, -0.5], [0.5, -0.5, -0.5], [-0.5, 0.5, -0.5], [0.5, 0.5, -0.5], )"
            R"([-0.5, -0.5, 0.5], [0.5, -0.5, 0.5], [-0.5, 0.5, 0.5], [0.5, 0.5, 0.5]]}})");
    }
    if (name == "ball") {
        return std::string(R"({"dim": 3, "rep": {"type": "ball", "radius": 1.0}})");
    }
    if (name == "square") {
        return std::string(
            R"({"dim": 2, "rep": {"type": "polytope", "vertices": )"
            R"([[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5], [-0.5, 0.5]]}})");
    }
    if (name == "disk") {
        return std::string(R"({"dim": 2, "rep": {"type": "ball", "radius": 1.0}})");
    }
    return std::nullopt;
}

BodyInput resolve_input(const std::string& arg) {
    if (auto text = builtin_body(arg)) {
        return {"builtin:" + arg, *text};
    }
    std::ifstream in(arg, std::ios::binary);
    if (!in) {
        throw std::invalid_argument("cannot open body file: " + arg +
                                    " (builtin names: cube, ball, square, disk)");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return {arg, buf.str()};
}

void write_output(const std::string& path, const std::string& payload) {
    if (path.empty()) {
        std::fputs(payload.c_str(), stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open output file: " + path);
    }
    out << payload;
}

// Shared between `run` and `emit-curve`.
struct CommonOpts {
    std::uint64_t seed = 20260818;
    std::vector<std::string> bodies = {"cube", "ball"};
    int mc_samples = 512;
    long cap_walkers = 200000;
    int threads = 0;
    std::string out;
    std::string format;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--seed", o.seed, "RNG seed; output is a pure function of options and bodies")
        ->capture_default_str();
    cmd->add_option("--bodies", o.bodies,
                    "two body specs: JSON files or builtin names "
                    "(cube, ball, square, disk); default cube ball")
        ->expected(2);
    cmd->add_option("--mc-samples", o.mc_samples, "subspace draws per Monte Carlo estimate")
        ->capture_default_str();
    cmd->add_option("--cap-walkers", o.cap_walkers, "walk-on-spheres paths per capacity estimate")
        ->capture_default_str();
    cmd->add_option("--threads", o.threads,
                    "worker threads (default: LPBM_THREADS env, else hardware)");
    cmd->add_option("-o,--out", o.out, "write output here instead of stdout");
}

// The thread count is latched the first time any evaluator fans out, so the
// override has to land in the environment before bodies are even parsed.
void apply_threads(int threads) {
    if (threads > 0) {
        setenv("LPBM_THREADS", std::to_string(threads).c_str(), 1);
    }
}

struct RunOpts {
    CommonOpts common;
    std::vector<std::string> checks;
    std::vector<double> p_values;
    std::vector<std::string> functionals;
    int alpha_count = 21;
    int circle_count = 720;
    int sphere_min_vertices = 2562;
};

int do_run(const RunOpts& o) {
    apply_threads(o.common.threads);

    std::vector<BodyInput> inputs = {resolve_input(o.common.bodies[0]),
                                     resolve_input(o.common.bodies[1])};
    ConvexBody K = lpbm::body_from_json_text(inputs[0].text);
    ConvexBody L = lpbm::body_from_json_text(inputs[1].text);

    lpbm::RunConfig cfg;
    cfg.seed = o.common.seed;
    cfg.circle_count = o.circle_count;
    cfg.sphere_min_vertices = o.sphere_min_vertices;
    cfg.mc_samples = o.common.mc_samples;
    cfg.cap_walkers = o.common.cap_walkers;
    if (!o.p_values.empty()) cfg.p_values = o.p_values;
    cfg.alpha_count = o.alpha_count;
    cfg.checks = o.checks;
    cfg.functionals = o.functionals;

    lpbm::RunReport rep = lpbm::run_checks(cfg, K, L, inputs);

    for (const auto& oc : rep.outcomes) {
        std::fprintf(stderr, "%-26s %-13s %s\n", oc.id.c_str(), oc.status.c_str(),
                     oc.detail.c_str());
    }
    write_output(o.common.out,
                 o.common.format == "csv" ? rep.report_csv : rep.report_json);

    if (rep.any_error) return 3;
    if (rep.any_failed) return 1;
    return 0;
}

struct CurveOpts {
    CommonOpts common;
    std::string functional;
    double p = 2.0;
    int alpha_count = 21;
};

int do_curve(const CurveOpts& o) {
    apply_threads(o.common.threads);

    std::vector<BodyInput> inputs = {resolve_input(o.common.bodies[0]),
                                     resolve_input(o.common.bodies[1])};
    ConvexBody K = lpbm::body_from_json_text(inputs[0].text);
    ConvexBody L = lpbm::body_from_json_text(inputs[1].text);
    if (K.dim() != L.dim()) {
        throw std::invalid_argument("bodies must share a dimension");
    }
    if (!std::isfinite(o.p) || o.p < 1.0) {
        throw std::invalid_argument("--p must be a finite value >= 1");
    }
    if (o.alpha_count < 3) {
        throw std::invalid_argument("--alphas must be at least 3");
    }

    lpbm::RegistryOptions ropt;
    ropt.mc_samples = o.common.mc_samples;
    ropt.cap_walkers = o.common.cap_walkers;
    std::vector<lpbm::FunctionalDescriptor> registry =
        lpbm::functional_registry(K.dim(), ropt);
    lpbm::append_projection_functionals(registry, K.dim(), ropt.mc_samples);

    const lpbm::FunctionalDescriptor* F = nullptr;
    for (const auto& f : registry) {
        if (f.name == o.functional) {
            F = &f;
            break;
        }
    }
    if (!F) {
        std::string names;
        for (const auto& f : registry) {
            if (!names.empty()) names += ", ";
            names += f.name;
        }
        throw std::invalid_argument("unknown functional \"" + o.functional +
                                    "\"; available: " + names);
    }

    lpbm::CurveSample c =
        lpbm::sample_curve(*F, o.p, K, L, o.alpha_count, lpbm::RngStream(o.common.seed));

    std::string payload;
    if (o.common.format == "json") {
        nlohmann::ordered_json j;
        j["functional"] = o.functional;
        j["p"] = c.p;
        j["alphas"] = c.alphas;
        j["values"] = c.values;
        j["stderrs"] = c.stderrs;
        payload = j.dump(2) + "\n";
    } else {
        payload = lpbm::curve_csv(c);
    }
    write_output(o.common.out, payload);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"support-function toolkit: Lp Minkowski combinations, geometric "
                 "functionals, and inequality checks"};
    app.set_version_flag("--version", "lpbm 0.1.0");
    app.require_subcommand(1);

    RunOpts ro;
    CLI::App* run_cmd =
        app.add_subcommand("run", "run verification checks on a pair of convex bodies");
    add_common(run_cmd, ro.common);
    run_cmd->add_option("--check", ro.checks,
                        "check ids to run (default: every applicable check; "
                        "see `lpbm checks`)");
    run_cmd->add_option("--p", ro.p_values, "exponents p >= 1 (default: 1.5 2 3)");
    run_cmd->add_option("--functional", ro.functionals,
                        "restrict functional-sweep checks to these registry names");
    run_cmd->add_option("--alphas", ro.alpha_count, "points per concavity curve")
        ->capture_default_str();
    run_cmd->add_option("--circle", ro.circle_count, "2D direction grid size")
        ->capture_default_str();
    run_cmd->add_option("--sphere", ro.sphere_min_vertices,
                        "3D direction grid minimum vertex count")
        ->capture_default_str();
    ro.common.format = "json";
    run_cmd->add_option("--format", ro.common.format, "report format written to --out")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    CurveOpts co;
    CLI::App* curve_cmd = app.add_subcommand(
        "emit-curve", "sample a functional along the combination curve");
    add_common(curve_cmd, co.common);
    curve_cmd->add_option("--functional", co.functional, "registry functional to sample")
        ->required();
    curve_cmd->add_option("--p", co.p, "combination exponent (>= 1)")->required();
    curve_cmd->add_option("--alphas", co.alpha_count, "number of alpha grid points")
        ->capture_default_str();
    co.common.format = "csv";
    curve_cmd->add_option("--format", co.common.format, "curve output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    CLI::App* checks_cmd =
        app.add_subcommand("checks", "list check ids in execution order");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        // CLI11 returns 0 for --help/--version; anything else is a usage error.
        return rc == 0 ? 0 : 2;
    }

    try {
        if (run_cmd->parsed()) return do_run(ro);
        if (curve_cmd->parsed()) return do_curve(co);
        if (checks_cmd->parsed()) {
            for (const auto& id : lpbm::registered_checks()) {
                std::printf("%s\n", id.c_str());
            }
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "lpbm: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "lpbm: %s\n", e.what());
        return 3;
    }
    return 0;
}
