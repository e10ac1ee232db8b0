#include "lpbm/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "lpbm/gallery.hpp"
#include "lpbm/projection_body.hpp"

namespace lpbm {

namespace {

using ojson = nlohmann::ordered_json;

constexpr double kPi = std::numbers::pi;

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(v));
    return buf;
}

std::string fmt17(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

ojson slack_json(const SlackRecord& r) {
    ojson o;
    o["inequality"] = r.inequality;
    o["lhs"] = r.lhs;
    o["lhs_se"] = r.lhs_se;
    o["rhs"] = r.rhs;
    o["rhs_se"] = r.rhs_se;
    o["slack"] = r.slack;
    o["noise"] = r.noise;
    o["verdict"] = to_string(r.verdict);
    o["equality_expected"] = r.equality_expected;
    if (r.equality_expected) {
        o["equality_allowance"] = r.equality_allowance;
        o["equality_ok"] = r.equality_ok;
    }
    return o;
}

ojson estimate_json(const Estimate& e) {
    ojson o;
    o["value"] = e.value;
    o["se"] = e.se;
    return o;
}

ojson curve_json(const CurveSample& c) {
    ojson o;
    o["p"] = c.p;
    o["alphas"] = c.alphas;
    o["values"] = c.values;
    o["stderrs"] = c.stderrs;
    return o;
}

struct Ctx {
    const RunConfig& cfg;
    const ConvexBody& K;
    const ConvexBody& L;
    int dim;
    std::vector<FunctionalDescriptor> registry;
    std::shared_ptr<const DirectionSet> grid;
    std::vector<std::string>* csv;
};

RngStream check_rng(const Ctx& c, const char* id) {
    return RngStream(c.cfg.seed).substream(fnv1a(id));
}

const FunctionalDescriptor& find_functional(const Ctx& c,
                                            const std::string& name) {
    for (const auto& f : c.registry)
        if (f.name == name) return f;
    throw std::logic_error("functional not in registry: " + name);
}

void csv_slack(Ctx& c, const std::string& check, const SlackRecord& r) {
    const char* t = "true";
    const char* f = "false";
    c.csv->push_back("slack," + check + "," + r.inequality + ",,," +
                     fmt17(r.lhs) + "," + fmt17(r.lhs_se) + "," +
                     fmt17(r.rhs) + "," + fmt17(r.rhs_se) + "," +
                     fmt17(r.slack) + "," + fmt17(r.noise) + "," +
                     to_string(r.verdict) + "," +
                     (r.equality_expected ? t : f) + "," +
                     (r.equality_ok ? t : f) + ",,");
}

void csv_curve(Ctx& c, const std::string& check, const std::string& id,
               const CurveSample& s) {
    for (std::size_t i = 0; i < s.alphas.size(); ++i) {
        c.csv->push_back("curve," + check + "," + id + "," + fmt17(s.p) +
                         "," + fmt17(s.alphas[i]) + ",,,,,,,,,," +
                         fmt17(s.values[i]) + "," + fmt17(s.stderrs[i]));
    }
}

// Records the slack row in both outputs and folds its verdict into `ok`:
// a violated record or a broken expected equality fails the check.
void take(Ctx& c, const std::string& check, ojson& list, const SlackRecord& r,
          bool& ok) {
    list.push_back(slack_json(r));
    csv_slack(c, check, r);
    if (r.verdict == Verdict::violated) ok = false;
    if (r.equality_expected && !r.equality_ok) ok = false;
}

ojson ec_json(const EqualityCharacterization& ec) {
    ojson o;
    o["floor"] = ec.floor;
    o["passed"] = ec.passed;
    o["separations"] = ec.separations;
    o["strict_slack_means"] = ec.strict_slack_means;
    o["strict_slack_ses"] = ec.strict_slack_ses;
    ojson cert = ojson::array();
    for (bool b : ec.strict_certified) cert.push_back(b);
    o["strict_certified"] = std::move(cert);
    ojson dil = ojson::array();
    for (const auto& r : ec.dilate_records) dil.push_back(slack_json(r));
    o["dilate_records"] = std::move(dil);
    ojson st = ojson::array();
    for (const auto& r : ec.strict_records) st.push_back(slack_json(r));
    o["strict_records"] = std::move(st);
    if (ec.homothety_probed) {
        o["homothety_p1"] = slack_json(ec.homothety_p1);
        if (!ec.homothety_p.inequality.empty()) {
            o["homothety_p"] = slack_json(ec.homothety_p);
            o["homothety_slack_mean"] = ec.homothety_slack_mean;
            o["homothety_slack_se"] = ec.homothety_slack_se;
        }
    }
    return o;
}

void csv_ec(Ctx& c, const std::string& check,
            const EqualityCharacterization& ec) {
    for (const auto& r : ec.dilate_records) csv_slack(c, check, r);
    for (const auto& r : ec.strict_records) csv_slack(c, check, r);
    if (ec.homothety_probed) {
        csv_slack(c, check, ec.homothety_p1);
        if (!ec.homothety_p.inequality.empty())
            csv_slack(c, check, ec.homothety_p);
    }
}

std::optional<double> first_p_above_1(const RunConfig& cfg) {
    for (double p : cfg.p_values)
        if (p > 1.0) return p;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// audit: registry values on balls and cubes against closed forms
// ---------------------------------------------------------------------------

std::string chk_audit(Ctx& c, ojson& data, std::string& detail) {
    const double n = c.dim;
    const double omega = c.dim == 2 ? kPi : 4.0 * kPi / 3.0;
    bool ok = true;
    int idx = 0, total = 0;
    ojson rows = ojson::array();
    RngStream rng = check_rng(c, "audit");

    auto expect = [&](const std::string& fname, const ConvexBody& B,
                      const std::string& body, double expected) {
        const FunctionalDescriptor& F = find_functional(c, fname);
        Estimate e = F.eval(B, rng.substream(idx++));
        double band = c.cfg.tol.mc_sigma * e.se + 1e-9 * std::abs(expected);
        bool row_ok = std::abs(e.value - expected) <= band;
        ojson row;
        row["functional"] = fname;
        row["body"] = body;
        row["value"] = e.value;
        row["se"] = e.se;
        row["expected"] = expected;
        row["ok"] = row_ok;
        rows.push_back(std::move(row));
        ok = ok && row_ok;
        ++total;
    };

    for (double r : {0.8, 1.3}) {
        ConvexBody ball = make_ball(c.dim, r);
        const std::string tag = "ball(" + fmt17(r) + ")";
        expect("volume", ball, tag, omega * std::pow(r, n));
        expect("surface", ball, tag, n * omega * std::pow(r, n - 1));
        expect("W1", ball, tag, omega * std::pow(r, n - 1));
        expect("hatW1", ball, tag, omega * std::pow(r, n - 1));
        expect("phi1", ball, tag, omega * std::pow(r, n - 1));
        if (c.dim == 3) {
            expect("W2", ball, tag, omega * r);
            expect("hatW2", ball, tag, omega * r);
            expect("phi2", ball, tag, omega * r);
        }
        expect("cap1", ball, tag, n * omega * std::pow(r, n - 1));
        expect("inertia", ball, tag,
               c.dim == 3 ? 4.0 * kPi / 5.0 * std::pow(r, 5)
                          : kPi / 2.0 * std::pow(r, 4));
    }

    ConvexBody cube = make_cube(c.dim, 0.5);
    expect("volume", cube, "unit cube", 1.0);
    expect("surface", cube, "unit cube", 2.0 * n);
    expect("W1", cube, "unit cube", 2.0);
    if (c.dim == 3) expect("W2", cube, "unit cube", kPi);
    expect("cap1", cube, "unit cube", 2.0 * n);
    expect("inertia", cube, "unit cube", c.dim == 3 ? 0.25 : 1.0 / 6.0);

    data["records"] = std::move(rows);
    detail = std::to_string(total) + " closed-form comparisons";
    return ok ? "ok" : "failed";
}

// ---------------------------------------------------------------------------
// firey: companion-volume power inequality with equality characterization
// ---------------------------------------------------------------------------

std::string chk_firey(Ctx& c, ojson& data, std::string& detail) {
    std::vector<std::string> family = {"volume", "W1"};
    if (c.dim == 3) family.push_back("W2");

    bool ok = true;
    int records = 0;
    ojson out = ojson::array();
    RngStream rng = check_rng(c, "firey");
    std::uint64_t id = 0;

    std::vector<std::pair<ConvexBody, ConvexBody>> dilates;
    dilates.emplace_back(c.K, c.K.scaled(1.3));
    dilates.emplace_back(c.L, c.L.scaled(0.8));
    // The user pair plus a strongly anisotropic stretch of K; the stretch
    // keeps the support ratio far from constant, which gives every
    // functional in the family a gap large enough to certify even when the
    // user pair happens to sit close to equality.
    Mat stretch = Mat::Identity(c.dim, c.dim);
    stretch(0, 0) = 2.5;
    stretch(1, 1) = 0.4;
    ConvexBody KE =
        ConvexBody::affine_image(stretch, Vec::Zero(c.dim), c.K);
    std::vector<std::pair<ConvexBody, ConvexBody>> strict;
    strict.emplace_back(c.K, c.L);
    strict.emplace_back(c.K, KE);

    for (const auto& name : family) {
        const FunctionalDescriptor& F = find_functional(c, name);
        for (double p : c.cfg.p_values) {
            EqualityCharacterization ec = check_equality_characterization(
                F, p, dilates, strict, rng.substream(id++), c.cfg.tol);
            ojson entry;
            entry["functional"] = name;
            entry["p"] = p;
            entry["report"] = ec_json(ec);
            out.push_back(std::move(entry));
            csv_ec(c, "firey", ec);
            records += static_cast<int>(ec.dilate_records.size() +
                                        ec.strict_records.size());
            ok = ok && ec.passed;
        }
    }
    data["instances"] = std::move(out);
    detail = std::to_string(records) + " slack records across " +
             std::to_string(family.size()) + " functionals";
    return ok ? "ok" : "failed";
}

// ---------------------------------------------------------------------------
// transference: curve concavity plus midpoint identity on the given pair
// ---------------------------------------------------------------------------

std::string chk_transference(Ctx& c, ojson& data, std::string& detail) {
    std::vector<std::string> names = c.cfg.functionals;
    if (names.empty()) names = {"volume", "widthpow"};

    bool ok = true;
    int curves = 0;
    ojson out = ojson::array();
    RngStream rng = check_rng(c, "transference");
    std::uint64_t id = 0;

    for (const auto& name : names) {
        const FunctionalDescriptor& F = find_functional(c, name);
        for (double p : c.cfg.p_values) {
            if (!(p > 1.0)) continue;
            CurveSample curve = sample_curve(F, p, c.K, c.L,
                                             c.cfg.alpha_count,
                                             rng.substream(id++));
            ConcavityReport cr = check_concavity(F, c.K, c.L, curve,
                                                 c.cfg.tol);
            MidpointAgreement ma = check_midpoint_concavity(
                F, p, c.K, c.L, curve, 10, rng.substream(id++), c.cfg.tol);

            const std::string label = name + "@p=" + fmt17(p);
            csv_curve(c, "transference", label, curve);
            ojson entry;
            entry["functional"] = name;
            entry["p"] = p;
            entry["curve"] = curve_json(curve);
            ojson crj;
            crj["verdict"] = to_string(cr.verdict);
            crj["min_margin"] = cr.min_margin;
            crj["noise"] = cr.noise;
            crj["endpoints_ok"] = cr.endpoints_ok;
            crj["endpoint_error"] = cr.endpoint_error;
            entry["concavity"] = std::move(crj);
            ojson maj;
            maj["trials"] = ma.trials;
            maj["identity_ok"] = ma.identity_ok;
            maj["chords_ok"] = ma.chords_ok;
            maj["worst_identity_error"] = ma.worst_identity_error;
            maj["worst_chord_margin"] = ma.worst_chord_margin;
            entry["midpoint"] = std::move(maj);
            out.push_back(std::move(entry));
            ++curves;

            ok = ok && cr.verdict != Verdict::violated && cr.endpoints_ok &&
                 ma.identity_ok && ma.chords_ok;
        }
    }
    if (curves == 0) {
        detail = "no p > 1 in the p grid";
        return "skipped";
    }
    data["curves"] = std::move(out);
    detail = std::to_string(curves) + " curves sampled";
    return ok ? "ok" : "failed";
}

// ---------------------------------------------------------------------------
// lemma21: curve verdicts agree with direct midpoint tests on random pairs
// ---------------------------------------------------------------------------

std::string chk_lemma21(Ctx& c, ojson& data, std::string& detail) {
    auto p_opt = first_p_above_1(c.cfg);
    if (!p_opt) {
        detail = "needs p > 1";
        return "skipped";
    }
    const double p = *p_opt;
    const FunctionalDescriptor& F = find_functional(c, "volume");
    RngStream rng = check_rng(c, "lemma21");

    bool ok = true;
    ojson rows = ojson::array();
    const int instances = 10;
    const int verts = c.dim == 2 ? 8 : 12;
    for (int i = 0; i < instances; ++i) {
        ConvexBody A = random_polytope(c.dim, verts, rng.substream(2 * i));
        ConvexBody B = random_polytope(c.dim, verts, rng.substream(2 * i + 1));
        CurveSample curve = sample_curve(F, p, A, B, 11,
                                         rng.substream(100 + i));
        ConcavityReport cr = check_concavity(F, A, B, curve, c.cfg.tol);
        MidpointAgreement ma = check_midpoint_concavity(
            F, p, A, B, curve, 8, rng.substream(200 + i), c.cfg.tol);
        const bool curve_ok = cr.verdict != Verdict::violated &&
                              cr.endpoints_ok;
        const bool mid_ok = ma.chords_ok && ma.identity_ok;
        const bool agree = curve_ok == mid_ok;
        ojson row;
        row["instance"] = i;
        row["curve_ok"] = curve_ok;
        row["midpoint_ok"] = mid_ok;
        row["agree"] = agree;
        row["min_margin"] = cr.min_margin;
        rows.push_back(std::move(row));
        ok = ok && agree && curve_ok;
    }
    data["instances"] = std::move(rows);
    detail = std::to_string(instances) + " random pairs at p=" + fmt17(p);
    return ok ? "ok" : "failed";
}

// ---------------------------------------------------------------------------
// lemma22: pointwise support dominance and its equality dichotomy
// ---------------------------------------------------------------------------

std::string chk_lemma22(Ctx& c, ojson& data, std::string& detail) {
    bool ok = true;
    int cases = 0;
    ojson rows = ojson::array();

    auto push = [&](const char* which, double p, double alpha,
                    const InclusionReport& r, bool want_equal) {
        ojson row;
        row["pair"] = which;
        row["p"] = p;
        row["alpha"] = alpha;
        row["min_gap"] = r.min_gap;
        row["max_gap"] = r.max_gap;
        row["pointwise_ok"] = r.pointwise_ok;
        row["bodies_equal"] = r.bodies_equal;
        row["equality_everywhere"] = r.equality_everywhere;
        row["dichotomy_ok"] = r.dichotomy_ok;
        rows.push_back(std::move(row));
        ok = ok && r.pointwise_ok && r.dichotomy_ok &&
             r.bodies_equal == want_equal;
        ++cases;
    };

    for (double p : c.cfg.p_values) {
        if (!(p > 1.0)) continue;
        for (double alpha : {0.25, 0.5, 0.75}) {
            push("K,L", p, alpha,
                 check_lp_inclusion(c.K, c.L, p, alpha, *c.grid, c.cfg.tol),
                 false);
        }
        push("K,K", p, 0.5,
             check_lp_inclusion(c.K, c.K, p, 0.5, *c.grid, c.cfg.tol), true);
    }
    if (cases == 0) {
        detail = "needs p > 1";
        return "skipped";
    }
    data["cases"] = std::move(rows);
    detail = std::to_string(cases) + " (p, alpha) cases on " +
             std::to_string(c.grid->size()) + " directions";
    return ok ? "ok" : "failed";
}

// ---------------------------------------------------------------------------
// lemma23: proper inclusion forces strictly smaller shadows
// ---------------------------------------------------------------------------

std::string chk_lemma23(Ctx& c, ojson& data, std::string& detail) {
    RngStream rng = check_rng(c, "lemma23");
    bool ok = true;
    ojson rows = ojson::array();
    std::uint64_t id = 0;

    std::vector<std::pair<ConvexBody, ConvexBody>> nested;
    nested.emplace_back(c.K.scaled(0.6), c.K);
    nested.emplace_back(c.L.scaled(0.75), c.L);

    for (std::size_t pi = 0; pi < nested.size(); ++pi) {
        for (int j = 1; j < c.dim; ++j) {
            StrictProjectionReport r = check_strict_projection(
                nested[pi].first, nested[pi].second, j, 400,
                rng.substream(id++), c.cfg.tol);
            ojson row;
            row["pair"] = pi == 0 ? "0.6K in K" : "0.75L in L";
            row["j"] = j;
            row["fraction"] = r.fraction;
            row["conf99_lower"] = r.conf99_lower;
            row["w_small"] = estimate_json(r.w_small);
            row["w_large"] = estimate_json(r.w_large);
            row["quermass_strict"] = r.quermass_strict;
            row["passed"] = r.passed;
            rows.push_back(std::move(row));
            ok = ok && r.passed;
        }
    }
    const std::size_t cases = rows.size();
    data["cases"] = std::move(rows);
    detail = std::to_string(cases) + " nested pairs x subspace dims";
    return ok ? "ok" : "failed";
}

// ---------------------------------------------------------------------------
// dilate_equality: every functional sits at equality on (K, 1.7K)
// ---------------------------------------------------------------------------

std::string chk_dilate_equality(Ctx& c, ojson& data, std::string& detail) {
    RngStream rng = check_rng(c, "dilate_equality");
    bool ok = true;
    ojson recs = ojson::array();
    std::uint64_t id = 0;
    ConvexBody Ks = c.K.scaled(1.7);

    std::vector<std::string> names = c.cfg.functionals;
    if (names.empty())
        for (const auto& f : c.registry) names.push_back(f.name);

    auto p_opt = first_p_above_1(c.cfg);
    for (const auto& name : names) {
        const FunctionalDescriptor& F = find_functional(c, name);
        // The walk-on-spheres functional is the one genuinely slow evaluator;
        // one exponent demonstrates its equality behavior.
        const bool slow = name == "cap2";
        for (double p : c.cfg.p_values) {
            if (slow && p_opt && p != *p_opt) continue;
            SlackRecord r =
                check_lp_bm(F, p, c.K, Ks, rng.substream(id++), c.cfg.tol);
            if (!r.equality_expected) {
                // scaled copies are dilates by construction
                r.equality_expected = true;
                r.equality_ok = false;
            }
            take(c, "dilate_equality", recs, r, ok);
        }
    }

    // The volume curve along a dilate pair is affine; measure the largest
    // second difference.
    ojson curve_block;
    if (p_opt) {
        const FunctionalDescriptor& V = find_functional(c, "volume");
        CurveSample curve = sample_curve(V, *p_opt, c.K, Ks,
                                         c.cfg.alpha_count,
                                         rng.substream(id++));
        double worst = 0.0, vmax = 0.0;
        for (double v : curve.values) vmax = std::max(vmax, std::abs(v));
        for (std::size_t i = 1; i + 1 < curve.values.size(); ++i)
            worst = std::max(worst,
                             std::abs(curve.values[i - 1] -
                                      2.0 * curve.values[i] +
                                      curve.values[i + 1]));
        bool affine_ok = worst <= 1e-6 * vmax;
        csv_curve(c, "dilate_equality", "volume@p=" + fmt17(*p_opt), curve);
        curve_block["curve"] = curve_json(curve);
        curve_block["max_second_difference"] = worst;
        curve_block["affine_ok"] = affine_ok;
        ok = ok && affine_ok;
    }

    data["records"] = std::move(recs);
    if (!curve_block.empty()) data["affine_curve"] = std::move(curve_block);
    detail = std::to_string(names.size()) + " functionals at lambda=1.7";
    return ok ? "ok" : "failed";
}

// ---------------------------------------------------------------------------
// equality_characterization: dilates vs separated pairs vs translates
// ---------------------------------------------------------------------------

std::string chk_equality_characterization(Ctx& c, ojson& data,
                                          std::string& detail) {
    RngStream rng = check_rng(c, "equality_characterization");
    bool ok = true;
    ojson out = ojson::array();
    std::uint64_t id = 0;

    std::vector<std::pair<ConvexBody, ConvexBody>> dilates;
    dilates.emplace_back(c.K, c.K.scaled(1.3));
    std::vector<std::pair<ConvexBody, ConvexBody>> strict;
    strict.emplace_back(c.K, c.L);

    for (const std::string name : {"volume", "phi1"}) {
        const FunctionalDescriptor& F = find_functional(c, name);
        for (double p : c.cfg.p_values) {
            if (!(p > 1.0)) continue;
            EqualityCharacterization ec = check_equality_characterization(
                F, p, dilates, strict, rng.substream(id++), c.cfg.tol);
            ojson entry;
            entry["functional"] = name;
            entry["p"] = p;
            entry["report"] = ec_json(ec);
            out.push_back(std::move(entry));
            csv_ec(c, "equality_characterization", ec);
            ok = ok && ec.passed;
        }
    }
    if (out.empty()) {
        detail = "needs p > 1";
        return "skipped";
    }
    data["instances"] = std::move(out);
    detail = "volume and phi1 probed";
    return ok ? "ok" : "failed";
}

// ---------------------------------------------------------------------------
// width_dichotomy: equal constant widths at p = 1 vs strictness at p > 1
// ---------------------------------------------------------------------------

std::string chk_width_dichotomy(Ctx& c, ojson& data, std::string& detail) {
    if (c.dim != 2) {
        detail = "2-dimensional bodies only";
        return "skipped";
    }
    auto p_opt = first_p_above_1(c.cfg);
    if (!p_opt) {
        detail = "needs p > 1";
        return "skipped";
    }
    WidthDichotomyReport r = check_width_dichotomy(*p_opt, c.cfg.tol);
    bool ok = r.passed;
    ojson recs = ojson::array();
    take(c, "width_dichotomy", recs, r.p1_equality, ok);
    take(c, "width_dichotomy", recs, r.p_strict, ok);
    data["records"] = std::move(recs);
    data["strict_floor"] = r.strict_floor;
    data["homothety_rejected"] = r.homothety_rejected;
    data["passed"] = r.passed;
    detail = "disk vs Reuleaux triangle at p=" + fmt17(*p_opt);
    return ok ? "ok" : "failed";
}

// ---------------------------------------------------------------------------
// mixed_volume: the two-body-with-ball family in the plane
// ---------------------------------------------------------------------------

std::string chk_mixed_volume(Ctx& c, ojson& data, std::string& detail) {
    if (c.dim != 2) {
        detail = "2-dimensional bodies only";
        return "skipped";
    }
    RngStream rng = check_rng(c, "mixed_volume");
    bool ok = true;
    ConvexBody C = make_ball(2, 1.0);

    // V(X, j; C)^(1/j): j copies of X mixed with the unit disk.
    FunctionalDescriptor Fj1{"mixedvol_j1", 1.0, true, true,
                             [C](const ConvexBody& X, RngStream) {
                                 return Estimate{mixed_volume(X, C, 1), 0.0};
                             }};
    FunctionalDescriptor Fj2{"mixedvol_j2", 2.0, true, true,
                             [](const ConvexBody& X, RngStream) {
                                 return Estimate{volume(X), 0.0};
                             }};

    ojson recs = ojson::array();
    std::uint64_t id = 0;
    for (const FunctionalDescriptor* F : {&Fj1, &Fj2}) {
        for (double p : c.cfg.p_values) {
            SlackRecord r = check_lp_bm(*F, p, c.K, c.L, rng.substream(id++),
                                        c.cfg.tol);
            take(c, "mixed_volume", recs, r, ok);
            SlackRecord rd = check_lp_bm(*F, p, c.K, c.K.scaled(1.3),
                                         rng.substream(id++), c.cfg.tol);
            take(c, "mixed_volume", recs, rd, ok);
        }
    }

    // Fit residuals at the held-out Steiner node.
    ojson fits = ojson::array();
    const std::pair<const char*, const ConvexBody*> fit_bodies[] = {
        {"K", &c.K}, {"L", &c.L}};
    for (const auto& [tag, body] : fit_bodies) {
        MixedVolumeFit f = mixed_volumes(*body, C);
        ojson row;
        row["body"] = tag;
        row["coefficients"] = std::vector<double>(
            f.coeff.data(), f.coeff.data() + f.coeff.size());
        row["residual"] = f.residual;
        row["ok"] = f.residual <= 1e-6;
        fits.push_back(std::move(row));
        ok = ok && f.residual <= 1e-6;
    }

    // Unit square against the unit disk: the mixed area is half the
    // square's perimeter.
    const double vkl = mixed_volume(make_cube(2, 0.5), C, 1);
    bool oracle_ok = std::abs(vkl - 2.0) <= 1e-6 * 2.0;
    data["records"] = std::move(recs);
    data["fits"] = std::move(fits);
    data["square_disk_mixed_volume"] = vkl;
    data["square_disk_ok"] = oracle_ok;
    ok = ok && oracle_ok;
    detail = "mixed functionals j=1,2 with unit-disk companion";
    return ok ? "ok" : "failed";
}

// ---------------------------------------------------------------------------
// inertia: second-moment power inequality on origin-symmetric pairs
// ---------------------------------------------------------------------------

std::string chk_inertia(Ctx& c, ojson& data, std::string& detail) {
    if (!c.K.origin_symmetric() || !c.L.origin_symmetric()) {
        detail = "needs origin-symmetric bodies";
        return "skipped";
    }
    RngStream rng = check_rng(c, "inertia");
    const FunctionalDescriptor& F = find_functional(c, "inertia");
    bool ok = true;
    ojson recs = ojson::array();
    std::uint64_t id = 0;
    for (double p : c.cfg.p_values) {
        SlackRecord r =
            check_lp_bm(F, p, c.K, c.L, rng.substream(id++), c.cfg.tol);
        take(c, "inertia", recs, r, ok);
        SlackRecord rd = check_lp_bm(F, p, c.K, c.K.scaled(1.4),
                                     rng.substream(id++), c.cfg.tol);
        take(c, "inertia", recs, rd, ok);
    }
    data["records"] = std::move(recs);
    detail = "second moments about the centroid";
    return ok ? "ok" : "failed";
}

// ---------------------------------------------------------------------------
// isotropic: the composite volume/isotropic-constant inequality + oracles
// ---------------------------------------------------------------------------

std::string chk_isotropic(Ctx& c, ojson& data, std::string& detail) {
    if (!c.K.origin_symmetric() || !c.L.origin_symmetric()) {
        detail = "needs origin-symmetric bodies";
        return "skipped";
    }
    bool ok = true;
    bool inconclusive = false;
    ojson comps = ojson::array();
    for (double p : c.cfg.p_values) {
        if (!(p > 1.0)) continue;
        IsotropicCompositeReport r =
            check_isotropic_composite(c.K, c.L, p, c.cfg.tol);
        csv_slack(c, "isotropic", r.record);
        ojson entry;
        entry["p"] = p;
        entry["record"] = slack_json(r.record);
        entry["L_sum"] = r.iso_sum.L;
        entry["L_K"] = r.iso_0.L;
        entry["L_L"] = r.iso_1.L;
        entry["converged"] = r.optimizers_converged;
        comps.push_back(std::move(entry));
        if (r.record.verdict == Verdict::violated) ok = false;
        if (r.record.equality_expected && !r.record.equality_ok) ok = false;
        if (r.record.verdict == Verdict::inconclusive) inconclusive = true;
    }

    // Position-invariance oracles for the constant itself.
    ojson oracles = ojson::array();
    auto oracle = [&](const char* name, const ConvexBody& B,
                      double expected) {
        IsotropicResult ir = isotropic_constant(B);
        bool row_ok = ir.converged && std::abs(ir.L - expected) <= 1e-3;
        ojson row;
        row["body"] = name;
        row["L"] = ir.L;
        row["expected"] = expected;
        row["converged"] = ir.converged;
        row["ok"] = row_ok;
        oracles.push_back(std::move(row));
        ok = ok && row_ok;
    };
    const double L_cube = 1.0 / std::sqrt(12.0);
    oracle("unit cube", make_cube(c.dim, 0.5), L_cube);
    if (c.dim == 3) {
        const double L_ball3 = 0.2774291735052846;
        oracle("ball", make_ball(3, 1.0), L_ball3);
        Vec axes(3);
        axes << 1.0, 1.35, 0.75;
        oracle("ellipsoid", make_ellipsoid(axes), L_ball3);
    } else {
        const double L_disk = 1.0 / (2.0 * std::sqrt(kPi));
        oracle("disk", make_ball(2, 1.0), L_disk);
        Vec axes(2);
        axes << 1.4, 0.7;
        oracle("ellipse", make_ellipsoid(axes), L_disk);
    }

    if (comps.empty()) {
        detail = "needs p > 1";
        return "skipped";
    }
    data["composites"] = std::move(comps);
    data["constant_oracles"] = std::move(oracles);
    detail = "composite inequality + optimizer oracles";
    if (!ok) return "failed";
    return inconclusive ? "inconclusive" : "ok";
}

// ---------------------------------------------------------------------------
// harmonic_affine: harmonic/affine projection means + SL invariance
// ---------------------------------------------------------------------------

std::string chk_harmonic_affine(Ctx& c, ojson& data, std::string& detail) {
    RngStream rng = check_rng(c, "harmonic_affine");
    bool ok = true;
    ojson recs = ojson::array();
    std::uint64_t id = 0;

    std::vector<std::string> names = {"hatW1", "phi1"};
    if (c.dim == 3) {
        names.push_back("hatW2");
        names.push_back("phi2");
    }
    for (const auto& name : names) {
        const FunctionalDescriptor& F = find_functional(c, name);
        for (double p : c.cfg.p_values) {
            SlackRecord r =
                check_lp_bm(F, p, c.K, c.L, rng.substream(id++), c.cfg.tol);
            take(c, "harmonic_affine", recs, r, ok);
            SlackRecord rd = check_lp_bm(F, p, c.K, c.K.scaled(1.25),
                                         rng.substream(id++), c.cfg.tol);
            take(c, "harmonic_affine", recs, rd, ok);
        }
    }

    // The affine projection mean is invariant under volume-preserving linear
    // maps; compare estimates from independent streams.
    const FunctionalDescriptor& Phi = find_functional(c, "phi1");
    ojson inv = ojson::array();
    Estimate base = Phi.eval(c.K, rng.substream(1000));
    for (int i = 0; i < 10; ++i) {
        Mat T = random_sl(c.dim, rng.substream(2000 + i));
        ConvexBody TK =
            ConvexBody::affine_image(T, Vec::Zero(c.dim), c.K);
        Estimate e = Phi.eval(TK, rng.substream(3000 + i));
        double band = c.cfg.tol.mc_sigma * std::hypot(base.se, e.se) +
                      1e-9 * std::abs(base.value);
        bool row_ok = std::abs(e.value - base.value) <= band;
        ojson row;
        row["map"] = i;
        row["value"] = e.value;
        row["se"] = e.se;
        row["base"] = base.value;
        row["base_se"] = base.se;
        row["ok"] = row_ok;
        inv.push_back(std::move(row));
        ok = ok && row_ok;
    }
    data["records"] = std::move(recs);
    data["sl_invariance"] = std::move(inv);
    detail = std::to_string(names.size()) +
             " projection means, 10 unimodular maps";
    return ok ? "ok" : "failed";
}

// ---------------------------------------------------------------------------
// projection: composite functionals of projection bodies (3D)
// ---------------------------------------------------------------------------

std::string chk_projection(Ctx& c, ojson& data, std::string& detail) {
    if (c.dim != 3) {
        detail = "3-dimensional bodies only";
        return "skipped";
    }
    RngStream rng = check_rng(c, "projection");
    bool ok = true;
    ojson recs = ojson::array();
    std::uint64_t id = 0;

    for (const char* name : {"vol_Pi0", "W1_Pi0", "W2_Pi0", "vol_Pi1",
                             "W1_Pi1", "W2_Pi1"}) {
        const FunctionalDescriptor& F = find_functional(c, name);
        for (double p : c.cfg.p_values) {
            SlackRecord r =
                check_lp_bm(F, p, c.K, c.L, rng.substream(id++), c.cfg.tol);
            take(c, "projection", recs, r, ok);
        }
        SlackRecord rd =
            check_lp_bm(F, c.cfg.p_values.front(), c.K, c.K.scaled(1.2),
                        rng.substream(id++), c.cfg.tol);
        take(c, "projection", recs, rd, ok);
    }

    // Shadow-area oracles: axis supports of the projection body of
    // [-1,1]^3 are the facet shadows (= 4); the ball maps to a ball of
    // radius pi.
    ConvexBody big_cube = make_cube(3, 1.0);
    ConvexBody Pc = mixed_projection_body(big_cube, 0);
    double worst_axis = 0.0;
    for (int a = 0; a < 3; ++a) {
        Vec u = Vec::Zero(3);
        u[a] = 1.0;
        worst_axis = std::max(worst_axis, std::abs(Pc.support(u) - 4.0));
    }
    ConvexBody Pb = mixed_projection_body(make_ball(3, 1.0), 0);
    Vec e1 = Vec::Zero(3);
    e1[0] = 1.0;
    const double ball_err = std::abs(Pb.support(e1) - kPi);
    bool oracle_ok = worst_axis <= 1e-9 && ball_err <= 1e-9;
    ok = ok && oracle_ok;

    data["records"] = std::move(recs);
    data["cube_axis_error"] = worst_axis;
    data["ball_radius_error"] = ball_err;
    data["oracles_ok"] = oracle_ok;
    detail = "6 composites + shadow-body oracles";
    return ok ? "ok" : "failed";
}

// ---------------------------------------------------------------------------
// capacity_q1: first-order capacity is the surface area, exactly
// ---------------------------------------------------------------------------

std::string chk_capacity_q1(Ctx& c, ojson& data, std::string& detail) {
    RngStream rng = check_rng(c, "capacity_q1");
    const FunctionalDescriptor& F = find_functional(c, "cap1");
    bool ok = true;
    ojson recs = ojson::array();
    std::uint64_t id = 0;
    for (double p : c.cfg.p_values) {
        SlackRecord r =
            check_lp_bm(F, p, c.K, c.L, rng.substream(id++), c.cfg.tol);
        take(c, "capacity_q1", recs, r, ok);
        SlackRecord rd = check_lp_bm(F, p, c.K, c.K.scaled(1.6),
                                     rng.substream(id++), c.cfg.tol);
        take(c, "capacity_q1", recs, rd, ok);
    }
    Estimate cube_cap =
        F.eval(make_cube(c.dim, 0.5), rng.substream(id++));
    bool oracle_ok = std::abs(cube_cap.value - 2.0 * c.dim) <= 1e-9;
    ok = ok && oracle_ok;
    data["records"] = std::move(recs);
    data["unit_cube_value"] = cube_cap.value;
    data["unit_cube_ok"] = oracle_ok;
    detail = "exact surface-area capacity";
    return ok ? "ok" : "failed";
}

// ---------------------------------------------------------------------------
// capacity_q2: Newtonian capacity via walk-on-spheres (3D)
// ---------------------------------------------------------------------------

std::string chk_capacity_q2(Ctx& c, ojson& data, std::string& detail) {
    if (c.dim != 3) {
        detail = "3-dimensional bodies only";
        return "skipped";
    }
    auto p_opt = first_p_above_1(c.cfg);
    if (!p_opt) {
        detail = "needs p > 1";
        return "skipped";
    }
    RngStream rng = check_rng(c, "capacity_q2");
    bool ok = true;

    CapacityOptions copt;
    copt.walkers = c.cfg.cap_walkers;
    Estimate ball_cap =
        capacity_newtonian(make_ball(3, 1.0), rng.substream(1), copt);
    const double expected = 4.0 * kPi;
    bool oracle_ok = std::abs(ball_cap.value - expected) <=
                     c.cfg.tol.mc_sigma * ball_cap.se;
    ok = ok && oracle_ok;

    const FunctionalDescriptor& F = find_functional(c, "cap2");
    ojson recs = ojson::array();
    SlackRecord r =
        check_lp_bm(F, *p_opt, c.K, c.L, rng.substream(2), c.cfg.tol);
    take(c, "capacity_q2", recs, r, ok);

    data["ball_capacity"] = estimate_json(ball_cap);
    data["ball_expected"] = expected;
    data["ball_ok"] = oracle_ok;
    data["records"] = std::move(recs);
    detail = std::to_string(c.cfg.cap_walkers) + " walkers per estimate";
    return ok ? "ok" : "failed";
}

// ---------------------------------------------------------------------------
// pinfty: monotone approach to the maximum combination
// ---------------------------------------------------------------------------

std::string chk_pinfty(Ctx& c, ojson& data, std::string& detail) {
    RngStream rng = check_rng(c, "pinfty");
    const FunctionalDescriptor& F = find_functional(c, "volume");
    bool ok = true;

    auto report_json = [](const PInftyReport& r) {
        ojson o;
        o["p_values"] = r.p_values;
        ojson vals = ojson::array();
        for (const auto& e : r.combo_values) vals.push_back(estimate_json(e));
        o["combo_values"] = std::move(vals);
        o["inf_value"] = estimate_json(r.inf_value);
        o["value_K"] = estimate_json(r.value_K);
        o["value_L"] = estimate_json(r.value_L);
        o["monotone_ok"] = r.monotone_ok;
        o["limit_ok"] = r.limit_ok;
        o["max_bound_ok"] = r.max_bound_ok;
        o["contained"] = r.contained;
        o["containment_equality_ok"] = r.containment_equality_ok;
        o["verdict"] = to_string(r.verdict);
        return o;
    };

    PInftyReport r1 = check_pinfty_limit(F, c.K, c.L, {2.0, 4.0, 8.0, 16.0},
                                         rng.substream(1), c.cfg.tol);
    ok = ok && r1.verdict == Verdict::holds;

    PInftyReport r2 =
        check_pinfty_limit(F, c.K.scaled(0.5), c.K, {2.0, 4.0, 8.0},
                           rng.substream(2), c.cfg.tol);
    ok = ok && r2.verdict == Verdict::holds && r2.contained &&
         r2.containment_equality_ok;

    data["pair"] = report_json(r1);
    data["contained_pair"] = report_json(r2);
    detail = "p grid {2,4,8,16} plus a contained pair";
    return ok ? "ok" : "failed";
}

struct CheckDef {
    const char* id;
    std::string (*fn)(Ctx&, ojson&, std::string&);
};

const CheckDef kChecks[] = {
    {"audit", chk_audit},
    {"firey", chk_firey},
    {"transference", chk_transference},
    {"lemma21", chk_lemma21},
    {"lemma22", chk_lemma22},
    {"lemma23", chk_lemma23},
    {"dilate_equality", chk_dilate_equality},
    {"equality_characterization", chk_equality_characterization},
    {"width_dichotomy", chk_width_dichotomy},
    {"mixed_volume", chk_mixed_volume},
    {"inertia", chk_inertia},
    {"isotropic", chk_isotropic},
    {"harmonic_affine", chk_harmonic_affine},
    {"projection", chk_projection},
    {"capacity_q1", chk_capacity_q1},
    {"capacity_q2", chk_capacity_q2},
    {"pinfty", chk_pinfty},
};

void validate_config(const RunConfig& cfg, const ConvexBody& K,
                     const ConvexBody& L,
                     const std::vector<FunctionalDescriptor>& registry) {
    if (K.dim() != L.dim())
        throw std::invalid_argument("bodies must share a dimension");
    if (cfg.p_values.empty())
        throw std::invalid_argument("config: p_values must be nonempty");
    for (double p : cfg.p_values)
        if (!(p >= 1.0) || !std::isfinite(p))
            throw std::invalid_argument("config: every p must be >= 1");
    if (cfg.alpha_count < 3)
        throw std::invalid_argument("config: alpha_count must be >= 3");
    if (cfg.circle_count < 8 || cfg.circle_count % 2 != 0)
        throw std::invalid_argument(
            "config: circle_count must be even and >= 8");
    if (cfg.sphere_min_vertices < 12)
        throw std::invalid_argument("config: sphere_min_vertices >= 12");
    if (cfg.mc_samples < 16)
        throw std::invalid_argument("config: mc_samples must be >= 16");
    if (cfg.cap_walkers < 1000)
        throw std::invalid_argument("config: cap_walkers must be >= 1000");
    for (const auto& id : cfg.checks) {
        bool known = false;
        for (const auto& def : kChecks)
            if (id == def.id) known = true;
        if (!known)
            throw std::invalid_argument("config: unknown check id '" + id +
                                        "'");
    }
    for (const auto& name : cfg.functionals) {
        bool known = false;
        for (const auto& f : registry)
            if (f.name == name) known = true;
        if (!known)
            throw std::invalid_argument(
                "config: unknown functional name '" + name + "'");
    }
}

ojson config_json(const RunConfig& cfg,
                  const std::vector<std::string>& resolved_checks) {
    ojson o;
    o["seed"] = cfg.seed;
    o["circle_count"] = cfg.circle_count;
    o["sphere_min_vertices"] = cfg.sphere_min_vertices;
    o["mc_samples"] = cfg.mc_samples;
    o["cap_walkers"] = cfg.cap_walkers;
    o["p_values"] = cfg.p_values;
    o["alpha_count"] = cfg.alpha_count;
    ojson t;
    t["rel_tol"] = cfg.tol.rel_tol;
    t["dilate_tol"] = cfg.tol.dilate_tol;
    t["mc_sigma"] = cfg.tol.mc_sigma;
    o["tolerances"] = std::move(t);
    o["checks"] = resolved_checks;
    o["functionals"] = cfg.functionals;
    return o;
}

}  // namespace

std::vector<std::string> registered_checks() {
    std::vector<std::string> ids;
    for (const auto& def : kChecks) ids.push_back(def.id);
    return ids;
}

RunReport run_checks(const RunConfig& cfg, const ConvexBody& K,
                     const ConvexBody& L,
                     const std::vector<BodyInput>& inputs) {
    const int dim = K.dim();
    RegistryOptions ropt;
    ropt.mc_samples = cfg.mc_samples;
    ropt.cap_walkers = cfg.cap_walkers;
    std::vector<FunctionalDescriptor> registry =
        functional_registry(dim, ropt);
    append_projection_functionals(registry, dim, cfg.mc_samples);

    validate_config(cfg, K, L, registry);

    std::vector<std::string> csv_rows;
    Ctx ctx{cfg,
            K,
            L,
            dim,
            std::move(registry),
            dim == 2 ? DirectionSet::circle(cfg.circle_count)
                     : DirectionSet::sphere(cfg.sphere_min_vertices),
            &csv_rows};

    std::vector<std::string> selected;
    for (const auto& def : kChecks) {
        if (cfg.checks.empty() ||
            std::find(cfg.checks.begin(), cfg.checks.end(), def.id) !=
                cfg.checks.end())
            selected.push_back(def.id);
    }

    RunReport out;
    ojson checks = ojson::array();
    int n_ok = 0, n_failed = 0, n_skipped = 0, n_error = 0, n_inconc = 0;
    for (const auto& def : kChecks) {
        if (std::find(selected.begin(), selected.end(), def.id) ==
            selected.end())
            continue;
        ojson data = ojson::object();
        std::string detail;
        std::string status;
        try {
            status = def.fn(ctx, data, detail);
        } catch (const std::exception& e) {
            status = "error";
            detail = e.what();
            out.any_error = true;
        }
        if (status == "ok") ++n_ok;
        else if (status == "failed") ++n_failed;
        else if (status == "skipped") ++n_skipped;
        else if (status == "inconclusive") ++n_inconc;
        else ++n_error;

        ojson entry;
        entry["id"] = def.id;
        entry["status"] = status;
        entry["detail"] = detail;
        entry["data"] = std::move(data);
        checks.push_back(std::move(entry));
        out.outcomes.push_back({def.id, status, detail});
    }
    out.any_failed = n_failed > 0;

    ojson root;
    root["schema"] = "lpbm-report/1";
    root["config"] = config_json(cfg, selected);
    ojson ins = ojson::array();
    for (const auto& in : inputs) {
        ojson e;
        e["path"] = in.path;
        e["digest"] = "fnv1a64:" + hex64(fnv1a(in.text));
        ins.push_back(std::move(e));
    }
    root["inputs"] = std::move(ins);
    ojson bodies;
    bodies["dim"] = dim;
    root["bodies"] = std::move(bodies);
    root["checks"] = std::move(checks);
    ojson summary;
    summary["ok"] = n_ok;
    summary["failed"] = n_failed;
    summary["skipped"] = n_skipped;
    summary["inconclusive"] = n_inconc;
    summary["error"] = n_error;
    root["summary"] = std::move(summary);
    out.report_json = root.dump(2) + "\n";

    std::string csv =
        "kind,check,id,p,alpha,lhs,lhs_se,rhs,rhs_se,slack,noise,verdict,"
        "equality_expected,equality_ok,value,stderr\n";
    for (const auto& row : csv_rows) csv += row + "\n";
    out.report_csv = std::move(csv);
    return out;
}

std::string curve_csv(const CurveSample& c) {
    std::string out = "alpha,value,stderr\n";
    for (std::size_t i = 0; i < c.alphas.size(); ++i)
        out += fmt17(c.alphas[i]) + "," + fmt17(c.values[i]) + "," +
               fmt17(c.stderrs[i]) + "\n";
    return out;
}

}  // namespace lpbm
