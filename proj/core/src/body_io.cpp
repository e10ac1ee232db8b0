#include "lpbm/body_io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace lpbm {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::invalid_argument("body spec: " + path + ": " + what);
}

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
}

// Every parser lists the fields it understands; anything else is a typo or a
// schema mismatch and gets rejected rather than ignored.
void reject_unknown(const json& j, const std::string& path,
                    std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (item.key() == a) known = true;
        if (!known) fail(path, "unknown field '" + item.key() + "'");
    }
}

const json& require_field(const json& j, const char* key,
                          const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) fail(path, std::string("missing field '") + key + "'");
    return *it;
}

double get_finite(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) fail(path, "expected a finite number");
    return x;
}

double get_positive(const json& j, const std::string& path) {
    const double x = get_finite(j, path);
    if (!(x > 0.0)) fail(path, "expected a positive number");
    return x;
}

int get_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

Vec get_vec(const json& j, int dim, const std::string& path) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        fail(path, "expected an array of " + std::to_string(dim) + " numbers");
    Vec v(dim);
    for (int i = 0; i < dim; ++i)
        v[i] = get_finite(j[i], path + "[" + std::to_string(i) + "]");
    return v;
}

Mat get_mat(const json& j, int rows, int cols, const std::string& path) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows)
        fail(path, "expected " + std::to_string(rows) + " rows");
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i)
        m.row(i) = get_vec(j[i], cols, path + "[" + std::to_string(i) + "]")
                       .transpose();
    return m;
}

ConvexBody parse_rep(const json& j, int dim, const std::string& path);

ConvexBody parse_ball(const json& j, int dim, const std::string& path) {
    reject_unknown(j, path, {"type", "radius", "center"});
    const double r = get_positive(require_field(j, "radius", path),
                                  path + ".radius");
    Vec c = Vec::Zero(dim);
    if (j.contains("center")) c = get_vec(j["center"], dim, path + ".center");
    return ConvexBody::ball(r, c);
}

ConvexBody parse_ellipsoid(const json& j, int dim, const std::string& path) {
    reject_unknown(j, path, {"type", "semi_axes", "shape", "center"});
    const bool has_axes = j.contains("semi_axes");
    const bool has_shape = j.contains("shape");
    if (has_axes == has_shape)
        fail(path, "give exactly one of 'semi_axes' and 'shape'");
    Mat A;
    if (has_axes) {
        const Vec a = get_vec(j["semi_axes"], dim, path + ".semi_axes");
        if ((a.array() <= 0.0).any())
            fail(path + ".semi_axes", "semi-axes must be positive");
        // support is sqrt(u.A u), so semi-axes enter squared
        A = a.array().square().matrix().asDiagonal();
    } else {
        A = get_mat(j["shape"], dim, dim, path + ".shape");
        if (!A.isApprox(A.transpose(), 1e-12))
            fail(path + ".shape", "shape matrix must be symmetric");
        Eigen::SelfAdjointEigenSolver<Mat> es(A);
        if ((es.eigenvalues().array() <= 0.0).any())
            fail(path + ".shape", "shape matrix must be positive definite");
    }
    Vec c = Vec::Zero(dim);
    if (j.contains("center")) c = get_vec(j["center"], dim, path + ".center");
    return ConvexBody::ellipsoid(A, c);
}

ConvexBody parse_polytope(const json& j, int dim, const std::string& path) {
    reject_unknown(j, path, {"type", "vertices"});
    const json& vj = require_field(j, "vertices", path);
    if (!vj.is_array() || vj.size() < static_cast<std::size_t>(dim + 1))
        fail(path + ".vertices",
             "expected at least " + std::to_string(dim + 1) + " points");
    Mat pts = get_mat(vj, static_cast<int>(vj.size()), dim,
                      path + ".vertices");
    try {
        return ConvexBody::polytope(pts);
    } catch (const std::exception& e) {
        fail(path + ".vertices", e.what());
    }
}

ConvexBody parse_support_sampled(const json& j, int dim,
                                 const std::string& path) {
    reject_unknown(j, path, {"type", "grid", "values"});
    const json& gj = require_field(j, "grid", path);
    require_object(gj, path + ".grid");
    reject_unknown(gj, path + ".grid",
                   {"type", "count", "min_vertices"});
    const json& gt = require_field(gj, "type", path + ".grid");
    if (!gt.is_string()) fail(path + ".grid.type", "expected a string");

    std::shared_ptr<const DirectionSet> grid;
    if (gt == "circle") {
        if (dim != 2) fail(path + ".grid", "circle grids are 2-dimensional");
        reject_unknown(gj, path + ".grid", {"type", "count"});
        const int m = get_int(require_field(gj, "count", path + ".grid"),
                              path + ".grid.count");
        if (m < 4 || m % 2 != 0)
            fail(path + ".grid.count", "need an even count of at least 4");
        grid = DirectionSet::circle(m);
    } else if (gt == "sphere") {
        if (dim != 3) fail(path + ".grid", "sphere grids are 3-dimensional");
        reject_unknown(gj, path + ".grid", {"type", "min_vertices"});
        const int m = get_int(
            require_field(gj, "min_vertices", path + ".grid"),
            path + ".grid.min_vertices");
        if (m < 12) fail(path + ".grid.min_vertices", "need at least 12");
        grid = DirectionSet::sphere(m);
    } else {
        fail(path + ".grid.type", "expected 'circle' or 'sphere'");
    }

    const json& vj = require_field(j, "values", path);
    if (!vj.is_array() || static_cast<int>(vj.size()) != grid->size())
        fail(path + ".values",
             "expected " + std::to_string(grid->size()) +
                 " values (one per grid direction; sphere grids round "
                 "min_vertices up to the next subdivision level)");
    Vec values(grid->size());
    for (int i = 0; i < grid->size(); ++i)
        values[i] = get_positive(vj[i],
                                 path + ".values[" + std::to_string(i) + "]");
    try {
        return ConvexBody::support_sampled(grid, values);
    } catch (const std::exception& e) {
        fail(path + ".values", e.what());
    }
}

ConvexBody parse_reuleaux(const json& j, int dim, const std::string& path) {
    reject_unknown(j, path, {"type", "width"});
    if (dim != 2) fail(path, "reuleaux bodies are 2-dimensional");
    return ConvexBody::reuleaux(
        get_positive(require_field(j, "width", path), path + ".width"));
}

ConvexBody parse_affine_image(const json& j, int dim,
                              const std::string& path) {
    reject_unknown(j, path, {"type", "matrix", "shift", "body"});
    Mat T = get_mat(require_field(j, "matrix", path), dim, dim,
                    path + ".matrix");
    if (std::abs(T.determinant()) < 1e-12)
        fail(path + ".matrix", "matrix is singular");
    Vec shift = Vec::Zero(dim);
    if (j.contains("shift"))
        shift = get_vec(j["shift"], dim, path + ".shift");
    ConvexBody base = parse_rep(require_field(j, "body", path), dim,
                                path + ".body");
    return ConvexBody::affine_image(T, shift, base);
}

ConvexBody parse_lp_sum(const json& j, int dim, const std::string& path) {
    reject_unknown(j, path, {"type", "p", "weights", "bodies"});
    const json& pj = require_field(j, "p", path);
    double p;
    if (pj.is_string()) {
        if (pj != "inf") fail(path + ".p", "expected a number or \"inf\"");
        p = std::numeric_limits<double>::infinity();
    } else {
        p = get_finite(pj, path + ".p");
        if (!(p >= 1.0)) fail(path + ".p", "need p >= 1");
    }
    const json& wj = require_field(j, "weights", path);
    if (!wj.is_array() || wj.size() != 2)
        fail(path + ".weights", "expected two weights");
    const double a = get_finite(wj[0], path + ".weights[0]");
    const double b = get_finite(wj[1], path + ".weights[1]");
    if (a < 0.0 || b < 0.0 || (a == 0.0 && b == 0.0))
        fail(path + ".weights", "weights must be nonnegative, not both zero");
    const json& bj = require_field(j, "bodies", path);
    if (!bj.is_array() || bj.size() != 2)
        fail(path + ".bodies", "expected two bodies");
    ConvexBody K = parse_rep(bj[0], dim, path + ".bodies[0]");
    ConvexBody L = parse_rep(bj[1], dim, path + ".bodies[1]");
    try {
        return lp_combine(p, a, K, b, L);
    } catch (const std::exception& e) {
        fail(path, e.what());
    }
}

ConvexBody parse_rep(const json& j, int dim, const std::string& path) {
    require_object(j, path);
    const json& tj = require_field(j, "type", path);
    if (!tj.is_string()) fail(path + ".type", "expected a string");
    const std::string type = tj.get<std::string>();
    if (type == "ball") return parse_ball(j, dim, path);
    if (type == "ellipsoid") return parse_ellipsoid(j, dim, path);
    if (type == "polytope") return parse_polytope(j, dim, path);
    if (type == "support_sampled") return parse_support_sampled(j, dim, path);
    if (type == "reuleaux") return parse_reuleaux(j, dim, path);
    if (type == "affine_image") return parse_affine_image(j, dim, path);
    if (type == "lp_sum") return parse_lp_sum(j, dim, path);
    fail(path + ".type", "unknown representation '" + type + "'");
}

}  // namespace

ConvexBody body_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("body spec: ") + e.what());
    }
    require_object(j, "$");
    reject_unknown(j, "$", {"dim", "rep", "flags"});
    const int dim = get_int(require_field(j, "dim", "$"), "$.dim");
    if (dim != 2 && dim != 3) fail("$.dim", "dimension must be 2 or 3");

    ConvexBody body = parse_rep(require_field(j, "rep", "$"), dim, "$.rep");

    if (j.contains("flags")) {
        const json& fj = j["flags"];
        require_object(fj, "$.flags");
        reject_unknown(fj, "$.flags", {"origin_symmetric"});
        if (fj.contains("origin_symmetric")) {
            if (!fj["origin_symmetric"].is_boolean())
                fail("$.flags.origin_symmetric", "expected a boolean");
            if (fj["origin_symmetric"].get<bool>() &&
                !body.origin_symmetric())
                fail("$.flags.origin_symmetric",
                     "body is not origin-symmetric");
        }
    }
    return body;
}

ConvexBody load_body(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open body file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return body_from_json_text(ss.str());
}

}  // namespace lpbm
