#include "lpbm/gallery.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lpbm/polytope.hpp"

namespace lpbm {

ConvexBody make_ball(int dim, double radius) {
    return ConvexBody::ball(dim, radius);
}

ConvexBody make_cube(int dim, double half_side) {
    if (dim < 1 || dim > 3)
        throw std::invalid_argument("make_cube: dim must be 1, 2, or 3");
    if (half_side <= 0.0)
        throw std::invalid_argument("make_cube: half_side must be positive");
    const int corners = 1 << dim;
    Mat V(corners, dim);
    for (int c = 0; c < corners; ++c)
        for (int k = 0; k < dim; ++k)
            V(c, k) = (c >> k & 1) ? half_side : -half_side;
    return ConvexBody::polytope(V);
}

ConvexBody make_box(const Vec& half_sides) {
    const int dim = static_cast<int>(half_sides.size());
    if (dim < 1 || dim > 3)
        throw std::invalid_argument("make_box: dim must be 1, 2, or 3");
    if ((half_sides.array() <= 0.0).any())
        throw std::invalid_argument("make_box: half sides must be positive");
    const int corners = 1 << dim;
    Mat V(corners, dim);
    for (int c = 0; c < corners; ++c)
        for (int k = 0; k < dim; ++k)
            V(c, k) = (c >> k & 1) ? half_sides[k] : -half_sides[k];
    return ConvexBody::polytope(V);
}

ConvexBody make_ellipsoid(const Vec& semi_axes) {
    const int dim = static_cast<int>(semi_axes.size());
    if ((semi_axes.array() <= 0.0).any())
        throw std::invalid_argument(
            "make_ellipsoid: semi-axes must be positive");
    Mat A = Mat::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) A(k, k) = semi_axes[k] * semi_axes[k];
    return ConvexBody::ellipsoid(A);
}

ConvexBody make_simplex(int dim) {
    if (dim == 2) {
        Mat V(3, 2);
        for (int k = 0; k < 3; ++k) {
            double t = 2.0 * std::numbers::pi * k / 3.0;
            V(k, 0) = std::cos(t);
            V(k, 1) = std::sin(t);
        }
        return ConvexBody::polytope(V);
    }
    if (dim == 3) {
        // Alternate cube corners, scaled to unit circumradius.
        Mat V(4, 3);
        V << 1, 1, 1, 1, -1, -1, -1, 1, -1, -1, -1, 1;
        V /= std::sqrt(3.0);
        return ConvexBody::polytope(V);
    }
    throw std::invalid_argument("make_simplex: dim must be 2 or 3");
}

ConvexBody make_reuleaux(double width) { return ConvexBody::reuleaux(width); }

namespace {

Vec random_unit(int dim, RngStream& rng) {
    for (;;) {
        Vec v(dim);
        for (int k = 0; k < dim; ++k) v[k] = rng.next_normal();
        double nrm = v.norm();
        if (nrm > 1e-6) return v / nrm;
    }
}

}  // namespace

ConvexBody random_polytope(int dim, int vertices, const RngStream& rng) {
    if (dim < 2 || dim > 3)
        throw std::invalid_argument("random_polytope: dim must be 2 or 3");
    if (vertices < dim + 1)
        throw std::invalid_argument(
            "random_polytope: need at least dim + 1 vertices");
    for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
        RngStream sub = rng.substream(attempt);
        Mat P(vertices, dim);
        for (int i = 0; i < vertices; ++i) {
            double r = 0.6 + 0.8 * sub.next_uniform();
            P.row(i) = (r * random_unit(dim, sub)).transpose();
        }
        try {
            Polytope hull = convex_hull(P);
            Vec c = polytope_centroid(hull);
            Mat V = hull.V;
            V.rowwise() -= c.transpose();
            return ConvexBody::polytope(V);
        } catch (const std::exception&) {
            // Degenerate draw (all points near one hyperplane); redraw.
        }
    }
    throw std::runtime_error("random_polytope: degenerate draws persisted");
}

ConvexBody random_symmetric_polytope(int dim, int generators,
                                     const RngStream& rng) {
    if (dim < 2 || dim > 3)
        throw std::invalid_argument(
            "random_symmetric_polytope: dim must be 2 or 3");
    if (generators < dim)
        throw std::invalid_argument(
            "random_symmetric_polytope: need at least dim generators");
    for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
        RngStream sub = rng.substream(attempt);
        Mat P(2 * generators, dim);
        for (int i = 0; i < generators; ++i) {
            double r = 0.6 + 0.8 * sub.next_uniform();
            P.row(2 * i) = (r * random_unit(dim, sub)).transpose();
            P.row(2 * i + 1) = -P.row(2 * i);
        }
        try {
            return ConvexBody::polytope(P);
        } catch (const std::exception&) {
        }
    }
    throw std::runtime_error(
        "random_symmetric_polytope: degenerate draws persisted");
}

Mat random_sl(int dim, const RngStream& rng) {
    if (dim < 2)
        throw std::invalid_argument("random_sl: dim must be at least 2");
    for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
        RngStream sub = rng.substream(attempt);
        Mat G(dim, dim);
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) G(r, c) = sub.next_normal();
        double d = G.determinant();
        if (std::abs(d) < 0.2) continue;
        if (d < 0.0) G.col(0) = -G.col(0);
        return G / std::pow(std::abs(d), 1.0 / dim);
    }
    throw std::runtime_error("random_sl: poorly conditioned draws persisted");
}

}  // namespace lpbm
