#pragma once

#include "lpbm/direction.hpp"

#include <vector>

namespace lpbm {

/// Convex polytope in R^n, n in {1,2,3}, stored by its vertices in convex
/// position with deterministic ordering:
///  - 1D: the two endpoints, smaller first;
///  - 2D: CCW boundary cycle starting at the lexicographic minimum;
///  - 3D: vertices sorted lexicographically, plus facet polygons (coplanar
///    triangles merged) listed CCW from outside with outward unit normals.
struct Polytope {
    Mat V;
    std::vector<std::vector<int>> facets; // 3D only
    Mat normals;                          // 3D only, one row per facet

    int dim() const { return static_cast<int>(V.cols()); }
    int verts() const { return static_cast<int>(V.rows()); }
};

/// Convex hull of the rows of `points`. 2D uses a monotone chain, 3D
/// incremental insertion; both decide every turn with the exact-sign
/// orientation predicates, so ties (collinear/coplanar input) cannot corrupt
/// the structure. Lower-dimensional input throws std::invalid_argument.
Polytope convex_hull(const Mat& points);

/// Consistency audit: every input point lies on or inside every facet plane.
/// O(points * facets); used by tests, not hot paths.
bool hull_contains_all(const Polytope& P, const Mat& points);

/// Intersection of the halfplanes { x : x.u_i <= h_i } for a 2D family of
/// outward directions with h_i > 0 (shift the origin inside first if needed).
/// Works in the polar dual: hulling the points u_i/h_i discards halfplanes
/// dominated by their neighbours, so support samples that are only
/// approximately convex-consistent still give the snuggest enclosing polygon
/// instead of spraying tangent-line intersections far outside the body.
Polytope circumscribed_polygon(const Mat& dirs, const Vec& h);

double polytope_volume(const Polytope& P);    // length / area / volume
double polytope_surface(const Polytope& P);   // 3D: exact facet-area sum
double polytope_perimeter(const Polytope& P); // 2D: edge-length sum
Vec polytope_centroid(const Polytope& P);

/// Second-moment matrix about the centroid, Cov = int_P (x-c)(x-c)^T dx,
/// assembled from exact per-simplex moments.
Mat polytope_covariance(const Polytope& P);

/// 3D only: sum over edges of edge length times exterior dihedral angle,
/// halved.  This is the r^2 coefficient of vol(P + r*ball), which is how the
/// exact Steiner volume path uses it.
double polytope_mean_curvature_integral(const Polytope& P);

} // namespace lpbm
