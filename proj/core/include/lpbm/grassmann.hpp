#pragma once

#include <functional>

#include "lpbm/body.hpp"
#include "lpbm/rng.hpp"

namespace lpbm {

// j-dimensional linear subspace of R^n, stored as an orthonormal basis in
// the columns of B.
struct Subspace {
    Mat B;  // n x j with B^T B = I
    int ambient() const { return static_cast<int>(B.rows()); }
    int dim() const { return static_cast<int>(B.cols()); }
};

// Uniformly (Haar) distributed subspace: Gaussian matrix, thin QR, and the
// R-diagonal sign fix that makes the distribution exactly rotation-invariant.
Subspace sample_subspace(int n, int j, RngStream& rng);

// The orthogonal projection K | xi, expressed in the basis coordinates of xi
// (a body of dimension xi.dim()).
ConvexBody project_body(const ConvexBody& K, const Subspace& xi);

// j-dimensional volume of K | xi.  Balls, ellipsoids, and polytopes project
// in closed form; everything else goes through support evaluations on `grid`
// (a circle grid in the subspace, used when xi.dim() == 2).
double projected_volume(const ConvexBody& K, const Subspace& xi,
                        const DirectionSet& grid);

// Perimeter of the 2D shadow K | xi via the circular Cauchy formula
// (integral of the support function over the circle); exact for polytopes.
double projected_perimeter(const ConvexBody& K, const Subspace& xi,
                           const DirectionSet& grid);

// Area of the planar convex region with support values h(c_i) on the circle
// grid: the exact intersection of the tangent halfplanes (polar-dual hull),
// so support samples that are only approximately convex-consistent still give
// the snuggest enclosing polygon.
double circumscribed_area_2d(const std::function<double(const Vec&)>& support,
                             const DirectionSet& grid);

// Monte Carlo estimate of the Haar measure of j-dimensional subspaces on
// which the shadow of K is strictly smaller than the shadow of L, using a
// relative strictness margin of 1e-9 to keep float noise out of the count.
// Requires support dominance h_K <= h_L (checked on the standard grid):
// without it "smaller" would not be one-sided.  Deterministic per seed for
// any worker count; shadow areas use `shadow_grid` (default circle(256)).
double strict_projection_fraction(
    const ConvexBody& K, const ConvexBody& L, int j, int samples,
    const RngStream& rng,
    std::shared_ptr<const DirectionSet> shadow_grid = nullptr);

}  // namespace lpbm
