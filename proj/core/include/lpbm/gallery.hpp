#pragma once

#include "lpbm/body.hpp"
#include "lpbm/rng.hpp"

namespace lpbm {

// Ready-made bodies and seeded random generators used by the verification
// harness, the CLI defaults, and the tests.  Every body returned here
// contains the origin in its interior, so it can sit on either side of an
// L_p combination with p > 1 without a preparatory shift.

ConvexBody make_ball(int dim, double radius = 1.0);

// [-half_side, half_side]^dim.  The default is the volume-one cube.
ConvexBody make_cube(int dim, double half_side = 0.5);

ConvexBody make_box(const Vec& half_sides);

// Axis-aligned, origin-centered, with the given semi-axes.
ConvexBody make_ellipsoid(const Vec& semi_axes);

// Regular simplex with unit circumradius and centroid at the origin.
ConvexBody make_simplex(int dim);

ConvexBody make_reuleaux(double width = 1.0);

// Convex hull of `vertices` random points at radii in [0.6, 1.4], then
// translated so the centroid is the origin.  Deterministic per stream; the
// hull may have fewer than `vertices` corners when points fall inside it.
ConvexBody random_polytope(int dim, int vertices, const RngStream& rng);

// Hull of `generators` +/- point pairs.  Origin-symmetric by construction,
// and left untranslated so the symmetry stays exact.
ConvexBody random_symmetric_polytope(int dim, int generators,
                                     const RngStream& rng);

// Random volume-preserving map: a Gaussian matrix normalized to determinant
// one (redrawn while poorly conditioned, so the inverse stays tame).
Mat random_sl(int dim, const RngStream& rng);

}  // namespace lpbm
