#pragma once

#include <memory>

#include "lpbm/body.hpp"
#include "lpbm/functionals.hpp"

namespace lpbm {

// i-th projection body of a 3D body: the support value at direction u is the
// i-th planar quermassintegral of the shadow K | u-perp, so i = 0 gives the
// classical projection body (shadow areas) and i = 1 the mean-width variant
// (half shadow perimeters).  i = 2 degenerates to the ball of radius pi.
//
// Balls map to balls and i = 0 maps ellipsoids to ellipsoids in closed form;
// everything else is sampled on `grid` (default: the standard sphere grid)
// with exact per-node values for polytopes and validated convexity either
// way.  The result is always origin-symmetric.
ConvexBody mixed_projection_body(const ConvexBody& K, int i);
ConvexBody mixed_projection_body(const ConvexBody& K, int i,
                                 std::shared_ptr<const DirectionSet> grid);

// Registry entries for functionals composed with projection bodies
// (volume / W1 / W2 of Pi_0 K and Pi_1 K); 3D only, no-op otherwise.
// Projection bodies are cached per input representation, so a harness
// evaluating several composites of the same body builds Pi_i K once.
void append_projection_functionals(std::vector<FunctionalDescriptor>& fs,
                                   int dim, int mc_samples = 512);

}  // namespace lpbm
