#pragma once

namespace lpbm {

/// Sign of the 2x2 determinant | b-a ; c-a |: +1 if (a,b,c) turn counter-
/// clockwise, -1 clockwise, 0 exactly collinear. Exact: a cheap forward-error
/// filter answers almost always, and near-degenerate cases fall back to
/// floating-point expansion arithmetic whose sign is never wrong.
int orient2d(const double* a, const double* b, const double* c);

/// Sign of det[b-a; c-a; d-a] (six times the signed tetra volume): +1 if d
/// lies on the side of plane (a,b,c) that (b-a)x(c-a) points into, 0 exactly
/// coplanar. Same filtered/exact structure as orient2d.
int orient3d(const double* a, const double* b, const double* c, const double* d);

} // namespace lpbm
