#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lpbm/direction.hpp"
#include "lpbm/polytope.hpp"

namespace lpbm {

// Comparison tolerances shared across the library.  `rel_tol` guards
// deterministic (closed-form) comparisons, `dilate_tol` is the support-ratio
// spread below which two bodies are declared dilates of each other, and
// `mc_sigma` is the width of the noise band (in standard errors) applied to
// Monte Carlo estimates.
struct Tolerances {
    double rel_tol = 1e-9;
    double dilate_tol = 1e-6;
    double mc_sigma = 3.0;
};

enum class RepKind {
    ball,
    ellipsoid,
    polytope,
    support_sampled,
    reuleaux,
    lp_combination,
    affine_image,
};

class ConvexBody;

struct BallRep {
    double r = 1.0;
    Vec center;  // dim entries
};

// { x : (x-c)^T A^{-1} (x-c) <= 1 } with A symmetric positive definite;
// h(u) = sqrt(u^T A u) + c.u
struct EllipsoidRep {
    Mat A;
    Vec center;
};

struct SupportSampledRep {
    std::shared_ptr<const DirectionSet> grid;
    Vec values;  // one support value per grid direction
};

// Reuleaux triangle of the given width, centroid at the origin, one vertex
// pointing along +y.
struct ReuleauxRep {
    double width = 1.0;
    Eigen::Matrix<double, 3, 2> verts;  // corner k at angle pi/2 + 2*pi*k/3
};

struct LpCombinationRep;  // completed after ConvexBody below
struct AffineImageRep;

// Immutable convex body described by its support function.  Copies share the
// underlying representation, so passing bodies by value is cheap and
// thread-safe.  All support evaluations are positively 1-homogeneous and
// accept arbitrary nonzero vectors, not just unit ones.
class ConvexBody {
  public:
    static ConvexBody ball(int dim, double radius);
    static ConvexBody ball(double radius, const Vec& center);
    static ConvexBody ellipsoid(const Mat& A, const Vec& center);
    static ConvexBody ellipsoid(const Mat& A);
    // Takes arbitrary points (rows) and keeps their convex hull.
    static ConvexBody polytope(const Mat& points);
    static ConvexBody polytope(Polytope P);
    static ConvexBody support_sampled(std::shared_ptr<const DirectionSet> grid,
                                      Vec values, bool validate = true);
    static ConvexBody reuleaux(double width);
    // T*K + shift where T maps dim(K) -> rows(T); rectangular T is allowed
    // (orthogonal projections use a j x n matrix).  Closed-form bases are
    // folded eagerly: balls/ellipsoids stay ellipsoids, polytopes are
    // transformed and re-hulled.
    static ConvexBody affine_image(const Mat& T, const Vec& shift,
                                   const ConvexBody& base);

    int dim() const;
    RepKind kind() const;
    double support(const Vec& u) const;
    Vec support_batch(const Mat& dirs) const;  // one value per row

    // True when the origin lies in the interior; required of every operand of
    // an L_p combination with p > 1.
    bool contains_origin_interior() const;
    bool origin_symmetric() const;
    // Rough magnitude (max |h| over a coarse probe); used to scale absolute
    // tolerances.
    double scale_hint() const;
    // Relative size of the piecewise-linear interpolation error committed by
    // support evaluation: zero for closed forms, ~spacing^2 for sampled reps.
    double interp_error_scale() const;

    const BallRep& as_ball() const;
    const EllipsoidRep& as_ellipsoid() const;
    const Polytope& as_polytope() const;
    const SupportSampledRep& as_support_sampled() const;
    const ReuleauxRep& as_reuleaux() const;
    const LpCombinationRep& as_lp_combination() const;
    const AffineImageRep& as_affine_image() const;

    ConvexBody translated(const Vec& x) const;
    ConvexBody scaled(double s) const;  // s > 0

    bool same_rep(const ConvexBody& o) const { return impl_ == o.impl_; }

    // Stable identity of the shared representation; usable as a cache key for
    // derived constructions (projection bodies, materializations).
    const void* rep_identity() const {
        return static_cast<const void*>(impl_.get());
    }

  private:
    struct Impl;
    explicit ConvexBody(std::shared_ptr<const Impl> impl);
    std::shared_ptr<const Impl> impl_;
    friend struct BodyAccess;
};

// a .* K +_p b .* L in the L_p sense: h^p = a h_K^p + b h_L^p for finite p,
// h = max(h_K, h_L) for p = inf (weights enter only through the convention
// alpha .* K = alpha^(1/p) K, which is the identity at p = inf).
struct LpCombinationRep {
    double p = 1.0;
    double a = 1.0, b = 1.0;
    ConvexBody K, L;
};

struct AffineImageRep {
    Mat T;
    Vec shift;
    ConvexBody base;
};

// Builds the combination, applying exact simplifications where the result has
// a closed form: zero weights reduce to scalings, dilate operands collapse to
// a single scaling, p = 1 combines balls with balls and polytopes with
// polytopes exactly.
ConvexBody lp_combine(double p, double a, const ConvexBody& K, double b,
                      const ConvexBody& L);

// Structural dilate detection: returns lambda with L = lambda * K when the
// representations prove it, nullopt otherwise (never a false positive).
std::optional<double> exact_dilate_ratio(const ConvexBody& K,
                                         const ConvexBody& L);

double width(const ConvexBody& K, const Vec& u);

// Max over the grid of |h_K - h_L|; for support functions this sampled sup
// norm is the Hausdorff distance up to grid resolution.
double hausdorff_distance(const ConvexBody& K, const ConvexBody& L,
                          const DirectionSet& dirs);

struct DilateTest {
    bool is_dilate = false;
    double ratio = 0.0;   // median of h_K / h_L over the grid
    double spread = 0.0;  // max relative deviation from the median ratio
};

// Ratio test over the grid; both bodies must contain the origin in their
// interior.  The tolerance widens automatically for sampled representations.
DilateTest is_dilate_pair(const ConvexBody& K, const ConvexBody& L,
                          const DirectionSet& dirs,
                          const Tolerances& tol = {});

struct HomothetyTest {
    bool is_homothetic = false;
    double lambda = 0.0;
    Vec shift;
    double residual = 0.0;  // relative weighted L2 misfit
};

// Least-squares fit of h_K(u) ~ lambda h_L(u) + x.u over the grid.
HomothetyTest is_homothetic_pair(const ConvexBody& K, const ConvexBody& L,
                                 const DirectionSet& dirs,
                                 const Tolerances& tol = {});

// Circumscribed polytope: intersection of the halfspaces {x.u <= h(u)} over
// the grid.  Both dimensions go through polar duality and need h > 0 on the
// grid (volume paths shift the origin inside first).
Polytope polytope_from_support(const ConvexBody& K, const DirectionSet& dirs);

// Any body -> polytope body (identity for polytope reps).
ConvexBody materialize(const ConvexBody& K, const DirectionSet& dirs);

}  // namespace lpbm
