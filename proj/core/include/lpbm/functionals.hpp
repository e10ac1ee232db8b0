#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "lpbm/body.hpp"
#include "lpbm/estimate.hpp"
#include "lpbm/grassmann.hpp"
#include "lpbm/rng.hpp"

namespace lpbm {

// How a volume was obtained, most exact first.  `circumscribed` means the
// body was replaced by the intersection of grid support halfspaces, a slight
// over-approximation that shrinks with grid resolution.
enum class VolumeMethod {
    closed_form,
    exact_polytope,
    exact_steiner,
    affine_factor,
    circumscribed,
};

const char* to_string(VolumeMethod m);

// Deterministic n-volume.  Closed forms (balls, ellipsoids, Reuleaux),
// exact polytope decompositions, exact Steiner sums for p=1 combinations
// with a ball, |det T| factors through invertible affine images; everything
// else falls back to the circumscribed polytope on `grid` (default: the
// standard grid for the dimension).
double volume(const ConvexBody& K);
double volume(const ConvexBody& K, const DirectionSet& grid);
VolumeMethod volume_method(const ConvexBody& K);

// Boundary measure ((n-1)-volume); perimeter in 2D.
double surface_area(const ConvexBody& K);
double surface_area(const ConvexBody& K, const DirectionSet& grid);

Vec centroid(const ConvexBody& K);

// int_K (x - c)(x - c)^T dx about the centroid c.  Closed forms where the
// representation has them, otherwise exact moments of the circumscribed
// polytope.
Mat centered_covariance(const ConvexBody& K);
Mat centered_covariance(const ConvexBody& K, const DirectionSet& grid);

// Trace of the centered covariance: int_K |x - c|^2 dx.
double moment_of_inertia(const ConvexBody& K);

// ---------------------------------------------------------------------------
// Projection power means
// ---------------------------------------------------------------------------

struct ProjectionMeanOptions {
    int samples = 512;
    // Planar quadrature used for 3D shadow areas/perimeters; defaults to
    // circle(256).
    std::shared_ptr<const DirectionSet> shadow_grid;
};

// The three power means of d-dimensional projection volumes, estimated from
// one shared set of random subspaces.  Sharing matters: the power mean
// inequality then holds for the estimates themselves (affine <= harmonic <=
// arithmetic), not just in expectation.
struct ProjectionMeans {
    Estimate arithmetic;  // exponent  1: the classical mean-projection value
    Estimate harmonic;    // exponent -1
    Estimate affine;      // exponent -n
    bool exact = false;   // true when a closed form bypassed sampling
};

// (omega_n / omega_d) * (E [ V_d(K | xi)^q ])^{ 1/q } over Haar-random
// d-subspaces xi, for q in {1, -1, -n} simultaneously.
ProjectionMeans projection_means(const ConvexBody& K, int d, RngStream rng,
                                 const ProjectionMeanOptions& opt = {});

// k-th intrinsic companion volume W_k (k = 0 is volume, k = n is the unit
// ball volume).  Deterministic short-circuits: balls, every 2D body with an
// exact perimeter (k=1), 3D polytopes (surface / mean curvature integral);
// otherwise the arithmetic projection mean.
Estimate quermassintegral(const ConvexBody& K, int k, RngStream rng,
                          const ProjectionMeanOptions& opt = {});

// ---------------------------------------------------------------------------
// Mixed volumes
// ---------------------------------------------------------------------------

struct MixedVolumeFit {
    Vec coeff;          // coeff[j] = V(K[n-j], M[j]), j = 0..n
    double residual;    // relative misfit at a held-out Steiner node
    VolumeMethod method;  // least exact method among the Steiner volumes
};

// Polynomial fit to t -> vol(K + t M) at n+1 nodes plus one held-out node.
// Every node volume uses the same method and grid, so the circumscribed bias
// is shared across nodes and largely cancels in the coefficients.
MixedVolumeFit mixed_volumes(const ConvexBody& K, const ConvexBody& M);
MixedVolumeFit mixed_volumes(const ConvexBody& K, const ConvexBody& M,
                             const DirectionSet& grid);

// coeff[j] from the fit above.
double mixed_volume(const ConvexBody& K, const ConvexBody& M, int j);

// ---------------------------------------------------------------------------
// Width functionals
// ---------------------------------------------------------------------------

// ( sum_i w_i width(K, u_i)^r )^{1/r} over the grid, r != 0.  Degree-1
// homogeneous and monotone for every r.
double width_power_mean(const ConvexBody& K, double r, const DirectionSet& dirs);

// ---------------------------------------------------------------------------
// Inertia minimization / isotropic constant
// ---------------------------------------------------------------------------

struct IsotropicResult {
    double L = 0.0;            // isotropic constant
    Mat T;                     // det-1 map attaining the inertia minimum
    double inertia_min = 0.0;  // min over det-1 maps of tr Cov(T K)
    bool converged = false;
    int iterations = 0;
};

// Minimizes the moment of inertia over volume-preserving linear maps by
// gradient descent on T = exp(M), M traceless, then reads the isotropic
// constant off the minimum: L^2 = (inertia_min / n) / vol^{(n+2)/n}.
IsotropicResult isotropic_constant(const ConvexBody& K);

// Same quantity straight from the covariance determinant,
// L^2 = det(Cov)^{1/n} / vol^{(n+2)/n}; the optimizer must agree with this.
double isotropic_constant_reference(const ConvexBody& K);

// ---------------------------------------------------------------------------
// Capacities
// ---------------------------------------------------------------------------

// First-order capacity: n * W_1, i.e. exactly the surface area.
double capacity_q1(const ConvexBody& K);

struct CapacityOptions {
    long walkers = 1000000;
    double radius_factor = 4.0;  // enclosing-sphere radius as multiple of the
                                 // body's circumradius about its centroid
};

// Newtonian capacity in 3D by walk-on-spheres from an enclosing sphere.  The
// spherical mean of the exterior equilibrium potential over any enclosing
// sphere of radius R is exactly cap / (4 pi R) (higher multipoles average
// out), so 4 pi R times the hitting probability is unbiased for any R.
Estimate capacity_newtonian(const ConvexBody& K, RngStream rng,
                            const CapacityOptions& opt = {});

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

// A geometric functional with the metadata the inequality harness keys on:
// positive degree of homogeneity, monotonicity under set inclusion, and
// translation invariance.  `eval` may consume randomness; deterministic
// functionals ignore the stream and report se = 0.
struct FunctionalDescriptor {
    std::string name;
    double degree = 1.0;
    bool monotone = true;
    bool translation_invariant = true;
    std::function<Estimate(const ConvexBody&, RngStream)> eval;
};

// Sampling budgets baked into the registry's evaluators.
struct RegistryOptions {
    int mc_samples = 512;       // subspace draws per projection-mean estimate
    long cap_walkers = 200000;  // walk-on-spheres budget for cap2
};

// The built-in functionals for the given dimension (2 or 3).  Projection-body
// composites are appended separately by the projection-body module.
std::vector<FunctionalDescriptor> functional_registry(int dim);
std::vector<FunctionalDescriptor> functional_registry(int dim,
                                                      const RegistryOptions& opt);

}  // namespace lpbm
