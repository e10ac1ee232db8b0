#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

namespace lpbm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// A unit vector on S^{n-1}. Construction normalizes and rejects near-zero
/// input; the wrapped vector is kept within 1e-12 of unit norm.
class Direction {
public:
    explicit Direction(Vec u);
    const Vec& vec() const { return u_; }
    int dim() const { return static_cast<int>(u_.size()); }

private:
    Vec u_;
};

/// Antipodally-closed quadrature grid on S^{n-1}.
///
/// n=2: m equally spaced angles (m even), weight 2*pi/m each.
/// n=3: subdivided icosahedron (10 f^2 + 2 vertices) with per-vertex weights
///      from the spherical (Girard) areas of incident triangles; the mesh is
///      exactly antipodally closed, and for even f it contains +-e_i.
/// n>=4: seeded random antipodal pairs with equal weights (closed-form body
///      audits only; sampled-support interpolation is a 2D/3D facility).
///
/// Weights always sum to the surface measure n*omega_n of S^{n-1}.
/// Instances are immutable and shared; `standard()` memoizes the default
/// resolutions (720 directions in 2D, 2562 in 3D).
class DirectionSet {
public:
    static std::shared_ptr<const DirectionSet> circle(int m = 720);
    /// Smallest icosahedral refinement with at least `min_vertices` vertices.
    static std::shared_ptr<const DirectionSet> sphere(int min_vertices = 2562);
    static std::shared_ptr<const DirectionSet> random_antipodal(
        int n, int pairs = 512, std::uint64_t seed = 0x1cebe11u);
    static std::shared_ptr<const DirectionSet> standard(int n);
    /// Same grid family at `factor` times the angular resolution.
    std::shared_ptr<const DirectionSet> refined(int factor) const;

    int dim() const { return dim_; }
    int size() const { return static_cast<int>(dirs_.rows()); }
    const Mat& dirs() const { return dirs_; }         // rows are unit vectors
    const Vec& weights() const { return weights_; }   // sum = n * omega_n
    Vec dir(int i) const { return dirs_.row(i).transpose(); }

    /// Index of -u_i (exact: the grids are antipodally closed by construction).
    int antipode(int i) const { return antipode_[i]; }

    /// Characteristic angular spacing, used by interpolation error models.
    double mean_spacing() const { return spacing_; }

    /// Cone containing direction u with the conic (barycentric) coefficients
    /// of u in the cone's grid directions: u = sum_k lambda[k] * dir(idx[k]).
    /// count = 2 on the circle, 3 on the sphere. Throws for n >= 4 grids.
    struct Cone {
        int idx[3];
        double lambda[3];
        int count;
    };
    Cone locate(const Vec& u) const;

    /// Sphere-mesh topology (n=3 only; empty otherwise): the triangles
    /// incident to vertex v, and the vertex triple of triangle t in
    /// outward-CCW order.
    std::vector<int> vertex_triangles(int v) const;
    std::array<int, 3> triangle(int t) const { return tris_[t]; }

private:
    DirectionSet() = default;
    void build_sphere_index();

    int dim_ = 0;
    Mat dirs_;
    Vec weights_;
    std::vector<int> antipode_;
    double spacing_ = 0.0;

    // n=2 uniform-circle metadata
    double dtheta_ = 0.0;

    // n=3 mesh: triangles, prefactored cone solves, vertex->triangle lists,
    // and a latitude/longitude bucket table seeding point location.
    int freq_ = 0;
    std::vector<std::array<int, 3>> tris_;
    std::vector<Eigen::Matrix3d> tri_inv_;
    std::vector<int> vtris_offset_, vtris_;
    std::vector<std::array<int, 3>> tri_nbr_;
    int nz_ = 0, nphi_ = 0;
    std::vector<int> bucket_offset_, bucket_;
};

} // namespace lpbm
