#include "lpbm/grassmann.hpp"

#include <Eigen/Dense>
#include <Eigen/QR>
#include <cmath>
#include <numbers>

#include "lpbm/constants.hpp"
#include "lpbm/parallel.hpp"

namespace lpbm {

Subspace sample_subspace(int n, int j, RngStream& rng) {
    if (j < 1 || j > n)
        throw std::invalid_argument("sample_subspace: need 1 <= j <= n");
    for (;;) {
        Mat G(n, j);
        for (int c = 0; c < j; ++c)
            for (int r = 0; r < n; ++r) G(r, c) = rng.next_normal();
        Eigen::HouseholderQR<Mat> qr(G);
        Mat R = qr.matrixQR().topLeftCorner(j, j);
        bool ok = true;
        for (int k = 0; k < j; ++k)
            if (std::abs(R(k, k)) < 1e-12) ok = false;
        if (!ok) continue;  // astronomically rare rank deficiency
        Mat Q = qr.householderQ() * Mat::Identity(n, j);
        for (int k = 0; k < j; ++k)
            if (R(k, k) < 0.0) Q.col(k) = -Q.col(k);
        return Subspace{std::move(Q)};
    }
}

ConvexBody project_body(const ConvexBody& K, const Subspace& xi) {
    if (xi.ambient() != K.dim())
        throw std::invalid_argument("project_body: ambient dim mismatch");
    return ConvexBody::affine_image(xi.B.transpose(), Vec::Zero(xi.dim()), K);
}

double circumscribed_area_2d(const std::function<double(const Vec&)>& support,
                             const DirectionSet& grid) {
    if (grid.dim() != 2)
        throw std::invalid_argument("circumscribed_area_2d: need circle grid");
    const int m = grid.size();
    Vec h(m);
    for (int i = 0; i < m; ++i) h[i] = support(grid.dir(i));
    return polytope_volume(circumscribed_polygon(grid.dirs(), h));
}

double projected_volume(const ConvexBody& K, const Subspace& xi,
                        const DirectionSet& grid) {
    const int j = xi.dim();
    if (xi.ambient() != K.dim())
        throw std::invalid_argument("projected_volume: ambient dim mismatch");
    if (j == 1) {
        Vec b = xi.B.col(0);
        return K.support(b) + K.support(-b);
    }
    switch (K.kind()) {
        case RepKind::ball:
            return unit_ball_volume(j) * std::pow(K.as_ball().r, j);
        case RepKind::ellipsoid: {
            Mat M = xi.B.transpose() * K.as_ellipsoid().A * xi.B;
            return unit_ball_volume(j) * std::sqrt(std::max(M.determinant(), 0.0));
        }
        case RepKind::polytope: {
            Mat W = K.as_polytope().V * xi.B;
            return polytope_volume(convex_hull(W));
        }
        default:
            break;
    }
    if (j == K.dim())  // full-dimensional "projection" is a rotation
        return projected_volume(ConvexBody::polytope(
                                    polytope_from_support(K, grid)),
                                xi, grid);
    if (j != 2)
        throw std::invalid_argument(
            "projected_volume: generic bodies support j in {1, 2}");
    return circumscribed_area_2d(
        [&](const Vec& c) { return K.support(xi.B * c); }, grid);
}

double projected_perimeter(const ConvexBody& K, const Subspace& xi,
                           const DirectionSet& grid) {
    if (xi.dim() != 2)
        throw std::invalid_argument("projected_perimeter: need a 2D subspace");
    if (K.kind() == RepKind::polytope) {
        Mat W = K.as_polytope().V * xi.B;
        return polytope_perimeter(convex_hull(W));
    }
    if (K.kind() == RepKind::ball) return 2.0 * std::numbers::pi * K.as_ball().r;
    if (K.kind() == RepKind::ellipsoid) {
        // perimeter of the shadow ellipse via the complete elliptic integral
        Mat M = xi.B.transpose() * K.as_ellipsoid().A * xi.B;
        Eigen::SelfAdjointEigenSolver<Mat> es(M);
        double a = std::sqrt(es.eigenvalues().maxCoeff());
        double b = std::sqrt(es.eigenvalues().minCoeff());
        double e2 = 1.0 - (b * b) / (a * a);
        return 4.0 * a * std::comp_ellint_2(std::sqrt(std::max(e2, 0.0)));
    }
    double per = 0.0;
    for (int i = 0; i < grid.size(); ++i)
        per += grid.weights()[i] * K.support(xi.B * grid.dir(i));
    return per;
}

double strict_projection_fraction(
    const ConvexBody& K, const ConvexBody& L, int j, int samples,
    const RngStream& rng, std::shared_ptr<const DirectionSet> shadow_grid) {
    const int n = K.dim();
    if (L.dim() != n)
        throw std::invalid_argument(
            "strict_projection_fraction: dimension mismatch");
    if (j < 1 || j >= n)
        throw std::invalid_argument(
            "strict_projection_fraction: need 1 <= j <= n-1");
    if (samples < 1)
        throw std::invalid_argument(
            "strict_projection_fraction: need at least one sample");
    auto check = DirectionSet::standard(n);
    for (int i = 0; i < check->size(); ++i) {
        Vec u = check->dir(i);
        double hk = K.support(u), hl = L.support(u);
        if (hk > hl + 1e-9 * std::max(std::abs(hl), 1.0))
            throw std::invalid_argument(
                "strict_projection_fraction: K is not contained in L");
    }
    if (!shadow_grid) shadow_grid = DirectionSet::circle(256);
    std::vector<long> counts(
        static_cast<size_t>((samples + 63) / 64), 0);
    parallel_chunks(samples, 64, [&](long chunk, long begin, long end) {
        long hits = 0;
        for (long i = begin; i < end; ++i) {
            RngStream sub = rng.substream(static_cast<std::uint64_t>(i));
            Subspace xi = sample_subspace(n, j, sub);
            double vk = projected_volume(K, xi, *shadow_grid);
            double vl = projected_volume(L, xi, *shadow_grid);
            if (vk < vl - 1e-9 * std::abs(vl)) ++hits;
        }
        counts[static_cast<size_t>(chunk)] = hits;
    });
    long total = 0;
    for (long c : counts) total += c;
    return static_cast<double>(total) / static_cast<double>(samples);
}

}  // namespace lpbm
