#include "lpbm/projection_body.hpp"

#include "lpbm/grassmann.hpp"
#include "lpbm/parallel.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace lpbm {

namespace {

constexpr double kPi = std::numbers::pi;

Subspace perp_basis(const Vec& u) {
    const int n = static_cast<int>(u.size());
    Mat M(n, 1);
    M.col(0) = u;
    Eigen::HouseholderQR<Mat> qr(M);
    Mat Q = qr.householderQ();
    Subspace xi;
    xi.B = Q.rightCols(n - 1);  // orthonormal complement of u
    return xi;
}

double shadow_quermass(const ConvexBody& K, const Vec& u, int i,
                       const DirectionSet& shadow_grid) {
    Subspace xi = perp_basis(u);
    if (i == 0) return projected_volume(K, xi, shadow_grid);
    return 0.5 * projected_perimeter(K, xi, shadow_grid);
}

ConvexBody build_projection_body(const ConvexBody& K, int i,
                                 std::shared_ptr<const DirectionSet> grid) {
    if (K.dim() != 3)
        throw std::invalid_argument("mixed_projection_body: 3D bodies only");
    if (i < 0 || i > 2)
        throw std::invalid_argument("mixed_projection_body: index must be 0..2");
    if (i == 2) {
        // The planar quermassintegral of index 2 is the constant pi for every
        // shadow, so the result is the ball of radius pi regardless of K.
        return ConvexBody::ball(3, kPi);
    }
    if (K.kind() == RepKind::ball) {
        double r = K.as_ball().r;
        return ConvexBody::ball(3, i == 0 ? kPi * r * r : kPi * r);
    }
    if (i == 0 && K.kind() == RepKind::ellipsoid) {
        // Shadow area along u is pi * sqrt(det A * u^T A^{-1} u), which is
        // itself an ellipsoid support function.
        const Mat& A = K.as_ellipsoid().A;
        return ConvexBody::ellipsoid(kPi * kPi * A.determinant() * A.inverse());
    }

    auto shadow = DirectionSet::circle(256);
    const DirectionSet& G = *grid;
    const int m = G.size();

    // One evaluation per antipodal pair, mirrored afterwards, so the symmetry
    // of the result is exact by construction.
    std::vector<int> reps;
    reps.reserve(m / 2);
    for (int v = 0; v < m; ++v)
        if (v < G.antipode(v)) reps.push_back(v);

    Vec vals(m);
    parallel_chunks(static_cast<long>(reps.size()), 64, [&](long, long b, long e) {
        for (long idx = b; idx < e; ++idx) {
            int v = reps[idx];
            vals[v] = shadow_quermass(K, G.dir(v), i, *shadow);
        }
    });
    for (int v : reps) vals[G.antipode(v)] = vals[v];

    // Per-node values are exact for polytopes (projected hulls) and for
    // ellipsoid perimeters (complete elliptic integral); those samples of a
    // genuine support function must pass the convexity audit.  Values from
    // the planar circumscription quadrature carry a relative bias around
    // 1e-5, far above the audit's slack, so they are stored unaudited.
    bool exact_nodes = K.kind() == RepKind::polytope ||
                       (i == 1 && K.kind() == RepKind::ellipsoid);
    return ConvexBody::support_sampled(grid, vals, exact_nodes);
}

struct PiCacheKey {
    const void* id;
    int i;
    const DirectionSet* grid;
    bool operator<(const PiCacheKey& o) const {
        return std::tie(id, i, grid) < std::tie(o.id, o.i, o.grid);
    }
};

// Each entry pins the input body and grid it was built from.  That is not
// just bookkeeping: the key holds raw pointers, and pinning the owners is
// what guarantees a later body cannot be allocated at a cached address and
// alias a stale entry.
struct PiCacheEntry {
    ConvexBody input;
    std::shared_ptr<const DirectionSet> grid;
    ConvexBody pi;
};

std::mutex pi_cache_mutex;
std::map<PiCacheKey, PiCacheEntry>& pi_cache() {
    static std::map<PiCacheKey, PiCacheEntry> cache;
    return cache;
}

}  // namespace

ConvexBody mixed_projection_body(const ConvexBody& K, int i,
                                 std::shared_ptr<const DirectionSet> grid) {
    if (!grid) throw std::invalid_argument("mixed_projection_body: null grid");
    PiCacheKey key{K.rep_identity(), i, grid.get()};
    {
        std::lock_guard<std::mutex> lock(pi_cache_mutex);
        auto it = pi_cache().find(key);
        if (it != pi_cache().end()) return it->second.pi;
    }
    ConvexBody P = build_projection_body(K, i, grid);
    {
        std::lock_guard<std::mutex> lock(pi_cache_mutex);
        auto& cache = pi_cache();
        if (cache.size() >= 128) cache.clear();
        cache.emplace(key, PiCacheEntry{K, grid, P});
    }
    return P;
}

ConvexBody mixed_projection_body(const ConvexBody& K, int i) {
    return mixed_projection_body(K, i, DirectionSet::standard(3));
}

void append_projection_functionals(std::vector<FunctionalDescriptor>& fs,
                                   int dim, int mc_samples) {
    if (dim != 3) return;
    ProjectionMeanOptions po;
    po.samples = mc_samples;
    struct Entry {
        const char* name;
        int i;   // projection body index
        int k;   // 0 = volume, else quermassintegral index
        double degree;
    };
    static constexpr Entry entries[] = {
        {"vol_Pi0", 0, 0, 6.0}, {"W1_Pi0", 0, 1, 4.0}, {"W2_Pi0", 0, 2, 2.0},
        {"vol_Pi1", 1, 0, 3.0}, {"W1_Pi1", 1, 1, 2.0}, {"W2_Pi1", 1, 2, 1.0},
    };
    for (const Entry& e : entries) {
        fs.push_back({e.name, e.degree, true, true,
                      [e, po](const ConvexBody& K, RngStream rng) {
                          ConvexBody P = mixed_projection_body(K, e.i);
                          if (e.k == 0) return Estimate{volume(P), 0.0};
                          return quermassintegral(P, e.k, rng, po);
                      }});
    }
}

}  // namespace lpbm
