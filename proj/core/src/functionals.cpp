#include "lpbm/functionals.hpp"

#include "lpbm/constants.hpp"
#include "lpbm/parallel.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

namespace lpbm {

namespace {

constexpr double kPi = std::numbers::pi;

// Shared grid resolution: caller-provided beats the body's own sampling grid
// beats the standard grid for the dimension.  `hold` keeps ownership alive
// when a factory grid is used.
const DirectionSet& resolve_grid(const ConvexBody& K, const DirectionSet* user,
                                 std::shared_ptr<const DirectionSet>& hold) {
    if (user) return *user;
    if (K.kind() == RepKind::support_sampled) {
        // The stored values are exact at the grid nodes, so circumscribing on
        // the body's own grid reproduces the data with no interpolation.
        return *K.as_support_sampled().grid;
    }
    hold = DirectionSet::standard(K.dim());
    return *hold;
}

// A point in the interior, as a translation to apply before circumscribing
// (the 3D polar-dual construction needs positive support).  Bodies built by
// the library almost always certify the origin already; the bounding-box
// center is the fallback for translated composites.
Vec interior_shift(const ConvexBody& K) {
    const int n = K.dim();
    if (K.contains_origin_interior()) return Vec::Zero(n);
    Vec c(n);
    for (int i = 0; i < n; ++i) {
        Vec e = Vec::Zero(n);
        e[i] = 1.0;
        c[i] = 0.5 * (K.support(e) - K.support(-e));
    }
    return c;
}

// Circumscribed polytope of K on the grid, shifting K by -c first when the
// origin is not certified interior.  On return the polytope is a superset of
// K - c, so callers using position-dependent moments must add `c` back.
Polytope circumscribe(const ConvexBody& K, const DirectionSet& grid, Vec* shift) {
    Vec c = interior_shift(K);
    bool moved = c.squaredNorm() > 0.0;
    if (shift) *shift = c;
    return polytope_from_support(moved ? K.translated(-c) : K, grid);
}

// --- exact Steiner building blocks -----------------------------------------

struct Steiner2 {
    double area, per;
};

struct Steiner3 {
    double vol, sur, mci;  // volume, surface, mean curvature integral
};

std::optional<Steiner2> steiner_data_2d(const ConvexBody& K) {
    if (K.dim() != 2) return std::nullopt;
    switch (K.kind()) {
        case RepKind::ball: {
            double r = K.as_ball().r;
            return Steiner2{kPi * r * r, 2.0 * kPi * r};
        }
        case RepKind::polytope: {
            const Polytope& P = K.as_polytope();
            return Steiner2{polytope_volume(P), polytope_perimeter(P)};
        }
        case RepKind::reuleaux: {
            double w = K.as_reuleaux().width;
            return Steiner2{0.5 * (kPi - std::sqrt(3.0)) * w * w, kPi * w};
        }
        case RepKind::ellipsoid: {
            const auto& rep = K.as_ellipsoid();
            Eigen::SelfAdjointEigenSolver<Mat> es(rep.A);
            double l2 = es.eigenvalues()[0], l1 = es.eigenvalues()[1];
            double a = std::sqrt(l1);
            double ecc = std::sqrt(std::max(0.0, 1.0 - l2 / l1));
            return Steiner2{kPi * std::sqrt(rep.A.determinant()),
                            4.0 * a * std::comp_ellint_2(ecc)};
        }
        default:
            return std::nullopt;
    }
}

std::optional<Steiner3> steiner_data_3d(const ConvexBody& K) {
    if (K.dim() != 3) return std::nullopt;
    switch (K.kind()) {
        case RepKind::ball: {
            double r = K.as_ball().r;
            return Steiner3{unit_ball_volume(3) * r * r * r, 4.0 * kPi * r * r,
                            4.0 * kPi * r};
        }
        case RepKind::polytope: {
            const Polytope& P = K.as_polytope();
            return Steiner3{polytope_volume(P), polytope_surface(P),
                            polytope_mean_curvature_integral(P)};
        }
        default:
            return std::nullopt;
    }
}

// Matches a p=1 combination against the pattern (weight * C) + ball(weight *
// r); Minkowski sums with a ball have polynomial (Steiner) functionals
// whenever C's own data is exact.
struct BallPlus {
    ConvexBody other;
    double ow;  // weight applied to `other`
    double r;   // effective ball radius (weight already folded in)
};

std::optional<BallPlus> steiner_pair(const ConvexBody& K) {
    if (K.kind() != RepKind::lp_combination) return std::nullopt;
    const auto& rep = K.as_lp_combination();
    if (rep.p != 1.0) return std::nullopt;
    if (rep.K.kind() == RepKind::ball)
        return BallPlus{rep.L, rep.b, rep.a * rep.K.as_ball().r};
    if (rep.L.kind() == RepKind::ball)
        return BallPlus{rep.K, rep.a, rep.b * rep.L.as_ball().r};
    return std::nullopt;
}

bool steiner_pair_exact(const ConvexBody& K) {
    auto bp = steiner_pair(K);
    if (!bp) return false;
    return K.dim() == 2 ? steiner_data_2d(bp->other).has_value()
                        : steiner_data_3d(bp->other).has_value();
}

// Exact boundary measure when the representation supports one.
std::optional<double> exact_surface(const ConvexBody& K) {
    const int n = K.dim();
    if (n == 2) {
        if (auto sd = steiner_data_2d(K)) return sd->per;
        if (auto bp = steiner_pair(K))
            if (auto sd = steiner_data_2d(bp->other))
                return bp->ow * sd->per + 2.0 * kPi * bp->r;
        return std::nullopt;
    }
    if (n == 3) {
        if (auto sd = steiner_data_3d(K)) return sd->sur;
        if (auto bp = steiner_pair(K))
            if (auto sd = steiner_data_3d(bp->other))
                return bp->ow * bp->ow * sd->sur + 2.0 * (bp->ow * sd->mci) * bp->r +
                       4.0 * kPi * bp->r * bp->r;
        return std::nullopt;
    }
    return std::nullopt;
}

double circ_volume(const ConvexBody& K, const DirectionSet& grid) {
    return polytope_volume(circumscribe(K, grid, nullptr));
}

Estimate mc_mean(const std::vector<double>& xs) {
    const auto n = static_cast<double>(xs.size());
    if (xs.size() < 2) throw std::invalid_argument("mc_mean: need >= 2 samples");
    double m = 0.0;
    for (double x : xs) m += x;
    m /= n;
    double var = 0.0;
    for (double x : xs) var += (x - m) * (x - m);
    var /= (n - 1.0);
    return {m, std::sqrt(var / n)};
}

double binom(int n, int j) {
    double b = 1.0;
    for (int i = 0; i < j; ++i) b = b * (n - i) / (i + 1);
    return b;
}

}  // namespace

const char* to_string(VolumeMethod m) {
    switch (m) {
        case VolumeMethod::closed_form: return "closed_form";
        case VolumeMethod::exact_polytope: return "exact_polytope";
        case VolumeMethod::exact_steiner: return "exact_steiner";
        case VolumeMethod::affine_factor: return "affine_factor";
        case VolumeMethod::circumscribed: return "circumscribed";
    }
    return "unknown";
}

VolumeMethod volume_method(const ConvexBody& K) {
    switch (K.kind()) {
        case RepKind::ball:
        case RepKind::ellipsoid:
        case RepKind::reuleaux:
            return VolumeMethod::closed_form;
        case RepKind::polytope:
            return VolumeMethod::exact_polytope;
        case RepKind::support_sampled:
            return VolumeMethod::circumscribed;
        case RepKind::lp_combination:
            return steiner_pair_exact(K) ? VolumeMethod::exact_steiner
                                         : VolumeMethod::circumscribed;
        case RepKind::affine_image: {
            const auto& rep = K.as_affine_image();
            if (rep.T.rows() == rep.T.cols() &&
                volume_method(rep.base) != VolumeMethod::circumscribed)
                return VolumeMethod::affine_factor;
            return VolumeMethod::circumscribed;
        }
    }
    throw std::logic_error("volume_method: unhandled representation");
}

static double volume_with(const ConvexBody& K, const DirectionSet* user) {
    const int n = K.dim();
    if (n == 1) {
        Vec e(1);
        e[0] = 1.0;
        return K.support(e) + K.support(-e);
    }
    switch (volume_method(K)) {
        case VolumeMethod::closed_form:
            switch (K.kind()) {
                case RepKind::ball:
                    return unit_ball_volume(n) * std::pow(K.as_ball().r, n);
                case RepKind::ellipsoid:
                    return unit_ball_volume(n) *
                           std::sqrt(K.as_ellipsoid().A.determinant());
                case RepKind::reuleaux: {
                    double w = K.as_reuleaux().width;
                    return 0.5 * (kPi - std::sqrt(3.0)) * w * w;
                }
                default:
                    break;
            }
            throw std::logic_error("volume: closed form dispatch");
        case VolumeMethod::exact_polytope:
            return polytope_volume(K.as_polytope());
        case VolumeMethod::exact_steiner: {
            auto bp = steiner_pair(K);
            if (n == 2) {
                auto sd = steiner_data_2d(bp->other);
                double s = bp->ow, r = bp->r;
                return s * s * sd->area + s * sd->per * r + kPi * r * r;
            }
            auto sd = steiner_data_3d(bp->other);
            double s = bp->ow, r = bp->r;
            return s * s * s * sd->vol + s * s * sd->sur * r +
                   s * sd->mci * r * r + unit_ball_volume(3) * r * r * r;
        }
        case VolumeMethod::affine_factor: {
            const auto& rep = K.as_affine_image();
            return std::abs(rep.T.determinant()) * volume_with(rep.base, nullptr);
        }
        case VolumeMethod::circumscribed: {
            std::shared_ptr<const DirectionSet> hold;
            return circ_volume(K, resolve_grid(K, user, hold));
        }
    }
    throw std::logic_error("volume: unhandled method");
}

double volume(const ConvexBody& K) { return volume_with(K, nullptr); }
double volume(const ConvexBody& K, const DirectionSet& grid) {
    return volume_with(K, &grid);
}

static double surface_with(const ConvexBody& K, const DirectionSet* user) {
    const int n = K.dim();
    if (n != 2 && n != 3)
        throw std::invalid_argument("surface_area: dimension must be 2 or 3");
    if (auto s = exact_surface(K)) return *s;
    if (n == 2) {
        // Integral of the support function around the circle; exact up to
        // quadrature for any convex support.
        std::shared_ptr<const DirectionSet> hold;
        const DirectionSet& g = resolve_grid(K, user, hold);
        return g.weights().dot(K.support_batch(g.dirs()));
    }
    std::shared_ptr<const DirectionSet> hold;
    const DirectionSet& g = resolve_grid(K, user, hold);
    return polytope_surface(circumscribe(K, g, nullptr));
}

double surface_area(const ConvexBody& K) { return surface_with(K, nullptr); }
double surface_area(const ConvexBody& K, const DirectionSet& grid) {
    return surface_with(K, &grid);
}

Vec centroid(const ConvexBody& K) {
    switch (K.kind()) {
        case RepKind::ball:
            return K.as_ball().center;
        case RepKind::ellipsoid:
            return K.as_ellipsoid().center;
        case RepKind::polytope:
            return polytope_centroid(K.as_polytope());
        case RepKind::reuleaux:
            return Vec::Zero(2);
        case RepKind::affine_image: {
            const auto& rep = K.as_affine_image();
            if (rep.T.rows() == rep.T.cols())
                return rep.T * centroid(rep.base) + rep.shift;
            break;
        }
        default:
            break;
    }
    std::shared_ptr<const DirectionSet> hold;
    const DirectionSet& g = resolve_grid(K, nullptr, hold);
    Vec c;
    Polytope P = circumscribe(K, g, &c);
    return polytope_centroid(P) + c;
}

static Mat covariance_with(const ConvexBody& K, const DirectionSet* user) {
    const int n = K.dim();
    switch (K.kind()) {
        case RepKind::ball: {
            double r = K.as_ball().r;
            return unit_ball_volume(n) * std::pow(r, n + 2) / (n + 2.0) *
                   Mat::Identity(n, n);
        }
        case RepKind::ellipsoid: {
            const auto& rep = K.as_ellipsoid();
            return unit_ball_volume(n) * std::sqrt(rep.A.determinant()) /
                   (n + 2.0) * rep.A;
        }
        case RepKind::polytope:
            return polytope_covariance(K.as_polytope());
        case RepKind::affine_image: {
            const auto& rep = K.as_affine_image();
            if (rep.T.rows() == rep.T.cols()) {
                Mat inner = covariance_with(rep.base, user);
                return std::abs(rep.T.determinant()) *
                       (rep.T * inner * rep.T.transpose());
            }
            break;
        }
        default:
            break;
    }
    std::shared_ptr<const DirectionSet> hold;
    const DirectionSet& g = resolve_grid(K, user, hold);
    return polytope_covariance(circumscribe(K, g, nullptr));
}

Mat centered_covariance(const ConvexBody& K) {
    return covariance_with(K, nullptr);
}
Mat centered_covariance(const ConvexBody& K, const DirectionSet& grid) {
    return covariance_with(K, &grid);
}

double moment_of_inertia(const ConvexBody& K) {
    return centered_covariance(K).trace();
}

// ---------------------------------------------------------------------------
// Projection power means
// ---------------------------------------------------------------------------

ProjectionMeans projection_means(const ConvexBody& K, int d, RngStream rng,
                                 const ProjectionMeanOptions& opt) {
    const int n = K.dim();
    if (d < 1 || d > n)
        throw std::invalid_argument("projection_means: subspace dimension");
    const double C = unit_ball_volume(n) / unit_ball_volume(d);

    auto all_equal = [&](double v) {
        ProjectionMeans pm;
        pm.arithmetic = pm.harmonic = pm.affine = Estimate{v, 0.0};
        pm.exact = true;
        return pm;
    };
    if (d == n) return all_equal(volume(K));
    if (K.kind() == RepKind::ball) {
        // Every shadow of a ball is a d-ball of the same radius.
        double r = K.as_ball().r;
        return all_equal(unit_ball_volume(n) * std::pow(r, d));
    }

    const int N = opt.samples;
    if (N < 2) throw std::invalid_argument("projection_means: samples");
    std::shared_ptr<const DirectionSet> shadow =
        opt.shadow_grid ? opt.shadow_grid : DirectionSet::circle(256);

    std::vector<double> vals(N);
    parallel_chunks(N, 64, [&](long, long b, long e) {
        for (long i = b; i < e; ++i) {
            RngStream s = rng.substream(static_cast<std::uint64_t>(i));
            Subspace xi = sample_subspace(n, d, s);
            vals[i] = projected_volume(K, xi, *shadow);
        }
    });

    std::vector<double> inv(N), invn(N);
    for (int i = 0; i < N; ++i) {
        if (!(vals[i] > 0.0))
            throw std::runtime_error("projection_means: nonpositive shadow");
        inv[i] = 1.0 / vals[i];
        invn[i] = std::pow(vals[i], -static_cast<double>(n));
    }

    ProjectionMeans pm;
    pm.arithmetic = C * mc_mean(vals);
    pm.harmonic = C * mc_mean(inv).pow(-1.0);
    pm.affine = C * mc_mean(invn).pow(-1.0 / n);
    pm.exact = false;
    return pm;
}

Estimate quermassintegral(const ConvexBody& K, int k, RngStream rng,
                          const ProjectionMeanOptions& opt) {
    const int n = K.dim();
    if (k < 0 || k > n)
        throw std::invalid_argument("quermassintegral: index out of range");
    if (k == 0) return {volume(K), 0.0};
    if (k == n) return {unit_ball_volume(n), 0.0};
    if (K.kind() == RepKind::ball)
        return {unit_ball_volume(n) * std::pow(K.as_ball().r, n - k), 0.0};

    if (n == 2) {
        // k == 1: half the perimeter, deterministic either way.
        return {0.5 * surface_area(K), 0.0};
    }

    // n == 3
    if (k == 1) {
        if (auto s = exact_surface(K)) return {*s / 3.0, 0.0};
    }
    if (k == 2) {
        if (K.kind() == RepKind::polytope)
            return {polytope_mean_curvature_integral(K.as_polytope()) / 3.0, 0.0};
        if (auto bp = steiner_pair(K))
            if (auto sd = steiner_data_3d(bp->other))
                return {(bp->ow * sd->mci + 4.0 * kPi * bp->r) / 3.0, 0.0};
    }
    return projection_means(K, n - k, rng, opt).arithmetic;
}

// ---------------------------------------------------------------------------
// Mixed volumes
// ---------------------------------------------------------------------------

static MixedVolumeFit mixed_volumes_impl(const ConvexBody& K,
                                         const ConvexBody& M,
                                         const DirectionSet* user) {
    const int n = K.dim();
    if (M.dim() != n || (n != 2 && n != 3))
        throw std::invalid_argument("mixed_volumes: dimensions");

    MixedVolumeFit fit;
    fit.coeff = Vec::Zero(n + 1);

    // Dilate pairs have the fully expanded polynomial in closed form.
    if (auto lam = exact_dilate_ratio(K, M)) {
        double VK = volume(K);
        for (int j = 0; j <= n; ++j) fit.coeff[j] = std::pow(*lam, j) * VK;
        fit.residual = 0.0;
        fit.method = volume_method(K);
        return fit;
    }

    const double h0 = std::max(K.scale_hint(), 1e-12) /
                      std::max(M.scale_hint(), 1e-12);

    auto fit_on = [&](const DirectionSet* grid, VolumeMethod* method_out) {
        std::vector<double> ts(n + 2);
        for (int k = 0; k <= n; ++k) ts[k] = k * h0;
        ts[n + 1] = (n + 2) * h0;  // held out

        ConvexBody probe = lp_combine(1.0, 1.0, K, std::max(h0, 1e-12), M);
        VolumeMethod m = volume_method(probe);
        bool exact = m == VolumeMethod::closed_form ||
                     m == VolumeMethod::exact_polytope ||
                     m == VolumeMethod::exact_steiner;
        *method_out = exact ? m : VolumeMethod::circumscribed;

        std::vector<double> vols(n + 2);
        for (int k = 0; k < n + 2; ++k) {
            ConvexBody S = ts[k] == 0.0 ? K : lp_combine(1.0, 1.0, K, ts[k], M);
            if (exact) {
                vols[k] = volume(S);
            } else {
                std::shared_ptr<const DirectionSet> hold;
                const DirectionSet& g =
                    grid ? *grid : (hold = DirectionSet::standard(n), *hold);
                vols[k] = circ_volume(S, g);
            }
        }

        Mat A(n + 1, n + 1);
        Vec rhs(n + 1);
        for (int k = 0; k <= n; ++k) {
            double tp = 1.0;
            for (int j = 0; j <= n; ++j) {
                A(k, j) = tp;
                tp *= ts[k];
            }
            rhs[k] = vols[k];
        }
        Vec c = A.fullPivLu().solve(rhs);

        double th = ts[n + 1], pred = 0.0, tp = 1.0;
        for (int j = 0; j <= n; ++j) {
            pred += c[j] * tp;
            tp *= th;
        }
        double res = std::abs(pred - vols[n + 1]) / std::max(vols[n + 1], 1e-300);
        return std::make_pair(c, res);
    };

    std::shared_ptr<const DirectionSet> base_hold;
    const DirectionSet* grid = user;
    if (!grid) {
        base_hold = n == 2 ? DirectionSet::circle(4096) : DirectionSet::standard(3);
        grid = base_hold.get();
    }

    VolumeMethod method;
    auto [c, res] = fit_on(grid, &method);
    if (method == VolumeMethod::circumscribed && res > 1e-4) {
        // One refinement pass: shrink the shared circumscription bias and keep
        // whichever fit certifies itself better at the held-out node.
        auto finer = grid->refined(2);
        VolumeMethod m2;
        auto [c2, res2] = fit_on(finer.get(), &m2);
        if (res2 < res) {
            c = c2;
            res = res2;
            method = m2;
        }
    }

    for (int j = 0; j <= n; ++j) fit.coeff[j] = c[j] / binom(n, j);
    fit.residual = res;
    fit.method = method;
    return fit;
}

MixedVolumeFit mixed_volumes(const ConvexBody& K, const ConvexBody& M) {
    return mixed_volumes_impl(K, M, nullptr);
}
MixedVolumeFit mixed_volumes(const ConvexBody& K, const ConvexBody& M,
                             const DirectionSet& grid) {
    return mixed_volumes_impl(K, M, &grid);
}

double mixed_volume(const ConvexBody& K, const ConvexBody& M, int j) {
    const int n = K.dim();
    if (j < 0 || j > n) throw std::invalid_argument("mixed_volume: index");
    return mixed_volumes(K, M).coeff[j];
}

// ---------------------------------------------------------------------------
// Width functionals
// ---------------------------------------------------------------------------

double width_power_mean(const ConvexBody& K, double r, const DirectionSet& dirs) {
    if (r == 0.0)
        throw std::invalid_argument("width_power_mean: exponent must be nonzero");
    Vec h = K.support_batch(dirs.dirs());
    double acc = 0.0;
    for (int i = 0; i < dirs.size(); ++i) {
        double w = h[i] + h[dirs.antipode(i)];
        if (!(w > 0.0)) throw std::runtime_error("width_power_mean: flat body");
        acc += dirs.weights()[i] * std::pow(w, r);
    }
    return std::pow(acc, 1.0 / r);
}

// ---------------------------------------------------------------------------
// Inertia minimization / isotropic constant
// ---------------------------------------------------------------------------

double isotropic_constant_reference(const ConvexBody& K) {
    const int n = K.dim();
    double V = volume(K);
    double det = centered_covariance(K).determinant();
    return std::sqrt(std::pow(det, 1.0 / n) / std::pow(V, (n + 2.0) / n));
}

IsotropicResult isotropic_constant(const ConvexBody& K) {
    const int n = K.dim();
    const Mat Sigma = centered_covariance(K);
    const double V = volume(K);

    // Parameters are a full n x n matrix; the trace is projected out so the
    // map T = exp(M) ranges exactly over determinant-one transforms.
    auto unpack = [&](const Vec& x) {
        Mat X(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) X(i, j) = x[i * n + j];
        X -= (X.trace() / n) * Mat::Identity(n, n);
        return X;
    };
    auto f = [&](const Vec& x) {
        Mat T = unpack(x).exp();
        return (T * Sigma * T.transpose()).trace();
    };

    Vec x = Vec::Zero(n * n);
    double fx = f(x);
    IsotropicResult out;
    out.iterations = 0;

    const int max_iter = 500;
    const double hstep = 1e-4;
    for (int it = 0; it < max_iter; ++it) {
        out.iterations = it + 1;
        Vec g(n * n);
        for (int i = 0; i < n * n; ++i) {
            Vec xp = x, xm = x;
            xp[i] += hstep;
            xm[i] -= hstep;
            g[i] = (f(xp) - f(xm)) / (2.0 * hstep);
        }
        double gn = g.norm();
        if (gn <= 1e-7 * std::max(fx, 1e-300)) {
            out.converged = true;
            break;
        }
        double alpha = 1.0;
        bool moved = false;
        while (alpha > 1e-14) {
            Vec xn = x - alpha * g;
            double fn = f(xn);
            if (fn <= fx - 1e-4 * alpha * gn * gn) {
                x = xn;
                fx = fn;
                moved = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!moved) {
            // Line search stalled at numerical resolution of the objective.
            out.converged = gn <= 1e-5 * std::max(fx, 1e-300);
            break;
        }
    }

    out.T = unpack(x).exp();
    out.inertia_min = fx;
    out.L = std::sqrt((fx / n) / std::pow(V, (n + 2.0) / n));
    return out;
}

// ---------------------------------------------------------------------------
// Capacities
// ---------------------------------------------------------------------------

double capacity_q1(const ConvexBody& K) { return surface_area(K); }

Estimate capacity_newtonian(const ConvexBody& K, RngStream rng,
                            const CapacityOptions& opt) {
    if (K.dim() != 3)
        throw std::invalid_argument("capacity_newtonian: dimension must be 3");
    if (opt.walkers < 100)
        throw std::invalid_argument("capacity_newtonian: too few walkers");

    const Vec c = centroid(K);
    auto probe = DirectionSet::standard(3);
    double R = 0.0;
    for (int i = 0; i < probe->size(); ++i) {
        Vec u = probe->dir(i);
        R = std::max(R, K.support(u) - c.dot(u));
    }
    R *= 1.02;  // headroom over the sampled circumradius

    const double Rstart = opt.radius_factor * R;
    const double Rkill = 1024.0 * Rstart;
    const double eps = 1e-6 * R;

    // Distance oracle: exact for balls; supporting-plane distance for
    // polytopes (a valid lower bound, which walk-on-spheres allows); other
    // representations are circumscribed once up front, which adds a bias on
    // the order of the interpolation scale -- below the Monte Carlo noise at
    // these walker counts.
    Eigen::Matrix<double, Eigen::Dynamic, 3> N;
    Vec off;
    Eigen::Vector3d ball_c = Eigen::Vector3d::Zero();
    double ball_r = 0.0;
    const bool is_ball = K.kind() == RepKind::ball;
    if (is_ball) {
        ball_c = Eigen::Vector3d(K.as_ball().center);
        ball_r = K.as_ball().r;
    } else {
        Vec shift = Vec::Zero(3);
        Polytope P = K.kind() == RepKind::polytope
                         ? K.as_polytope()
                         : circumscribe(K, *probe, &shift);
        const int F = static_cast<int>(P.facets.size());
        N.resize(F, 3);
        off.resize(F);
        for (int fidx = 0; fidx < F; ++fidx) {
            N.row(fidx) = P.normals.row(fidx);
            off[fidx] = P.normals.row(fidx).dot(P.V.row(P.facets[fidx][0])) +
                        P.normals.row(fidx).dot(shift.transpose());
        }
    }
    auto distance = [&](const Eigen::Vector3d& x) {
        if (is_ball) return (x - ball_c).norm() - ball_r;
        return (N * x - off).maxCoeff();
    };

    const Eigen::Vector3d center(c);
    const long total = opt.walkers;
    const long chunk = 4096;
    const long nchunks = (total + chunk - 1) / chunk;
    std::vector<long> hits(nchunks, 0);

    parallel_chunks(total, chunk, [&](long ci, long b, long e) {
        RngStream s = rng.substream(static_cast<std::uint64_t>(ci));
        auto unit = [&]() {
            Eigen::Vector3d v;
            do {
                v << s.next_normal(), s.next_normal(), s.next_normal();
            } while (v.squaredNorm() < 1e-12);
            return Eigen::Vector3d(v.normalized());
        };
        long h = 0;
        for (long w = b; w < e; ++w) {
            Eigen::Vector3d x = center + Rstart * unit();
            for (int step = 0; step < 100000; ++step) {
                double d = distance(x);
                if (d < eps) {
                    ++h;
                    break;
                }
                double rho = (x - center).norm();
                if (rho > Rkill) {
                    // Exact probability of ever returning to the start
                    // sphere; survivors re-enter (approximately) uniformly.
                    if (s.next_uniform() < Rstart / rho) {
                        x = center + Rstart * unit();
                        continue;
                    }
                    break;
                }
                x += d * unit();
            }
        }
        hits[ci] = h;
    });

    long H = 0;
    for (long h : hits) H += h;
    double p = static_cast<double>(H) / static_cast<double>(total);
    double sep = std::sqrt(std::max(p * (1.0 - p), 0.0) / total);
    // Spherical mean of the equilibrium potential at radius Rstart is
    // cap / (4 pi Rstart) exactly; solve for cap.
    return {4.0 * kPi * Rstart * p, 4.0 * kPi * Rstart * sep};
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

std::vector<FunctionalDescriptor> functional_registry(int dim) {
    return functional_registry(dim, RegistryOptions{});
}

std::vector<FunctionalDescriptor> functional_registry(int dim,
                                                      const RegistryOptions& opt) {
    if (dim != 2 && dim != 3)
        throw std::invalid_argument("functional_registry: dimension 2 or 3");
    const double n = dim;
    ProjectionMeanOptions po;
    po.samples = opt.mc_samples;
    std::vector<FunctionalDescriptor> fs;

    fs.push_back({"volume", n, true, true,
                  [](const ConvexBody& K, RngStream) {
                      return Estimate{volume(K), 0.0};
                  }});
    fs.push_back({"surface", n - 1, true, true,
                  [](const ConvexBody& K, RngStream) {
                      return Estimate{surface_area(K), 0.0};
                  }});
    fs.push_back({"W1", n - 1, true, true,
                  [po](const ConvexBody& K, RngStream rng) {
                      return quermassintegral(K, 1, rng, po);
                  }});
    if (dim == 3)
        fs.push_back({"W2", 1.0, true, true,
                      [po](const ConvexBody& K, RngStream rng) {
                          return quermassintegral(K, 2, rng, po);
                      }});
    fs.push_back({"hatW1", n - 1, true, true,
                  [dim, po](const ConvexBody& K, RngStream rng) {
                      return projection_means(K, dim - 1, rng, po).harmonic;
                  }});
    fs.push_back({"phi1", n - 1, true, true,
                  [dim, po](const ConvexBody& K, RngStream rng) {
                      return projection_means(K, dim - 1, rng, po).affine;
                  }});
    if (dim == 3) {
        fs.push_back({"hatW2", 1.0, true, true,
                      [po](const ConvexBody& K, RngStream rng) {
                          return projection_means(K, 1, rng, po).harmonic;
                      }});
        fs.push_back({"phi2", 1.0, true, true,
                      [po](const ConvexBody& K, RngStream rng) {
                          return projection_means(K, 1, rng, po).affine;
                      }});
    }
    fs.push_back({"inertia", n + 2, true, true,
                  [](const ConvexBody& K, RngStream) {
                      return Estimate{moment_of_inertia(K), 0.0};
                  }});
    fs.push_back({"widthpow", 1.0, true, true,
                  [dim](const ConvexBody& K, RngStream) {
                      auto D = DirectionSet::standard(dim);
                      return Estimate{width_power_mean(K, 0.5, *D), 0.0};
                  }});
    fs.push_back({"cap1", n - 1, true, true,
                  [](const ConvexBody& K, RngStream) {
                      return Estimate{capacity_q1(K), 0.0};
                  }});
    if (dim == 3)
        fs.push_back({"cap2", 1.0, true, true,
                      [opt](const ConvexBody& K, RngStream rng) {
                          CapacityOptions copt;
                          copt.walkers = opt.cap_walkers;
                          return capacity_newtonian(K, rng, copt);
                      }});
    return fs;
}

}  // namespace lpbm
