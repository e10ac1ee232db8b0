#include "lpbm/body.hpp"

#include "lpbm/predicates.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>

namespace lpbm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool approx_zero_vec(const Vec& v, double scale) {
    return v.size() == 0 || v.norm() <= 1e-14 * scale;
}

// Lex-sorted copy of the rows of V.
std::vector<Vec> sorted_rows(const Mat& V) {
    std::vector<Vec> rows;
    rows.reserve(V.rows());
    for (Eigen::Index i = 0; i < V.rows(); ++i) rows.push_back(V.row(i));
    std::sort(rows.begin(), rows.end(), [](const Vec& a, const Vec& b) {
        for (Eigen::Index k = 0; k < a.size(); ++k) {
            if (a[k] != b[k]) return a[k] < b[k];
        }
        return false;
    });
    return rows;
}

}  // namespace

struct ConvexBody::Impl {
    RepKind kind = RepKind::ball;
    int dim = 0;

    std::optional<BallRep> ball;
    std::optional<EllipsoidRep> ellipsoid;
    std::optional<Polytope> poly;
    std::optional<SupportSampledRep> sampled;
    std::optional<ReuleauxRep> reuleaux;
    std::optional<LpCombinationRep> lp;
    std::optional<AffineImageRep> affine;

    bool origin_interior = false;
    bool symmetric = false;
    double scale = 1.0;
    double interp_err = 0.0;
};

ConvexBody::ConvexBody(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

// Lets the free-function builders in this file assemble implementations.
struct BodyAccess {
    static std::shared_ptr<ConvexBody::Impl> make() {
        return std::make_shared<ConvexBody::Impl>();
    }
    static ConvexBody wrap(std::shared_ptr<const ConvexBody::Impl> impl) {
        return ConvexBody(std::move(impl));
    }
};

int ConvexBody::dim() const { return impl_->dim; }
RepKind ConvexBody::kind() const { return impl_->kind; }
bool ConvexBody::contains_origin_interior() const {
    return impl_->origin_interior;
}
bool ConvexBody::origin_symmetric() const { return impl_->symmetric; }
double ConvexBody::scale_hint() const { return impl_->scale; }
double ConvexBody::interp_error_scale() const { return impl_->interp_err; }

namespace {
[[noreturn]] void kind_error(const char* want) {
    throw std::logic_error(std::string("body does not hold a ") + want +
                           " representation");
}
}  // namespace

const BallRep& ConvexBody::as_ball() const {
    if (!impl_->ball) kind_error("ball");
    return *impl_->ball;
}
const EllipsoidRep& ConvexBody::as_ellipsoid() const {
    if (!impl_->ellipsoid) kind_error("ellipsoid");
    return *impl_->ellipsoid;
}
const Polytope& ConvexBody::as_polytope() const {
    if (!impl_->poly) kind_error("polytope");
    return *impl_->poly;
}
const SupportSampledRep& ConvexBody::as_support_sampled() const {
    if (!impl_->sampled) kind_error("support_sampled");
    return *impl_->sampled;
}
const ReuleauxRep& ConvexBody::as_reuleaux() const {
    if (!impl_->reuleaux) kind_error("reuleaux");
    return *impl_->reuleaux;
}
const LpCombinationRep& ConvexBody::as_lp_combination() const {
    if (!impl_->lp) kind_error("lp_combination");
    return *impl_->lp;
}
const AffineImageRep& ConvexBody::as_affine_image() const {
    if (!impl_->affine) kind_error("affine_image");
    return *impl_->affine;
}

// ---------------------------------------------------------------------------
// support evaluation

double ConvexBody::support(const Vec& u) const {
    const Impl& im = *impl_;
    if (u.size() != im.dim)
        throw std::invalid_argument("support: direction dimension mismatch");
    switch (im.kind) {
        case RepKind::ball:
            return im.ball->r * u.norm() + im.ball->center.dot(u);
        case RepKind::ellipsoid: {
            double q = u.dot(im.ellipsoid->A * u);
            return std::sqrt(std::max(q, 0.0)) + im.ellipsoid->center.dot(u);
        }
        case RepKind::polytope:
            return (im.poly->V * u).maxCoeff();
        case RepKind::support_sampled: {
            DirectionSet::Cone c = im.sampled->grid->locate(u);
            double h = 0.0;
            for (int k = 0; k < c.count; ++k)
                h += c.lambda[k] * im.sampled->values[c.idx[k]];
            return h;
        }
        case RepKind::reuleaux: {
            double nu = u.norm();
            if (nu == 0.0) return 0.0;
            double th = std::atan2(u[1], u[0]);
            const ReuleauxRep& rr = *im.reuleaux;
            const double twopi = 2.0 * std::numbers::pi;
            double best = -kInf;
            for (int k = 0; k < 3; ++k) {
                double phi = std::numbers::pi / 2.0 + twopi * k / 3.0;
                double d = std::remainder(th - phi - std::numbers::pi, twopi);
                double vk = (rr.verts(k, 0) * u[0] + rr.verts(k, 1) * u[1]);
                if (std::abs(d) <= std::numbers::pi / 6.0 + 1e-12)
                    return vk + rr.width * nu;
                best = std::max(best, vk);
            }
            return best;
        }
        case RepKind::lp_combination: {
            const LpCombinationRep& c = *im.lp;
            double hk = c.K.support(u), hl = c.L.support(u);
            if (c.p == 1.0) return c.a * hk + c.b * hl;
            if (std::isinf(c.p)) return std::max(hk, hl);
            return std::pow(
                c.a * std::pow(hk, c.p) + c.b * std::pow(hl, c.p), 1.0 / c.p);
        }
        case RepKind::affine_image: {
            const AffineImageRep& a = *im.affine;
            return a.base.support(a.T.transpose() * u) + a.shift.dot(u);
        }
    }
    throw std::logic_error("support: unknown representation");
}

Vec ConvexBody::support_batch(const Mat& dirs) const {
    Vec out(dirs.rows());
    for (Eigen::Index i = 0; i < dirs.rows(); ++i)
        out[i] = support(dirs.row(i).transpose());
    return out;
}

// ---------------------------------------------------------------------------
// construction helpers

namespace {

// Probe the support function on a modest direction set; used only to settle
// flags for representations with no structural answer.
double min_support_probe(const ConvexBody& body) {
    int n = body.dim();
    if (n == 1) {
        Vec plus(1), minus(1);
        plus << 1.0;
        minus << -1.0;
        return std::min(body.support(plus), body.support(minus));
    }
    auto D_ptr = DirectionSet::standard(n);
    const DirectionSet& D = *D_ptr;
    double m = kInf;
    for (int i = 0; i < D.size(); ++i)
        m = std::min(m, body.support(D.dir(i)));
    return m;
}

}  // namespace

ConvexBody ConvexBody::ball(int dim, double radius) {
    return ball(radius, Vec::Zero(dim));
}

ConvexBody ConvexBody::ball(double radius, const Vec& center) {
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw std::invalid_argument("ball: radius must be positive");
    if (center.size() < 1)
        throw std::invalid_argument("ball: empty center");
    auto impl = std::make_shared<Impl>();
    impl->kind = RepKind::ball;
    impl->dim = static_cast<int>(center.size());
    impl->ball = BallRep{radius, center};
    impl->origin_interior = center.norm() < radius;
    impl->symmetric = approx_zero_vec(center, radius);
    impl->scale = radius + center.norm();
    return ConvexBody(impl);
}

ConvexBody ConvexBody::ellipsoid(const Mat& A) {
    return ellipsoid(A, Vec::Zero(A.rows()));
}

ConvexBody ConvexBody::ellipsoid(const Mat& A, const Vec& center) {
    if (A.rows() != A.cols() || A.rows() < 1)
        throw std::invalid_argument("ellipsoid: matrix must be square");
    if (center.size() != A.rows())
        throw std::invalid_argument("ellipsoid: center dimension mismatch");
    if ((A - A.transpose()).norm() > 1e-10 * (1.0 + A.norm()))
        throw std::invalid_argument("ellipsoid: matrix must be symmetric");
    Mat As = 0.5 * (A + A.transpose());
    Eigen::LLT<Mat> llt(As);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument(
            "ellipsoid: matrix must be positive definite");
    auto impl = std::make_shared<Impl>();
    impl->kind = RepKind::ellipsoid;
    impl->dim = static_cast<int>(As.rows());
    impl->ellipsoid = EllipsoidRep{As, center};
    double sc = std::sqrt(As.trace());
    impl->origin_interior = center.dot(llt.solve(center)) < 1.0;
    impl->symmetric = approx_zero_vec(center, sc);
    impl->scale = sc + center.norm();
    return ConvexBody(impl);
}

ConvexBody ConvexBody::polytope(const Mat& points) {
    return polytope(convex_hull(points));
}

ConvexBody ConvexBody::polytope(Polytope P) {
    if (P.verts() < P.dim() + 1)
        throw std::invalid_argument("polytope: too few vertices");
    auto impl = std::make_shared<Impl>();
    impl->kind = RepKind::polytope;
    impl->dim = P.dim();
    double sc = 0.0;
    for (Eigen::Index i = 0; i < P.V.rows(); ++i)
        sc = std::max(sc, P.V.row(i).norm());
    impl->scale = sc;

    bool interior = true;
    if (P.dim() == 2) {
        int m = P.verts();
        for (int i = 0; i < m && interior; ++i) {
            double a[2] = {P.V(i, 0), P.V(i, 1)};
            int j = (i + 1) % m;
            double b[2] = {P.V(j, 0), P.V(j, 1)};
            double o[2] = {0.0, 0.0};
            if (orient2d(a, b, o) <= 0) interior = false;
        }
    } else if (P.dim() == 3) {
        for (size_t f = 0; f < P.facets.size() && interior; ++f) {
            Vec v0 = P.V.row(P.facets[f][0]).transpose();
            if (P.normals.row(f).dot(v0) <= 1e-12 * sc) interior = false;
        }
    } else {
        interior = false;  // 1D: settled below
        if (P.dim() == 1)
            interior = P.V.minCoeff() < 0.0 && P.V.maxCoeff() > 0.0;
    }
    impl->origin_interior = interior;

    auto rows = sorted_rows(P.V);
    auto neg = sorted_rows(-P.V);
    bool sym = rows.size() == neg.size() && sc > 0.0;
    for (size_t i = 0; sym && i < rows.size(); ++i)
        sym = (rows[i] - neg[i]).norm() <= 1e-12 * sc;
    impl->symmetric = sym;

    impl->poly = std::move(P);
    return ConvexBody(impl);
}

namespace {

// Rejects grid data that is not the restriction of any support function: a
// value sitting strictly above the positive combination of its neighbours
// cannot come from a convex body.
void validate_support_data(const DirectionSet& D, const Vec& vals) {
    if (vals.size() != D.size())
        throw std::invalid_argument("support_sampled: value count mismatch");
    for (Eigen::Index i = 0; i < vals.size(); ++i)
        if (!std::isfinite(vals[i]))
            throw std::invalid_argument("support_sampled: non-finite value");
    double scale = vals.cwiseAbs().maxCoeff();
    double tol = 1e-9 * scale + 1e-12;

    if (D.dim() == 2) {
        int m = D.size();
        for (int i = 0; i < m; ++i) {
            Vec up = D.dir((i + m - 1) % m);
            Vec un = D.dir((i + 1) % m);
            Vec ui = D.dir(i);
            double det = up[0] * un[1] - up[1] * un[0];
            if (std::abs(det) < 1e-12) continue;
            double a = (ui[0] * un[1] - ui[1] * un[0]) / det;
            double b = (up[0] * ui[1] - up[1] * ui[0]) / det;
            if (a <= 0.0 || b <= 0.0) continue;
            double bound = a * vals[(i + m - 1) % m] + b * vals[(i + 1) % m];
            if (vals[i] > bound + tol)
                throw std::invalid_argument(
                    "support_sampled: data not convex near grid direction " +
                    std::to_string(i));
        }
        return;
    }
    if (D.dim() != 3) return;  // higher dimensions: finiteness check only

    for (int w = 0; w < D.size(); ++w) {
        // One-ring of w, chained into a cycle.
        std::map<int, int> ring;
        for (int t : D.vertex_triangles(w)) {
            auto tri = D.triangle(t);
            int a = -1, b = -1;
            for (int k = 0; k < 3; ++k)
                if (tri[k] == w) {
                    a = tri[(k + 1) % 3];
                    b = tri[(k + 2) % 3];
                }
            if (a >= 0) ring[a] = b;
        }
        if (ring.size() < 3) continue;
        std::vector<int> cyc;
        int start = ring.begin()->first, cur = start;
        do {
            cyc.push_back(cur);
            auto it = ring.find(cur);
            if (it == ring.end()) break;
            cur = it->second;
        } while (cur != start && cyc.size() <= ring.size());
        if (cyc.size() != ring.size()) continue;

        Vec uw = D.dir(w);
        for (size_t j = 1; j + 1 < cyc.size(); ++j) {
            Eigen::Matrix3d M;
            M.col(0) = D.dir(cyc[0]);
            M.col(1) = D.dir(cyc[j]);
            M.col(2) = D.dir(cyc[j + 1]);
            Eigen::FullPivLU<Eigen::Matrix3d> lu(M);
            if (!lu.isInvertible()) continue;
            Eigen::Vector3d lam = lu.solve(uw);
            if (lam.minCoeff() < -1e-9) continue;
            double bound = lam[0] * vals[cyc[0]] + lam[1] * vals[cyc[j]] +
                           lam[2] * vals[cyc[j + 1]];
            if (vals[w] > bound + tol)
                throw std::invalid_argument(
                    "support_sampled: data not convex near grid direction " +
                    std::to_string(w));
            break;
        }
    }
}

}  // namespace

ConvexBody ConvexBody::support_sampled(
    std::shared_ptr<const DirectionSet> grid, Vec values, bool validate) {
    if (!grid) throw std::invalid_argument("support_sampled: null grid");
    if (values.size() != grid->size())
        throw std::invalid_argument("support_sampled: value count mismatch");
    if (validate) validate_support_data(*grid, values);
    auto impl = std::make_shared<Impl>();
    impl->kind = RepKind::support_sampled;
    impl->dim = grid->dim();
    impl->scale = values.cwiseAbs().maxCoeff();
    impl->origin_interior = values.minCoeff() > 0.0;
    bool sym = true;
    for (int i = 0; i < grid->size() && sym; ++i)
        sym = std::abs(values[i] - values[grid->antipode(i)]) <=
              1e-12 * impl->scale;
    impl->symmetric = sym;
    double sp = grid->mean_spacing();
    impl->interp_err = 0.25 * sp * sp;
    impl->sampled = SupportSampledRep{std::move(grid), std::move(values)};
    return ConvexBody(impl);
}

ConvexBody ConvexBody::reuleaux(double width) {
    if (!(width > 0.0) || !std::isfinite(width))
        throw std::invalid_argument("reuleaux: width must be positive");
    auto impl = std::make_shared<Impl>();
    impl->kind = RepKind::reuleaux;
    impl->dim = 2;
    ReuleauxRep rr;
    rr.width = width;
    double s = width / std::sqrt(3.0);
    for (int k = 0; k < 3; ++k) {
        double phi = std::numbers::pi / 2.0 + 2.0 * std::numbers::pi * k / 3.0;
        rr.verts(k, 0) = s * std::cos(phi);
        rr.verts(k, 1) = s * std::sin(phi);
    }
    impl->reuleaux = rr;
    impl->origin_interior = true;
    impl->symmetric = false;
    impl->scale = width;
    return ConvexBody(impl);
}

ConvexBody ConvexBody::affine_image(const Mat& T, const Vec& shift,
                                    const ConvexBody& base) {
    if (T.cols() != base.dim())
        throw std::invalid_argument("affine_image: matrix width != body dim");
    if (shift.size() != T.rows())
        throw std::invalid_argument("affine_image: shift dimension mismatch");
    const int m = static_cast<int>(T.rows());
    if (m < 1) throw std::invalid_argument("affine_image: empty matrix");

    // Identity / pure scaling / pure translation reduce to cheaper forms.
    if (m == base.dim()) {
        double s = T.trace() / m;
        if (s > 0.0 && (T - s * Mat::Identity(m, m)).norm() <= 1e-15 * s * m) {
            ConvexBody scaled_base = (s == 1.0) ? base : base.scaled(s);
            if (approx_zero_vec(shift, s * base.scale_hint() + 1.0))
                return scaled_base;
            return scaled_base.translated(shift);
        }
    }

    switch (base.kind()) {
        case RepKind::ball: {
            const BallRep& b = base.as_ball();
            Mat M = (b.r * b.r) * (T * T.transpose());
            Vec c = T * b.center + shift;
            double lam = M.trace() / m;
            if (lam > 0.0 &&
                (M - lam * Mat::Identity(m, m)).norm() <= 1e-12 * lam * m)
                return ConvexBody::ball(std::sqrt(lam), c);
            try {
                return ConvexBody::ellipsoid(M, c);
            } catch (const std::invalid_argument&) {
                break;  // rank-deficient map: keep the lazy form
            }
        }
        case RepKind::ellipsoid: {
            const EllipsoidRep& e = base.as_ellipsoid();
            Mat M = T * e.A * T.transpose();
            Vec c = T * e.center + shift;
            double lam = M.trace() / m;
            if (lam > 0.0 &&
                (M - lam * Mat::Identity(m, m)).norm() <= 1e-12 * lam * m)
                return ConvexBody::ball(std::sqrt(lam), c);
            try {
                return ConvexBody::ellipsoid(M, c);
            } catch (const std::invalid_argument&) {
                break;
            }
        }
        case RepKind::polytope: {
            const Polytope& P = base.as_polytope();
            Mat W = P.V * T.transpose();
            W.rowwise() += shift.transpose();
            return ConvexBody::polytope(W);
        }
        case RepKind::affine_image: {
            const AffineImageRep& a = base.as_affine_image();
            return affine_image(T * a.T, T * a.shift + shift, a.base);
        }
        default:
            break;
    }

    auto impl = std::make_shared<Impl>();
    impl->kind = RepKind::affine_image;
    impl->dim = m;
    impl->affine = AffineImageRep{T, shift, base};
    impl->scale = T.norm() * base.scale_hint() + shift.norm();
    impl->interp_err = base.interp_error_scale();
    ConvexBody body(impl);

    bool zero_shift = approx_zero_vec(shift, impl->scale + 1.0);
    if (zero_shift && base.contains_origin_interior()) {
        Eigen::JacobiSVD<Mat> svd(T);
        double smin = svd.singularValues().minCoeff();
        impl->symmetric = base.origin_symmetric();
        if (smin > 1e-12 * svd.singularValues().maxCoeff()) {
            impl->origin_interior = true;
            return body;
        }
    } else {
        impl->symmetric = base.origin_symmetric() && zero_shift;
    }
    impl->origin_interior = min_support_probe(body) > 0.0;
    return body;
}

// ---------------------------------------------------------------------------
// scaling / translation

ConvexBody ConvexBody::scaled(double s) const {
    if (!(s > 0.0) || !std::isfinite(s))
        throw std::invalid_argument("scaled: factor must be positive");
    if (s == 1.0) return *this;
    const Impl& im = *impl_;
    switch (im.kind) {
        case RepKind::ball:
            return ball(im.ball->r * s, im.ball->center * s);
        case RepKind::ellipsoid:
            return ellipsoid(im.ellipsoid->A * (s * s),
                             im.ellipsoid->center * s);
        case RepKind::polytope: {
            Polytope P = *im.poly;
            P.V *= s;
            return polytope(std::move(P));
        }
        case RepKind::support_sampled:
            return support_sampled(im.sampled->grid, im.sampled->values * s,
                                   false);
        case RepKind::reuleaux:
            return reuleaux(im.reuleaux->width * s);
        case RepKind::lp_combination:
            return lp_combine(im.lp->p, im.lp->a, im.lp->K.scaled(s), im.lp->b,
                              im.lp->L.scaled(s));
        case RepKind::affine_image:
            return affine_image(im.affine->T * s, im.affine->shift * s,
                                im.affine->base);
    }
    throw std::logic_error("scaled: unknown representation");
}

ConvexBody ConvexBody::translated(const Vec& x) const {
    if (x.size() != impl_->dim)
        throw std::invalid_argument("translated: dimension mismatch");
    if (x.norm() == 0.0) return *this;
    const Impl& im = *impl_;
    switch (im.kind) {
        case RepKind::ball:
            return ball(im.ball->r, im.ball->center + x);
        case RepKind::ellipsoid:
            return ellipsoid(im.ellipsoid->A, im.ellipsoid->center + x);
        case RepKind::polytope: {
            Polytope P = *im.poly;
            P.V.rowwise() += x.transpose();
            return polytope(std::move(P));
        }
        case RepKind::support_sampled: {
            Vec vals = im.sampled->values + im.sampled->grid->dirs() * x;
            return support_sampled(im.sampled->grid, std::move(vals), false);
        }
        case RepKind::lp_combination:
            if (im.lp->p == 1.0)
                return lp_combine(1.0, im.lp->a,
                                  im.lp->K.translated(x / im.lp->a), im.lp->b,
                                  im.lp->L);
            break;
        case RepKind::affine_image:
            return affine_image(im.affine->T, im.affine->shift + x,
                                im.affine->base);
        default:
            break;
    }
    return affine_image(Mat::Identity(im.dim, im.dim), x, *this);
}

// ---------------------------------------------------------------------------
// L_p combination

namespace {

// Exact Minkowski sum of two polytopes: hull of pairwise vertex sums.
std::optional<Polytope> minkowski_sum(const Polytope& P, const Polytope& Q,
                                      double a, double b) {
    long pairs = static_cast<long>(P.verts()) * Q.verts();
    long cap = P.dim() == 2 ? 100000 : 20000;
    if (pairs > cap) return std::nullopt;
    Mat S(pairs, P.dim());
    long r = 0;
    for (int i = 0; i < P.verts(); ++i)
        for (int j = 0; j < Q.verts(); ++j)
            S.row(r++) = a * P.V.row(i) + b * Q.V.row(j);
    return convex_hull(S);
}

}  // namespace

ConvexBody lp_combine(double p, double a, const ConvexBody& K, double b,
                      const ConvexBody& L) {
    if (!(p >= 1.0))
        throw std::invalid_argument("lp_combine: p must satisfy p >= 1");
    if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument(
            "lp_combine: weights must be nonnegative and finite");
    if (a == 0.0 && b == 0.0)
        throw std::invalid_argument("lp_combine: both weights are zero");
    if (K.dim() != L.dim())
        throw std::invalid_argument("lp_combine: dimension mismatch");

    auto weight_scale = [p](double w) {
        return std::isinf(p) ? 1.0 : std::pow(w, 1.0 / p);
    };
    if (a == 0.0) return L.scaled(weight_scale(b));
    if (b == 0.0) return K.scaled(weight_scale(a));

    if (p > 1.0 &&
        !(K.contains_origin_interior() && L.contains_origin_interior()))
        throw std::invalid_argument(
            "lp_combine: p > 1 requires the origin interior to both bodies");

    if (auto lam = exact_dilate_ratio(K, L)) {
        double s;
        if (std::isinf(p))
            s = std::max(1.0, *lam);
        else if (p == 1.0)
            s = a + b * *lam;
        else
            s = std::pow(a + b * std::pow(*lam, p), 1.0 / p);
        return K.scaled(s);
    }

    if (p == 1.0) {
        if (K.kind() == RepKind::ball && L.kind() == RepKind::ball) {
            const BallRep& bk = K.as_ball();
            const BallRep& bl = L.as_ball();
            return ConvexBody::ball(a * bk.r + b * bl.r,
                                    a * bk.center + b * bl.center);
        }
        if (K.kind() == RepKind::polytope && L.kind() == RepKind::polytope) {
            auto S = minkowski_sum(K.as_polytope(), L.as_polytope(), a, b);
            if (S) return ConvexBody::polytope(std::move(*S));
        }
    }

    auto impl = BodyAccess::make();
    impl->kind = RepKind::lp_combination;
    impl->dim = K.dim();
    impl->lp = LpCombinationRep{p, a, b, K, L};
    double sk = K.scale_hint(), sl = L.scale_hint();
    if (std::isinf(p))
        impl->scale = std::max(sk, sl);
    else if (p == 1.0)
        impl->scale = a * sk + b * sl;
    else
        impl->scale =
            std::pow(a * std::pow(sk, p) + b * std::pow(sl, p), 1.0 / p);
    impl->interp_err =
        std::max(K.interp_error_scale(), L.interp_error_scale());
    impl->symmetric = K.origin_symmetric() && L.origin_symmetric();
    ConvexBody body = BodyAccess::wrap(impl);
    // p > 1 already guarantees an interior origin; p = 1 may need a probe.
    if (K.contains_origin_interior() && L.contains_origin_interior())
        impl->origin_interior = true;
    else
        impl->origin_interior = min_support_probe(body) > 0.0;
    return body;
}

// ---------------------------------------------------------------------------
// dilate detection

std::optional<double> exact_dilate_ratio(const ConvexBody& K,
                                         const ConvexBody& L) {
    if (K.same_rep(L)) return 1.0;
    if (K.kind() != L.kind() || K.dim() != L.dim()) return std::nullopt;
    switch (K.kind()) {
        case RepKind::ball: {
            const BallRep& x = K.as_ball();
            const BallRep& y = L.as_ball();
            double lam = y.r / x.r;
            if ((y.center - lam * x.center).norm() <=
                1e-12 * (y.center.norm() + lam * x.center.norm() + y.r))
                return lam;
            return std::nullopt;
        }
        case RepKind::ellipsoid: {
            const EllipsoidRep& x = K.as_ellipsoid();
            const EllipsoidRep& y = L.as_ellipsoid();
            double lam2 = y.A.trace() / x.A.trace();
            if (lam2 <= 0.0) return std::nullopt;
            if ((y.A - lam2 * x.A).norm() > 1e-12 * y.A.norm())
                return std::nullopt;
            double lam = std::sqrt(lam2);
            double sc = y.center.norm() + lam * x.center.norm() +
                        std::sqrt(y.A.trace());
            if ((y.center - lam * x.center).norm() <= 1e-12 * sc) return lam;
            return std::nullopt;
        }
        case RepKind::polytope: {
            const Polytope& P = K.as_polytope();
            const Polytope& Q = L.as_polytope();
            if (P.verts() != Q.verts()) return std::nullopt;
            int i0 = 0;
            double best = -1.0;
            for (int i = 0; i < P.verts(); ++i) {
                double nn = P.V.row(i).norm();
                if (nn > best) {
                    best = nn;
                    i0 = i;
                }
            }
            if (best <= 0.0) return std::nullopt;
            double lam = Q.V.row(i0).norm() / best;
            if (lam <= 0.0) return std::nullopt;
            double sc = std::max(1e-300, lam * best);
            if ((Q.V - lam * P.V).cwiseAbs().maxCoeff() <= 1e-12 * sc)
                return lam;
            return std::nullopt;
        }
        case RepKind::support_sampled: {
            const SupportSampledRep& x = K.as_support_sampled();
            const SupportSampledRep& y = L.as_support_sampled();
            if (x.grid != y.grid) return std::nullopt;
            Eigen::Index i0;
            x.values.cwiseAbs().maxCoeff(&i0);
            if (x.values[i0] == 0.0) return std::nullopt;
            double lam = y.values[i0] / x.values[i0];
            if (lam <= 0.0) return std::nullopt;
            double sc = y.values.cwiseAbs().maxCoeff();
            if ((y.values - lam * x.values).cwiseAbs().maxCoeff() <=
                1e-12 * std::max(sc, 1e-300))
                return lam;
            return std::nullopt;
        }
        case RepKind::reuleaux:
            return L.as_reuleaux().width / K.as_reuleaux().width;
        case RepKind::lp_combination: {
            const LpCombinationRep& x = K.as_lp_combination();
            const LpCombinationRep& y = L.as_lp_combination();
            if (x.p != y.p || std::abs(x.a - y.a) > 1e-15 * (x.a + y.a) ||
                std::abs(x.b - y.b) > 1e-15 * (x.b + y.b))
                return std::nullopt;
            auto lk = exact_dilate_ratio(x.K, y.K);
            auto ll = exact_dilate_ratio(x.L, y.L);
            if (lk && ll && std::abs(*lk - *ll) <= 1e-12 * *lk) return lk;
            return std::nullopt;
        }
        case RepKind::affine_image: {
            const AffineImageRep& x = K.as_affine_image();
            const AffineImageRep& y = L.as_affine_image();
            if (!x.base.same_rep(y.base)) return std::nullopt;
            double nx = x.T.norm();
            if (nx == 0.0) return std::nullopt;
            double lam = y.T.norm() / nx;
            if (lam <= 0.0) return std::nullopt;
            if ((y.T - lam * x.T).norm() > 1e-12 * y.T.norm())
                return std::nullopt;
            double sc = y.shift.norm() + lam * x.shift.norm() + y.T.norm();
            if ((y.shift - lam * x.shift).norm() <= 1e-12 * sc) return lam;
            return std::nullopt;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// metric helpers

double width(const ConvexBody& K, const Vec& u) {
    return K.support(u) + K.support(-u);
}

double hausdorff_distance(const ConvexBody& K, const ConvexBody& L,
                          const DirectionSet& dirs) {
    if (K.dim() != dirs.dim() || L.dim() != dirs.dim())
        throw std::invalid_argument("hausdorff_distance: dimension mismatch");
    double d = 0.0;
    for (int i = 0; i < dirs.size(); ++i) {
        Vec u = dirs.dir(i);
        d = std::max(d, std::abs(K.support(u) - L.support(u)));
    }
    return d;
}

DilateTest is_dilate_pair(const ConvexBody& K, const ConvexBody& L,
                          const DirectionSet& dirs, const Tolerances& tol) {
    if (auto lam = exact_dilate_ratio(K, L)) return {true, 1.0 / *lam, 0.0};
    if (!K.contains_origin_interior() || !L.contains_origin_interior())
        throw std::invalid_argument(
            "is_dilate_pair: both bodies need the origin in their interior");
    int m = dirs.size();
    std::vector<double> ratio(m);
    for (int i = 0; i < m; ++i) {
        Vec u = dirs.dir(i);
        double hl = L.support(u);
        if (hl <= 0.0)
            throw std::invalid_argument("is_dilate_pair: nonpositive support");
        ratio[i] = K.support(u) / hl;
    }
    std::vector<double> sorted = ratio;
    std::nth_element(sorted.begin(), sorted.begin() + m / 2, sorted.end());
    double lam = sorted[m / 2];
    double spread = 0.0;
    for (double r : ratio) spread = std::max(spread, std::abs(r - lam) / lam);
    double eff = std::max(tol.dilate_tol, 10.0 * (K.interp_error_scale() +
                                                  L.interp_error_scale()));
    return {spread <= eff, lam, spread};
}

HomothetyTest is_homothetic_pair(const ConvexBody& K, const ConvexBody& L,
                                 const DirectionSet& dirs,
                                 const Tolerances& tol) {
    int n = dirs.dim(), m = dirs.size();
    Mat M = Mat::Zero(n + 1, n + 1);
    Vec rhs = Vec::Zero(n + 1);
    double hk2 = 0.0;
    std::vector<double> hks(m), hls(m);
    for (int i = 0; i < m; ++i) {
        Vec u = dirs.dir(i);
        double w = dirs.weights()[i];
        double hk = K.support(u), hl = L.support(u);
        hks[i] = hk;
        hls[i] = hl;
        Vec phi(n + 1);
        phi[0] = hl;
        phi.tail(n) = u;
        M += w * phi * phi.transpose();
        rhs += w * hk * phi;
        hk2 += w * hk * hk;
    }
    Vec beta = M.ldlt().solve(rhs);
    double res2 = 0.0;
    for (int i = 0; i < m; ++i) {
        Vec u = dirs.dir(i);
        double pred = beta[0] * hls[i] + u.dot(beta.tail(n));
        res2 += dirs.weights()[i] * (hks[i] - pred) * (hks[i] - pred);
    }
    HomothetyTest out;
    out.lambda = beta[0];
    out.shift = beta.tail(n);
    out.residual = hk2 > 0.0 ? std::sqrt(res2 / hk2) : std::sqrt(res2);
    double eff = std::max(tol.dilate_tol, 10.0 * (K.interp_error_scale() +
                                                  L.interp_error_scale()));
    out.is_homothetic = out.lambda > 0.0 && out.residual <= eff;
    return out;
}

// ---------------------------------------------------------------------------
// circumscribed polytopes

Polytope polytope_from_support(const ConvexBody& K, const DirectionSet& dirs) {
    if (K.dim() != dirs.dim())
        throw std::invalid_argument(
            "polytope_from_support: dimension mismatch");
    int m = dirs.size();
    if (dirs.dim() == 2) {
        Vec h(m);
        for (int i = 0; i < m; ++i) {
            h[i] = K.support(dirs.dir(i));
            if (h[i] <= 0.0)
                throw std::invalid_argument(
                    "polytope_from_support: body must contain the origin "
                    "in its interior for the dual construction");
        }
        return circumscribed_polygon(dirs.dirs(), h);
    }
    if (dirs.dim() != 3)
        throw std::invalid_argument(
            "polytope_from_support: only 2D and 3D grids supported");

    Mat Q(m, 3);
    for (int i = 0; i < m; ++i) {
        Vec u = dirs.dir(i);
        double h = K.support(u);
        if (h <= 0.0)
            throw std::invalid_argument(
                "polytope_from_support: body must contain the origin "
                "in its interior for the 3D dual construction");
        Q.row(i) = dirs.dirs().row(i) / h;
    }
    Polytope dual = convex_hull(Q);
    size_t nf = dual.facets.size();
    Mat W(nf, 3);
    double sc = 0.0;
    for (size_t f = 0; f < nf; ++f) {
        Vec n = dual.normals.row(f).transpose();
        double d = n.dot(dual.V.row(dual.facets[f][0]).transpose());
        if (d <= 0.0)
            throw std::logic_error(
                "polytope_from_support: dual hull does not enclose origin");
        W.row(f) = (n / d).transpose();
        sc = std::max(sc, W.row(f).norm());
    }
    // Merge near-identical dual vertices (facets that survived the coplanar
    // merge with normals differing only by rounding).
    std::vector<int> order(nf);
    for (size_t i = 0; i < nf; ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        for (int k = 0; k < 3; ++k)
            if (W(a, k) != W(b, k)) return W(a, k) < W(b, k);
        return false;
    });
    std::vector<int> keep;
    for (int idx : order) {
        if (!keep.empty() &&
            (W.row(idx) - W.row(keep.back())).norm() <= 1e-9 * sc)
            continue;
        keep.push_back(idx);
    }
    Mat V(keep.size(), 3);
    for (size_t i = 0; i < keep.size(); ++i) V.row(i) = W.row(keep[i]);
    return convex_hull(V);
}

ConvexBody materialize(const ConvexBody& K, const DirectionSet& dirs) {
    if (K.kind() == RepKind::polytope) return K;
    return ConvexBody::polytope(polytope_from_support(K, dirs));
}

}  // namespace lpbm
