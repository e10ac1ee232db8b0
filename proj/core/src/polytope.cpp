#include "lpbm/polytope.hpp"

#include "lpbm/predicates.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace lpbm {
namespace {

bool lex_less(const Vec& a, const Vec& b) {
    for (int k = 0; k < a.size(); ++k) {
        if (a[k] < b[k]) return true;
        if (a[k] > b[k]) return false;
    }
    return false;
}

Mat dedupe_rows(const Mat& pts) {
    std::vector<int> order(pts.rows());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        return lex_less(pts.row(i).transpose(), pts.row(j).transpose());
    });
    std::vector<int> keep;
    for (int i : order)
        if (keep.empty() || (pts.row(i) - pts.row(keep.back())).norm() != 0.0)
            keep.push_back(i);
    Mat out(keep.size(), pts.cols());
    for (std::size_t i = 0; i < keep.size(); ++i) out.row(i) = pts.row(keep[i]);
    return out;
}

Polytope hull_1d(const Mat& pts) {
    double lo = pts.col(0).minCoeff(), hi = pts.col(0).maxCoeff();
    Polytope P;
    P.V.resize(2, 1);
    P.V(0, 0) = lo;
    P.V(1, 0) = hi;
    return P;
}

Polytope hull_2d(const Mat& pts_in) {
    Mat pts = dedupe_rows(pts_in); // also lex-sorts
    const int n = static_cast<int>(pts.rows());
    if (n < 3) throw std::invalid_argument("convex_hull: degenerate 2D input");

    auto turn = [&](int i, int j, int k) {
        double a[2] = {pts(i, 0), pts(i, 1)};
        double b[2] = {pts(j, 0), pts(j, 1)};
        double c[2] = {pts(k, 0), pts(k, 1)};
        return orient2d(a, b, c);
    };

    // monotone chain; strict left turns only, so collinear points drop out
    std::vector<int> lower, upper;
    for (int i = 0; i < n; ++i) {
        while (lower.size() >= 2 &&
               turn(lower[lower.size() - 2], lower.back(), i) <= 0)
            lower.pop_back();
        lower.push_back(i);
    }
    for (int i = n - 1; i >= 0; --i) {
        while (upper.size() >= 2 &&
               turn(upper[upper.size() - 2], upper.back(), i) <= 0)
            upper.pop_back();
        upper.push_back(i);
    }
    lower.pop_back();
    upper.pop_back();
    std::vector<int> cycle = lower;
    cycle.insert(cycle.end(), upper.begin(), upper.end());
    if (cycle.size() < 3)
        throw std::invalid_argument("convex_hull: collinear 2D input");

    Polytope P;
    P.V.resize(cycle.size(), 2);
    for (std::size_t i = 0; i < cycle.size(); ++i) P.V.row(i) = pts.row(cycle[i]);
    return P; // starts at lexicographic min by construction
}

// ---------------------------------------------------------------------------
// 3D incremental hull. Faces are triangles with per-edge neighbor links;
// insertion finds the strictly-visible set, expands it across exactly-coplanar
// neighbors (which keeps horizon edges never collinear with the new point),
// and rebuilds the cone. Coplanar triangles are merged into polygon facets at
// extraction time.

struct HullFace {
    int v[3];
    int nbr[3]; // nbr[e] is the face across edge (v[e], v[(e+1)%3])
    bool alive = true;
};

class Hull3D {
public:
    // row-major copy so p(i) hands contiguous coordinate triples to the
    // exact predicates
    using RowMat = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;

    explicit Hull3D(const Mat& pts) : pts_(pts) {}

    void build() {
        const int n = static_cast<int>(pts_.rows());
        init_simplex();
        for (int i = 0; i < n; ++i) {
            if (used_[i]) continue;
            insert(i);
        }
    }

    const RowMat& pts() const { return pts_; }
    const std::vector<HullFace>& faces() const { return faces_; }

private:
    const double* p(int i) const { return pts_.row(i).data(); }

    int orient(int a, int b, int c, int d) const {
        return orient3d(p(a), p(b), p(c), p(d));
    }

    bool collinear3(int a, int b, int c) const {
        double ab[2], bb[2], cb[2];
        for (int drop = 0; drop < 3; ++drop) {
            int x = (drop + 1) % 3, y = (drop + 2) % 3;
            ab[0] = pts_(a, x); ab[1] = pts_(a, y);
            bb[0] = pts_(b, x); bb[1] = pts_(b, y);
            cb[0] = pts_(c, x); cb[1] = pts_(c, y);
            if (orient2d(ab, bb, cb) != 0) return false;
        }
        return true;
    }

    void init_simplex() {
        const int n = static_cast<int>(pts_.rows());
        used_.assign(n, false);
        if (n < 4) throw std::invalid_argument("convex_hull: <4 points in 3D");

        int a = 0;
        for (int i = 1; i < n; ++i)
            if (lex_less(pts_.row(i).transpose(), pts_.row(a).transpose())) a = i;
        int b = -1;
        double best = -1.0;
        for (int i = 0; i < n; ++i) {
            double d = (pts_.row(i) - pts_.row(a)).norm();
            if (d > best) { best = d; b = i; }
        }
        if (b < 0 || best == 0.0)
            throw std::invalid_argument("convex_hull: degenerate 3D input");
        int c = -1;
        best = -1.0;
        for (int i = 0; i < n; ++i) {
            if (i == a || i == b || collinear3(a, b, i)) continue;
            Eigen::Vector3d cr = (pts_.row(b) - pts_.row(a))
                                     .head<3>()
                                     .cross((pts_.row(i) - pts_.row(a)).head<3>());
            double d = cr.norm();
            if (d > best) { best = d; c = i; }
        }
        if (c < 0)
            throw std::invalid_argument("convex_hull: collinear 3D input");
        int d = -1;
        for (int i = 0; i < n; ++i) {
            if (i == a || i == b || i == c) continue;
            if (orient(a, b, c, i) != 0) { d = i; break; }
        }
        if (d < 0)
            throw std::invalid_argument("convex_hull: coplanar 3D input");
        if (orient(a, b, c, d) < 0) std::swap(b, c);

        // outward faces of the positively-oriented tetra (a,b,c,d)
        add_face(a, c, b);
        add_face(a, b, d);
        add_face(b, c, d);
        add_face(a, d, c);
        link_all();
        used_[a] = used_[b] = used_[c] = used_[d] = true;
    }

    int add_face(int x, int y, int z) {
        HullFace f;
        f.v[0] = x; f.v[1] = y; f.v[2] = z;
        f.nbr[0] = f.nbr[1] = f.nbr[2] = -1;
        faces_.push_back(f);
        return static_cast<int>(faces_.size()) - 1;
    }

    // O(F) re-link used only for the 4-face seed
    void link_all() {
        std::map<std::pair<int, int>, std::pair<int, int>> half;
        for (std::size_t t = 0; t < faces_.size(); ++t)
            for (int e = 0; e < 3; ++e)
                half[{faces_[t].v[e], faces_[t].v[(e + 1) % 3]}] = {int(t), e};
        for (auto& [edge, fe] : half) {
            auto rev = half.find({edge.second, edge.first});
            if (rev == half.end())
                throw std::runtime_error("convex_hull: open seed mesh");
            faces_[fe.first].nbr[fe.second] = rev->second.first;
        }
    }

    void insert(int pi) {
        used_[pi] = true;
        // strictly visible faces
        std::vector<int> vis;
        std::vector<char> in_set(faces_.size(), 0);
        for (std::size_t t = 0; t < faces_.size(); ++t) {
            if (!faces_[t].alive) continue;
            if (orient(faces_[t].v[0], faces_[t].v[1], faces_[t].v[2], pi) > 0) {
                vis.push_back(static_cast<int>(t));
                in_set[t] = 1;
            }
        }
        if (vis.empty()) return; // on or inside the current hull

        // pull in exactly-coplanar neighbors so no horizon edge can be
        // collinear with pi (a coplanar sliver face would otherwise be
        // invisible forever and freeze the hull)
        for (std::size_t q = 0; q < vis.size(); ++q) {
            const HullFace& f = faces_[vis[q]];
            for (int e = 0; e < 3; ++e) {
                int t = f.nbr[e];
                if (t < 0 || in_set[t] || !faces_[t].alive) continue;
                if (orient(faces_[t].v[0], faces_[t].v[1], faces_[t].v[2],
                           pi) == 0) {
                    in_set[t] = 1;
                    vis.push_back(t);
                }
            }
        }

        // horizon: edges of in-set faces whose neighbor stays
        struct HEdge { int u, v, outside, out_edge; };
        std::vector<HEdge> horizon;
        for (int t : vis)
            for (int e = 0; e < 3; ++e) {
                int nb = faces_[t].nbr[e];
                if (nb >= 0 && !in_set[nb]) {
                    int u = faces_[t].v[e], v = faces_[t].v[(e + 1) % 3];
                    int oe = -1;
                    for (int k = 0; k < 3; ++k)
                        if (faces_[nb].v[k] == v &&
                            faces_[nb].v[(k + 1) % 3] == u)
                            oe = k;
                    if (oe < 0)
                        throw std::runtime_error("convex_hull: broken mesh link");
                    horizon.push_back({u, v, nb, oe});
                }
            }
        if (horizon.empty())
            throw std::runtime_error("convex_hull: empty horizon");

        std::map<int, int> next_from; // tail vertex -> horizon index
        for (std::size_t h = 0; h < horizon.size(); ++h) {
            if (!next_from.emplace(horizon[h].u, static_cast<int>(h)).second)
                throw std::runtime_error("convex_hull: pinched horizon");
        }

        for (int t : vis) faces_[t].alive = false;

        // cone of new faces (u, v, pi), chained around the horizon cycle(s)
        std::vector<int> newf(horizon.size());
        for (std::size_t h = 0; h < horizon.size(); ++h)
            newf[h] = add_face(horizon[h].u, horizon[h].v, pi);
        for (std::size_t h = 0; h < horizon.size(); ++h) {
            const HEdge& he = horizon[h];
            int f = newf[h];
            faces_[f].nbr[0] = he.outside;
            faces_[he.outside].nbr[he.out_edge] = f;
            auto nx = next_from.find(he.v);
            if (nx == next_from.end())
                throw std::runtime_error("convex_hull: broken horizon chain");
            faces_[f].nbr[1] = newf[nx->second];     // edge (v, pi)
            faces_[newf[nx->second]].nbr[2] = f;     // their edge (pi, u')
        }
    }

    RowMat pts_;
    std::vector<HullFace> faces_;
    std::vector<bool> used_;
};

Polytope extract_3d(const Hull3D& hull) {
    const auto& faces = hull.faces();
    const Mat& pts = hull.pts();

    // alive-face normals for coplanarity grouping
    std::vector<int> alive;
    for (std::size_t t = 0; t < faces.size(); ++t)
        if (faces[t].alive) alive.push_back(static_cast<int>(t));
    std::vector<Eigen::Vector3d> nrm(faces.size());
    for (int t : alive) {
        Eigen::Vector3d a = pts.row(faces[t].v[0]);
        Eigen::Vector3d b = pts.row(faces[t].v[1]);
        Eigen::Vector3d c = pts.row(faces[t].v[2]);
        nrm[t] = (b - a).cross(c - a).normalized();
    }

    // merge adjacent triangles whose normals agree to 1e-10
    std::vector<int> group(faces.size(), -1);
    std::vector<std::vector<int>> groups;
    for (int t : alive) {
        if (group[t] >= 0) continue;
        int g = static_cast<int>(groups.size());
        groups.push_back({});
        std::vector<int> stack = {t};
        group[t] = g;
        while (!stack.empty()) {
            int s = stack.back();
            stack.pop_back();
            groups[g].push_back(s);
            for (int e = 0; e < 3; ++e) {
                int nb = faces[s].nbr[e];
                if (nb < 0 || !faces[nb].alive || group[nb] >= 0) continue;
                if ((nrm[s] - nrm[nb]).norm() <= 1e-10) {
                    group[nb] = g;
                    stack.push_back(nb);
                }
            }
        }
    }

    // boundary cycle of each group
    std::vector<std::vector<int>> facet_cycles;
    std::vector<Eigen::Vector3d> facet_normals;
    for (auto& g : groups) {
        std::map<int, int> nxt; // boundary edge tail -> head
        Eigen::Vector3d soft = Eigen::Vector3d::Zero();
        for (int t : g) {
            Eigen::Vector3d a = pts.row(faces[t].v[0]);
            Eigen::Vector3d b = pts.row(faces[t].v[1]);
            Eigen::Vector3d c = pts.row(faces[t].v[2]);
            soft += (b - a).cross(c - a); // area-weighted normal
            for (int e = 0; e < 3; ++e) {
                int nb = faces[t].nbr[e];
                bool inside = nb >= 0 && faces[nb].alive && group[nb] == group[t];
                if (!inside)
                    nxt[faces[t].v[e]] = faces[t].v[(e + 1) % 3];
            }
        }
        if (nxt.empty()) throw std::runtime_error("convex_hull: closed facet group");
        int start = nxt.begin()->first;
        std::vector<int> cycle;
        int cur = start;
        do {
            cycle.push_back(cur);
            auto it = nxt.find(cur);
            if (it == nxt.end())
                throw std::runtime_error("convex_hull: open facet boundary");
            cur = it->second;
        } while (cur != start && cycle.size() <= nxt.size());
        if (cur != start)
            throw std::runtime_error("convex_hull: facet boundary not a cycle");
        facet_cycles.push_back(std::move(cycle));
        facet_normals.push_back(soft.normalized());
    }

    // vertex set referenced by facets, lexicographically ordered
    std::vector<int> vused;
    for (auto& c : facet_cycles) vused.insert(vused.end(), c.begin(), c.end());
    std::sort(vused.begin(), vused.end());
    vused.erase(std::unique(vused.begin(), vused.end()), vused.end());
    std::vector<int> order = vused;
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        return lex_less(pts.row(i).transpose(), pts.row(j).transpose());
    });
    std::vector<int> remap(pts.rows(), -1);
    for (std::size_t i = 0; i < order.size(); ++i) remap[order[i]] = int(i);

    Polytope P;
    P.V.resize(order.size(), 3);
    for (std::size_t i = 0; i < order.size(); ++i) P.V.row(i) = pts.row(order[i]);
    P.facets.resize(facet_cycles.size());
    P.normals.resize(facet_cycles.size(), 3);
    for (std::size_t f = 0; f < facet_cycles.size(); ++f) {
        auto& cyc = facet_cycles[f];
        std::vector<int> mapped(cyc.size());
        for (std::size_t k = 0; k < cyc.size(); ++k) mapped[k] = remap[cyc[k]];
        // canonical rotation: start at the smallest vertex index
        auto mn = std::min_element(mapped.begin(), mapped.end());
        std::rotate(mapped.begin(), mn, mapped.end());
        P.facets[f] = std::move(mapped);
        P.normals.row(f) = facet_normals[f].transpose();
    }
    // deterministic facet order
    std::vector<int> forder(P.facets.size());
    std::iota(forder.begin(), forder.end(), 0);
    std::sort(forder.begin(), forder.end(), [&](int i, int j) {
        return P.facets[i] < P.facets[j];
    });
    std::vector<std::vector<int>> fs(P.facets.size());
    Mat ns(P.normals.rows(), 3);
    for (std::size_t i = 0; i < forder.size(); ++i) {
        fs[i] = std::move(P.facets[forder[i]]);
        ns.row(i) = P.normals.row(forder[i]);
    }
    P.facets = std::move(fs);
    P.normals = std::move(ns);
    return P;
}

} // namespace

Polytope convex_hull(const Mat& points) {
    if (points.rows() == 0)
        throw std::invalid_argument("convex_hull: no points");
    switch (points.cols()) {
        case 1:
            return hull_1d(points);
        case 2:
            return hull_2d(points);
        case 3: {
            Mat pts = dedupe_rows(points);
            Hull3D h(pts);
            h.build();
            return extract_3d(h);
        }
        default:
            throw std::invalid_argument("convex_hull: dim must be 1, 2 or 3");
    }
}

bool hull_contains_all(const Polytope& P, const Mat& points) {
    if (P.dim() != 3) {
        // 2D: every point left of / on every directed edge
        for (int i = 0; i < points.rows(); ++i)
            for (int e = 0; e < P.verts(); ++e) {
                double a[2] = {P.V(e, 0), P.V(e, 1)};
                int f = (e + 1) % P.verts();
                double b[2] = {P.V(f, 0), P.V(f, 1)};
                double c[2] = {points(i, 0), points(i, 1)};
                if (orient2d(a, b, c) < 0) return false;
            }
        return true;
    }
    for (int i = 0; i < points.rows(); ++i)
        for (std::size_t f = 0; f < P.facets.size(); ++f) {
            const auto& cyc = P.facets[f];
            // triangle fan of the facet, any triangle defines the plane
            double a[3] = {P.V(cyc[0], 0), P.V(cyc[0], 1), P.V(cyc[0], 2)};
            double b[3] = {P.V(cyc[1], 0), P.V(cyc[1], 1), P.V(cyc[1], 2)};
            double c[3] = {P.V(cyc[2], 0), P.V(cyc[2], 1), P.V(cyc[2], 2)};
            double x[3] = {points(i, 0), points(i, 1), points(i, 2)};
            if (orient3d(a, b, c, x) > 0) return false;
        }
    return true;
}

namespace {

double area_2d(const Mat& V) {
    double s = 0.0;
    const int n = static_cast<int>(V.rows());
    for (int i = 0; i < n; ++i) {
        int j = (i + 1) % n;
        s += V(i, 0) * V(j, 1) - V(j, 0) * V(i, 1);
    }
    return 0.5 * s;
}

} // namespace

double polytope_volume(const Polytope& P) {
    switch (P.dim()) {
        case 1:
            return P.V(1, 0) - P.V(0, 0);
        case 2:
            return area_2d(P.V);
        case 3: {
            double six_v = 0.0;
            for (const auto& cyc : P.facets)
                for (std::size_t k = 1; k + 1 < cyc.size(); ++k) {
                    Eigen::Vector3d a = P.V.row(cyc[0]);
                    Eigen::Vector3d b = P.V.row(cyc[k]);
                    Eigen::Vector3d c = P.V.row(cyc[k + 1]);
                    six_v += a.dot(b.cross(c));
                }
            return six_v / 6.0;
        }
        default:
            throw std::invalid_argument("polytope_volume: bad dim");
    }
}

double polytope_surface(const Polytope& P) {
    if (P.dim() != 3)
        throw std::invalid_argument("polytope_surface: 3D only");
    double s = 0.0;
    for (const auto& cyc : P.facets)
        for (std::size_t k = 1; k + 1 < cyc.size(); ++k) {
            Eigen::Vector3d a = P.V.row(cyc[0]);
            Eigen::Vector3d b = P.V.row(cyc[k]);
            Eigen::Vector3d c = P.V.row(cyc[k + 1]);
            s += 0.5 * (b - a).cross(c - a).norm();
        }
    return s;
}

double polytope_perimeter(const Polytope& P) {
    if (P.dim() != 2)
        throw std::invalid_argument("polytope_perimeter: 2D only");
    double s = 0.0;
    const int n = P.verts();
    for (int i = 0; i < n; ++i)
        s += (P.V.row((i + 1) % n) - P.V.row(i)).norm();
    return s;
}

Vec polytope_centroid(const Polytope& P) {
    switch (P.dim()) {
        case 1: {
            Vec c(1);
            c[0] = 0.5 * (P.V(0, 0) + P.V(1, 0));
            return c;
        }
        case 2: {
            double A = area_2d(P.V);
            Vec c = Vec::Zero(2);
            const int n = P.verts();
            for (int i = 0; i < n; ++i) {
                int j = (i + 1) % n;
                double cr = P.V(i, 0) * P.V(j, 1) - P.V(j, 0) * P.V(i, 1);
                c += cr * (P.V.row(i) + P.V.row(j)).transpose();
            }
            return c / (6.0 * A);
        }
        case 3: {
            double vol = 0.0;
            Vec m1 = Vec::Zero(3);
            for (const auto& cyc : P.facets)
                for (std::size_t k = 1; k + 1 < cyc.size(); ++k) {
                    Eigen::Vector3d a = P.V.row(cyc[0]);
                    Eigen::Vector3d b = P.V.row(cyc[k]);
                    Eigen::Vector3d c = P.V.row(cyc[k + 1]);
                    double v = a.dot(b.cross(c)) / 6.0;
                    vol += v;
                    m1 += v * (a + b + c) / 4.0; // tetra (0,a,b,c) centroid
                }
            return m1 / vol;
        }
        default:
            throw std::invalid_argument("polytope_centroid: bad dim");
    }
}

Mat polytope_covariance(const Polytope& P) {
    const int n = P.dim();
    // signed simplex decomposition against the origin; per-simplex
    // int_S x x^T = V_S / ((n+1)(n+2)) * (sum_i v_i v_i^T + s s^T), s = sum v_i
    double vol = 0.0;
    Mat m2 = Mat::Zero(n, n);
    Vec m1 = Vec::Zero(n);
    const double denom = (n + 1.0) * (n + 2.0);

    auto accum = [&](const std::vector<Vec>& verts, double v_signed) {
        vol += v_signed;
        Vec s = Vec::Zero(n);
        Mat q = Mat::Zero(n, n);
        Vec c = Vec::Zero(n);
        for (const Vec& w : verts) {
            s += w;
            q += w * w.transpose();
            c += w;
        }
        m1 += v_signed * c / (n + 1.0);
        m2 += v_signed / denom * (q + s * s.transpose());
    };

    switch (n) {
        case 1: {
            double a = P.V(0, 0), b = P.V(1, 0);
            double len = b - a;
            Mat cov(1, 1);
            cov(0, 0) = len * len * len / 12.0;
            return cov;
        }
        case 2: {
            const int m = P.verts();
            for (int i = 0; i < m; ++i) {
                int j = (i + 1) % m;
                Vec a = P.V.row(i).transpose(), b = P.V.row(j).transpose();
                double v = 0.5 * (a[0] * b[1] - b[0] * a[1]);
                accum({a, b}, v); // triangle (0, a, b); origin contributes 0
            }
            break;
        }
        case 3: {
            for (const auto& cyc : P.facets)
                for (std::size_t k = 1; k + 1 < cyc.size(); ++k) {
                    Vec a = P.V.row(cyc[0]).transpose();
                    Vec b = P.V.row(cyc[k]).transpose();
                    Vec c = P.V.row(cyc[k + 1]).transpose();
                    double v = Eigen::Vector3d(a).dot(
                                   Eigen::Vector3d(b).cross(Eigen::Vector3d(c))) /
                               6.0;
                    accum({a, b, c}, v);
                }
            break;
        }
        default:
            throw std::invalid_argument("polytope_covariance: bad dim");
    }
    Vec c = m1 / vol;
    return m2 - vol * c * c.transpose();
}

double polytope_mean_curvature_integral(const Polytope& P) {
    if (P.dim() != 3)
        throw std::invalid_argument("mean curvature integral needs dim 3");
    // Each edge appears in exactly two facet cycles; pair them up and add
    // length * angle-between-outward-normals / 2.
    std::map<std::pair<int, int>, std::pair<int, int>> edge_faces;
    for (int f = 0; f < static_cast<int>(P.facets.size()); ++f) {
        const auto& cyc = P.facets[f];
        const int m = static_cast<int>(cyc.size());
        for (int i = 0; i < m; ++i) {
            int a = cyc[i], b = cyc[(i + 1) % m];
            auto key = std::minmax(a, b);
            auto it = edge_faces.find(key);
            if (it == edge_faces.end())
                edge_faces.emplace(key, std::make_pair(f, -1));
            else if (it->second.second == -1)
                it->second.second = f;
            else
                throw std::runtime_error("edge shared by three facets");
        }
    }
    double total = 0.0;
    for (const auto& [key, faces] : edge_faces) {
        if (faces.second == -1)
            throw std::runtime_error("boundary edge in closed polytope");
        double len = (P.V.row(key.first) - P.V.row(key.second)).norm();
        double c = P.normals.row(faces.first).dot(P.normals.row(faces.second));
        total += len * std::acos(std::clamp(c, -1.0, 1.0)) / 2.0;
    }
    return total;
}

Polytope circumscribed_polygon(const Mat& dirs, const Vec& h) {
    const int m = static_cast<int>(dirs.rows());
    if (dirs.cols() != 2 || m < 3)
        throw std::invalid_argument(
            "circumscribed_polygon: need at least 3 directions in the plane");
    if ((h.array() <= 0.0).any())
        throw std::invalid_argument(
            "circumscribed_polygon: support values must be positive");
    Mat Q(m, 2);
    for (int i = 0; i < m; ++i) Q.row(i) = dirs.row(i) / h[i];
    Polytope dual = convex_hull(Q);
    const int nv = dual.verts();
    // Consecutive dual-hull vertices a = u_a/h_a, b = u_b/h_b give the primal
    // vertex where the two surviving lines x.a = 1 and x.b = 1 meet.
    Mat pts(nv, 2);
    for (int i = 0; i < nv; ++i) {
        Vec a = dual.V.row(i).transpose();
        Vec b = dual.V.row((i + 1) % nv).transpose();
        double det = a[0] * b[1] - a[1] * b[0];
        if (det <= 0.0)
            throw std::runtime_error(
                "circumscribed_polygon: directions do not surround the origin");
        pts(i, 0) = (b[1] - a[1]) / det;
        pts(i, 1) = (a[0] - b[0]) / det;
    }
    return convex_hull(pts);
}

} // namespace lpbm
