#include "lpbm/direction.hpp"

#include "lpbm/constants.hpp"
#include "lpbm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace lpbm {

using std::numbers::pi;

Direction::Direction(Vec u) : u_(std::move(u)) {
    double nrm = u_.norm();
    if (!(nrm > 1e-300))
        throw std::invalid_argument("Direction: zero vector");
    if (std::abs(nrm - 1.0) > 1e-12) u_ /= nrm;
}

namespace {

// Icosahedron: 12 vertices, 20 CCW-from-outside faces. The vertex set is
// closed under x -> -x, which the subdivision inherits.
const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

const double kIcoVerts[12][3] = {
    {-1, kPhi, 0}, {1, kPhi, 0},  {-1, -kPhi, 0}, {1, -kPhi, 0},
    {0, -1, kPhi}, {0, 1, kPhi},  {0, -1, -kPhi}, {0, 1, -kPhi},
    {kPhi, 0, -1}, {kPhi, 0, 1},  {-kPhi, 0, -1}, {-kPhi, 0, 1}};

const int kIcoFaces[20][3] = {
    {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
    {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
    {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
    {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

// Spherical triangle area via Girard: sum of the three corner angles - pi.
double spherical_area(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                      const Eigen::Vector3d& c) {
    auto corner = [](const Eigen::Vector3d& p, const Eigen::Vector3d& q,
                     const Eigen::Vector3d& r) {
        Eigen::Vector3d u = q - q.dot(p) * p;
        Eigen::Vector3d v = r - r.dot(p) * p;
        double cosang = u.dot(v) / (u.norm() * v.norm());
        return std::acos(std::clamp(cosang, -1.0, 1.0));
    };
    return corner(a, b, c) + corner(b, c, a) + corner(c, a, b) - pi;
}

struct BitKey {
    std::uint64_t x, y, z;
    bool operator==(const BitKey& o) const {
        return x == o.x && y == o.y && z == o.z;
    }
};
struct BitKeyHash {
    std::size_t operator()(const BitKey& k) const {
        std::uint64_t h = k.x * 0x9e3779b97f4a7c15ull;
        h ^= k.y + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        h ^= k.z + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};
BitKey key_of(const Eigen::Vector3d& v) {
    BitKey k;
    std::memcpy(&k.x, &v[0], 8);
    std::memcpy(&k.y, &v[1], 8);
    std::memcpy(&k.z, &v[2], 8);
    return k;
}

} // namespace

std::shared_ptr<const DirectionSet> DirectionSet::circle(int m) {
    if (m < 4 || m % 2 != 0)
        throw std::invalid_argument("DirectionSet::circle: need even m >= 4");
    auto ds = std::shared_ptr<DirectionSet>(new DirectionSet());
    ds->dim_ = 2;
    ds->dirs_.resize(m, 2);
    ds->weights_ = Vec::Constant(m, 2.0 * pi / m);
    ds->antipode_.resize(m);
    ds->dtheta_ = 2.0 * pi / m;
    for (int i = 0; i < m; ++i) {
        double th = ds->dtheta_ * i;
        ds->dirs_(i, 0) = std::cos(th);
        ds->dirs_(i, 1) = std::sin(th);
        ds->antipode_[i] = (i + m / 2) % m;
    }
    ds->spacing_ = ds->dtheta_;
    return ds;
}

std::shared_ptr<const DirectionSet> DirectionSet::sphere(int min_vertices) {
    if (min_vertices < 12)
        throw std::invalid_argument("DirectionSet::sphere: need >= 12 vertices");
    int f = 1;
    while (10 * f * f + 2 < min_vertices) ++f;
    if (f % 2 != 0 && f > 1) ++f; // even frequency keeps +-e_i on the grid

    const int nv = 10 * f * f + 2;
    auto ds = std::shared_ptr<DirectionSet>(new DirectionSet());
    ds->dim_ = 3;
    ds->freq_ = f;
    ds->dirs_.resize(nv, 3);

    // Deterministic shared-point indexing: corners, then edge-interior points
    // keyed by the (sorted) edge with the parameter measured from the smaller
    // corner, then face-interior points. No floating-point deduplication.
    std::map<std::pair<int, int>, int> edge_id;
    int n_edges = 0;
    for (auto& fc : kIcoFaces)
        for (int e = 0; e < 3; ++e) {
            int a = fc[e], b = fc[(e + 1) % 3];
            auto key = std::minmax(a, b);
            if (edge_id.emplace(key, n_edges).second) ++n_edges;
        }
    // 30 edges expected for the icosahedron
    const int edge_base = 12;
    const int face_base = edge_base + n_edges * (f - 1);
    const int face_stride = (f - 1) * (f - 2) / 2;

    Eigen::Matrix<double, 12, 3> corners;
    for (int v = 0; v < 12; ++v) {
        Eigen::Vector3d p(kIcoVerts[v][0], kIcoVerts[v][1], kIcoVerts[v][2]);
        corners.row(v) = p.normalized();
        ds->dirs_.row(v) = corners.row(v);
    }

    auto point_index = [&](const int fc[3], int i, int j) -> int {
        int k = f - i - j; // barycentric (i,j,k) on face (A,B,C), i+j+k=f
        int A = fc[0], B = fc[1], C = fc[2];
        // corners
        if (j == 0 && k == 0) return A;
        if (i == 0 && k == 0) return B;
        if (i == 0 && j == 0) return C;
        auto on_edge = [&](int a, int b, int t) {
            // interior point #t (1..f-1) measured from a toward b
            auto key = std::minmax(a, b);
            int param = (a < b) ? t : f - t;
            return edge_base + edge_id.at(key) * (f - 1) + (param - 1);
        };
        if (k == 0) return on_edge(A, B, j);
        if (i == 0) return on_edge(B, C, k);
        if (j == 0) return on_edge(A, C, k);
        return -1; // face interior, resolved by caller
    };

    std::vector<bool> placed(nv, false);
    for (int v = 0; v < 12; ++v) placed[v] = true;
    ds->tris_.clear();
    ds->tris_.reserve(20 * f * f);

    for (int fi = 0; fi < 20; ++fi) {
        const int* fc = kIcoFaces[fi];
        Eigen::Vector3d A(kIcoVerts[fc[0]][0], kIcoVerts[fc[0]][1], kIcoVerts[fc[0]][2]);
        Eigen::Vector3d B(kIcoVerts[fc[1]][0], kIcoVerts[fc[1]][1], kIcoVerts[fc[1]][2]);
        Eigen::Vector3d C(kIcoVerts[fc[2]][0], kIcoVerts[fc[2]][1], kIcoVerts[fc[2]][2]);

        // id grid over the face lattice, row i = coefficient of A
        std::vector<std::vector<int>> id(f + 1);
        int interior_seen = 0;
        for (int i = f; i >= 0; --i) {
            id[i].resize(f - i + 1);
            for (int j = 0; j + i <= f; ++j) {
                int k = f - i - j;
                int idx = point_index(fc, i, j);
                if (idx < 0) {
                    idx = face_base + fi * face_stride + interior_seen;
                    ++interior_seen;
                }
                id[i][j] = idx;
                if (!placed[idx]) {
                    Eigen::Vector3d p = (i * A + j * B + k * C) / f;
                    ds->dirs_.row(idx) = p.normalized();
                    placed[idx] = true;
                }
            }
        }
        // Two triangle orientations per lattice cell, both CCW from outside
        // (same winding as the parent face).
        for (int i = f; i >= 1; --i)
            for (int j = 0; j + i <= f; ++j) {
                ds->tris_.push_back({id[i][j], id[i - 1][j + 1], id[i - 1][j]});
                if (j + 1 <= f - i)
                    ds->tris_.push_back(
                        {id[i][j], id[i][j + 1], id[i - 1][j + 1]});
            }
    }

    // Structural antipode map.  The icosahedron is centrally symmetric with a
    // sign-exact vertex table, so corners, edges, and faces all pair up; the
    // subdivision lattice inherits the pairing index-for-index.
    int av[12];
    for (int i = 0; i < 12; ++i) {
        av[i] = -1;
        for (int j = 0; j < 12; ++j)
            if (kIcoVerts[j][0] == -kIcoVerts[i][0] &&
                kIcoVerts[j][1] == -kIcoVerts[i][1] &&
                kIcoVerts[j][2] == -kIcoVerts[i][2])
                av[i] = j;
        if (av[i] < 0)
            throw std::logic_error("icosahedron vertex table not symmetric");
    }
    int opp_face[20];
    for (int fi = 0; fi < 20; ++fi) {
        std::array<int, 3> want = {av[kIcoFaces[fi][0]], av[kIcoFaces[fi][1]],
                                   av[kIcoFaces[fi][2]]};
        std::sort(want.begin(), want.end());
        opp_face[fi] = -1;
        for (int fj = 0; fj < 20; ++fj) {
            std::array<int, 3> have = {kIcoFaces[fj][0], kIcoFaces[fj][1],
                                       kIcoFaces[fj][2]};
            std::sort(have.begin(), have.end());
            if (have == want) opp_face[fi] = fj;
        }
        if (opp_face[fi] < 0)
            throw std::logic_error("icosahedron face table not symmetric");
    }

    ds->antipode_.assign(nv, -1);
    for (int v = 0; v < 12; ++v) ds->antipode_[v] = av[v];
    for (auto& [key, eid] : edge_id) {
        int m = key.first, M = key.second;
        auto key2 = std::minmax(av[m], av[M]);
        int eid2 = edge_id.at(key2);
        for (int t = 1; t <= f - 1; ++t) {
            int t2 = (av[m] < av[M]) ? t : f - t;
            ds->antipode_[edge_base + eid * (f - 1) + (t - 1)] =
                edge_base + eid2 * (f - 1) + (t2 - 1);
        }
    }
    // interior enumeration order within a face: rows i = f-2 .. 1, then j
    auto seen_at = [f](int i, int j) {
        return (f - i - 2) * (f - i - 1) / 2 + (j - 1);
    };
    for (int fi = 0; fi < 20; ++fi) {
        const int* fc = kIcoFaces[fi];
        int fi2 = opp_face[fi];
        const int* fc2 = kIcoFaces[fi2];
        for (int i = 1; i <= f - 2; ++i)
            for (int j = 1; j <= f - i - 1; ++j) {
                int k = f - i - j;
                int w[3];
                for (int p = 0; p < 3; ++p) {
                    if (fc2[p] == av[fc[0]]) w[p] = i;
                    else if (fc2[p] == av[fc[1]]) w[p] = j;
                    else w[p] = k;
                }
                ds->antipode_[face_base + fi * face_stride + seen_at(i, j)] =
                    face_base + fi2 * face_stride + seen_at(w[0], w[1]);
            }
    }
    for (int v = 0; v < nv; ++v)
        if (ds->antipode_[v] < 0 || ds->antipode_[v] == v ||
            ds->antipode_[ds->antipode_[v]] != v)
            throw std::logic_error("sphere grid antipode map broken");

    // Canonicalize: the higher index of each pair becomes the exact negation
    // of the lower, making the antipodal closure bitwise.
    for (int v = 0; v < nv; ++v) {
        int a2 = ds->antipode_[v];
        if (v < a2) ds->dirs_.row(a2) = -ds->dirs_.row(v);
    }

    // weights: each spherical triangle contributes a third of its area to
    // each corner; total is the full 4*pi
    ds->weights_ = Vec::Zero(nv);
    for (auto& t : ds->tris_) {
        Eigen::Vector3d a = ds->dirs_.row(t[0]);
        Eigen::Vector3d b = ds->dirs_.row(t[1]);
        Eigen::Vector3d c = ds->dirs_.row(t[2]);
        double area = spherical_area(a, b, c) / 3.0;
        ds->weights_[t[0]] += area;
        ds->weights_[t[1]] += area;
        ds->weights_[t[2]] += area;
    }

    // verify the closure really is exact in the bit pattern
    std::unordered_map<BitKey, int, BitKeyHash> pos;
    pos.reserve(nv * 2);
    for (int i = 0; i < nv; ++i) {
        Eigen::Vector3d v = ds->dirs_.row(i);
        pos.emplace(key_of(v), i);
    }
    for (int i = 0; i < nv; ++i) {
        Eigen::Vector3d v = -Eigen::Vector3d(ds->dirs_.row(i));
        auto it = pos.find(key_of(v));
        if (it == pos.end() || it->second != ds->antipode_[i])
            throw std::runtime_error("DirectionSet::sphere: grid not antipodal");
    }

    ds->spacing_ = std::sqrt(4.0 * pi / nv);
    ds->build_sphere_index();
    return ds;
}

std::shared_ptr<const DirectionSet> DirectionSet::random_antipodal(
    int n, int pairs, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("random_antipodal: dim < 2");
    auto ds = std::shared_ptr<DirectionSet>(new DirectionSet());
    ds->dim_ = n;
    ds->dirs_.resize(2 * pairs, n);
    RngStream rng(seed);
    for (int i = 0; i < pairs; ++i) {
        Vec g(n);
        do {
            for (int k = 0; k < n; ++k) g[k] = rng.next_normal();
        } while (g.norm() < 1e-8);
        g.normalize();
        ds->dirs_.row(2 * i) = g.transpose();
        ds->dirs_.row(2 * i + 1) = -g.transpose();
    }
    ds->weights_ =
        Vec::Constant(2 * pairs, unit_sphere_surface(n) / (2.0 * pairs));
    ds->antipode_.resize(2 * pairs);
    for (int i = 0; i < pairs; ++i) {
        ds->antipode_[2 * i] = 2 * i + 1;
        ds->antipode_[2 * i + 1] = 2 * i;
    }
    ds->spacing_ = std::pow(unit_sphere_surface(n) / (2.0 * pairs),
                            1.0 / (n - 1));
    return ds;
}

std::shared_ptr<const DirectionSet> DirectionSet::standard(int n) {
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const DirectionSet>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::shared_ptr<const DirectionSet> ds;
    if (n == 2) ds = circle(720);
    else if (n == 3) ds = sphere(2562);
    else ds = random_antipodal(n);
    cache[n] = ds;
    return ds;
}

std::shared_ptr<const DirectionSet> DirectionSet::refined(int factor) const {
    if (factor < 1) throw std::invalid_argument("refined: factor < 1");
    if (dim_ == 2) return circle(size() * factor);
    if (dim_ == 3) {
        int f = freq_ * factor;
        return sphere(10 * f * f + 2);
    }
    return random_antipodal(dim_, size() * factor / 2);
}

void DirectionSet::build_sphere_index() {
    const int nv = size();
    // prefactored cone solves
    tri_inv_.resize(tris_.size());
    for (std::size_t t = 0; t < tris_.size(); ++t) {
        Eigen::Matrix3d M;
        for (int c = 0; c < 3; ++c) M.col(c) = dirs_.row(tris_[t][c]).transpose();
        tri_inv_[t] = M.inverse();
    }
    // vertex -> incident triangles (CSR)
    std::vector<int> count(nv, 0);
    for (auto& t : tris_)
        for (int c = 0; c < 3; ++c) ++count[t[c]];
    vtris_offset_.assign(nv + 1, 0);
    for (int v = 0; v < nv; ++v) vtris_offset_[v + 1] = vtris_offset_[v] + count[v];
    vtris_.resize(vtris_offset_[nv]);
    std::vector<int> fill(nv, 0);
    for (std::size_t t = 0; t < tris_.size(); ++t)
        for (int c = 0; c < 3; ++c) {
            int v = tris_[t][c];
            vtris_[vtris_offset_[v] + fill[v]++] = static_cast<int>(t);
        }
    // triangle adjacency across shared edges
    std::map<std::pair<int, int>, std::pair<int, int>> edge_tri;
    tri_nbr_.assign(tris_.size(), {-1, -1, -1});
    for (std::size_t t = 0; t < tris_.size(); ++t)
        for (int e = 0; e < 3; ++e) {
            auto key = std::minmax(tris_[t][e], tris_[t][(e + 1) % 3]);
            auto it = edge_tri.find(key);
            if (it == edge_tri.end()) {
                edge_tri[key] = {static_cast<int>(t), e};
            } else {
                tri_nbr_[t][e] = it->second.first;
                tri_nbr_[it->second.first][it->second.second] =
                    static_cast<int>(t);
            }
        }
    // latitude/longitude buckets of vertices
    nz_ = 32;
    nphi_ = 64;
    std::vector<std::vector<int>> buckets(nz_ * nphi_);
    auto bucket_of = [&](double z, double phi) {
        int bz = std::min(nz_ - 1, std::max(0, int((z + 1.0) / 2.0 * nz_)));
        int bp = std::min(nphi_ - 1,
                          std::max(0, int((phi + pi) / (2.0 * pi) * nphi_)));
        return bz * nphi_ + bp;
    };
    for (int v = 0; v < nv; ++v) {
        double z = dirs_(v, 2);
        double phi = std::atan2(dirs_(v, 1), dirs_(v, 0));
        buckets[bucket_of(z, phi)].push_back(v);
    }
    bucket_offset_.assign(nz_ * nphi_ + 1, 0);
    for (int b = 0; b < nz_ * nphi_; ++b)
        bucket_offset_[b + 1] =
            bucket_offset_[b] + static_cast<int>(buckets[b].size());
    bucket_.resize(bucket_offset_.back());
    for (int b = 0; b < nz_ * nphi_; ++b)
        std::copy(buckets[b].begin(), buckets[b].end(),
                  bucket_.begin() + bucket_offset_[b]);
}

DirectionSet::Cone DirectionSet::locate(const Vec& u) const {
    double nrm = u.norm();
    if (!(nrm > 1e-300))
        throw std::invalid_argument("DirectionSet::locate: zero vector");

    if (dim_ == 2) {
        double th = std::atan2(u[1], u[0]);
        if (th < 0) th += 2.0 * pi;
        int m = size();
        int i = std::min(m - 1, static_cast<int>(th / dtheta_));
        int j = (i + 1) % m;
        // conic coordinates from 2x2 cross-product solve
        auto cross = [](double ax, double ay, double bx, double by) {
            return ax * by - ay * bx;
        };
        double den = cross(dirs_(i, 0), dirs_(i, 1), dirs_(j, 0), dirs_(j, 1));
        Cone c;
        c.count = 2;
        c.idx[0] = i;
        c.idx[1] = j;
        c.lambda[0] = cross(u[0], u[1], dirs_(j, 0), dirs_(j, 1)) / den;
        c.lambda[1] = cross(dirs_(i, 0), dirs_(i, 1), u[0], u[1]) / den;
        c.idx[2] = 0;
        c.lambda[2] = 0.0;
        return c;
    }
    if (dim_ != 3)
        throw std::invalid_argument(
            "DirectionSet::locate: interpolation grids are 2D/3D only");

    Eigen::Vector3d v = Eigen::Vector3d(u[0], u[1], u[2]) / nrm;

    // nearest grid vertex from the bucket table, widening until hit
    double z = v[2];
    double phi = std::atan2(v[1], v[0]);
    int bz0 = std::min(nz_ - 1, std::max(0, int((z + 1.0) / 2.0 * nz_)));
    int bp0 = std::min(nphi_ - 1, std::max(0, int((phi + pi) / (2.0 * pi) * nphi_)));
    int best = -1;
    double bestdot = -2.0;
    for (int ring = 0; ring < std::max(nz_, nphi_); ++ring) {
        for (int dz = -ring; dz <= ring; ++dz) {
            int bz = bz0 + dz;
            if (bz < 0 || bz >= nz_) continue;
            for (int dp = -ring; dp <= ring; ++dp) {
                if (std::max(std::abs(dz), std::abs(dp)) != ring) continue;
                int bp = ((bp0 + dp) % nphi_ + nphi_) % nphi_;
                int b = bz * nphi_ + bp;
                for (int k = bucket_offset_[b]; k < bucket_offset_[b + 1]; ++k) {
                    double d = v.dot(dirs_.row(bucket_[k]).transpose());
                    if (d > bestdot) {
                        bestdot = d;
                        best = bucket_[k];
                    }
                }
            }
        }
        if (best >= 0 && ring >= 1) break; // one extra ring covers boundaries
    }

    auto try_tri = [&](int t, Cone& c) {
        Eigen::Vector3d lam = tri_inv_[t] * v;
        double lo = lam.minCoeff();
        if (lo >= -1e-9) {
            c.count = 3;
            for (int k = 0; k < 3; ++k) {
                c.idx[k] = tris_[t][k];
                c.lambda[k] = nrm * std::max(lam[k], 0.0);
            }
            return true;
        }
        return false;
    };

    Cone c;
    // incident triangles of the nearest vertex, then their edge neighbors
    for (int k = vtris_offset_[best]; k < vtris_offset_[best + 1]; ++k)
        if (try_tri(vtris_[k], c)) return c;
    for (int k = vtris_offset_[best]; k < vtris_offset_[best + 1]; ++k)
        for (int e = 0; e < 3; ++e) {
            int t = tri_nbr_[vtris_[k]][e];
            if (t >= 0 && try_tri(t, c)) return c;
        }
    // rare fallback: global scan by most-interior conic coordinates
    int argbest = -1;
    double bestlo = -1e300;
    for (std::size_t t = 0; t < tris_.size(); ++t) {
        Eigen::Vector3d lam = tri_inv_[t] * v;
        double lo = lam.minCoeff();
        if (lo > bestlo) {
            bestlo = lo;
            argbest = static_cast<int>(t);
        }
    }
    Eigen::Vector3d lam = tri_inv_[argbest] * v;
    c.count = 3;
    for (int k = 0; k < 3; ++k) {
        c.idx[k] = tris_[argbest][k];
        c.lambda[k] = nrm * std::max(lam[k], 0.0);
    }
    return c;
}

std::vector<int> DirectionSet::vertex_triangles(int v) const {
    std::vector<int> out;
    if (dim_ != 3 || v < 0 || v + 1 >= static_cast<int>(vtris_offset_.size()))
        return out;
    out.assign(vtris_.begin() + vtris_offset_[v],
               vtris_.begin() + vtris_offset_[v + 1]);
    return out;
}

} // namespace lpbm
