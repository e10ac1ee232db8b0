#include "lpbm/predicates.hpp"

#include <cmath>
#include <cstddef>

// Floating-point expansion arithmetic in the style of Shewchuk's adaptive
// predicates. An expansion is a sum of doubles, nonoverlapping and ordered by
// increasing magnitude, representing their exact sum; the largest nonzero
// component then dominates the sign. Capacities are sized for the worst case
// of the two predicates below, so no allocation and no overflow checks.

namespace lpbm {
namespace {

struct Expansion {
    // orient3d worst case: 24 triple products of <=4 components each = 96.
    double comp[128];
    int n = 0;

    void clear() { n = 0; }

    // Add a single double, keeping the expansion exact (GROW-EXPANSION).
    void grow(double b) {
        double q = b;
        int out = 0;
        for (int i = 0; i < n; ++i) {
            double e = comp[i];
            double s = q + e;
            double bv = s - q;
            double av = s - bv;
            double err = (q - av) + (e - bv);
            if (err != 0.0) comp[out++] = err;
            q = s;
        }
        comp[out++] = q;
        n = out;
    }

    void add_product(double x, double y, double sign) {
        // two_prod via fma: p + e == x*y exactly.
        double p = x * y;
        double e = std::fma(x, y, -p);
        grow(sign * e);
        grow(sign * p);
    }

    // Add sign * x*y*z exactly (triple product of doubles).
    void add_triple(double x, double y, double z, double sign) {
        double p = x * y;
        double e = std::fma(x, y, -p);
        // scale the 2-expansion (e, p) by z
        double p2 = e * z;
        double e2 = std::fma(e, z, -p2);
        double p3 = p * z;
        double e3 = std::fma(p, z, -p3);
        grow(sign * e2);
        grow(sign * p2);
        grow(sign * e3);
        grow(sign * p3);
    }

    int sign() const {
        for (int i = n - 1; i >= 0; --i) {
            if (comp[i] > 0.0) return 1;
            if (comp[i] < 0.0) return -1;
        }
        return 0;
    }
};

int sgn(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

} // namespace

int orient2d(const double* a, const double* b, const double* c) {
    double detleft = (a[0] - c[0]) * (b[1] - c[1]);
    double detright = (a[1] - c[1]) * (b[0] - c[0]);
    double det = detleft - detright;
    double detsum = std::abs(detleft) + std::abs(detright);
    // 3.33e-16 ~ Shewchuk's first-stage bound for this formula.
    if (std::abs(det) > 3.4e-16 * detsum) return sgn(det);
    if (detsum == 0.0) return 0;

    // Exact: det = ax by - ax cy + bx cy - bx ay + cx ay - cx by.
    Expansion ex;
    ex.add_product(a[0], b[1], +1.0);
    ex.add_product(a[0], c[1], -1.0);
    ex.add_product(b[0], c[1], +1.0);
    ex.add_product(b[0], a[1], -1.0);
    ex.add_product(c[0], a[1], +1.0);
    ex.add_product(c[0], b[1], -1.0);
    return ex.sign();
}

namespace {

// det of rows x,y,z accumulated exactly into ex with an overall sign.
void det3_exact(Expansion& ex, const double* x, const double* y,
                const double* z, double sign) {
    ex.add_triple(x[0], y[1], z[2], sign);
    ex.add_triple(x[0], y[2], z[1], -sign);
    ex.add_triple(x[1], y[0], z[2], -sign);
    ex.add_triple(x[1], y[2], z[0], sign);
    ex.add_triple(x[2], y[0], z[1], sign);
    ex.add_triple(x[2], y[1], z[0], -sign);
}

} // namespace

int orient3d(const double* a, const double* b, const double* c,
             const double* d) {
    double bx = b[0] - a[0], by = b[1] - a[1], bz = b[2] - a[2];
    double cx = c[0] - a[0], cy = c[1] - a[1], cz = c[2] - a[2];
    double dx = d[0] - a[0], dy = d[1] - a[1], dz = d[2] - a[2];

    double m1 = cy * dz - cz * dy;
    double m2 = cx * dz - cz * dx;
    double m3 = cx * dy - cy * dx;
    double det = bx * m1 - by * m2 + bz * m3;

    double perm = std::abs(bx) * (std::abs(cy * dz) + std::abs(cz * dy)) +
                  std::abs(by) * (std::abs(cx * dz) + std::abs(cz * dx)) +
                  std::abs(bz) * (std::abs(cx * dy) + std::abs(cy * dx));
    // Conservative static filter; the exact path is rare and cheap enough.
    if (std::abs(det) > 1e-14 * perm) return sgn(det);
    if (perm == 0.0) return 0;

    // det[b-a; c-a; d-a] = det(b,c,d) - det(a,c,d) + det(a,b,d) - det(a,b,c)
    // over the original coordinates, evaluated exactly.
    Expansion ex;
    det3_exact(ex, b, c, d, +1.0);
    det3_exact(ex, a, c, d, -1.0);
    det3_exact(ex, a, b, d, +1.0);
    det3_exact(ex, a, b, c, -1.0);
    return ex.sign();
}

} // namespace lpbm
