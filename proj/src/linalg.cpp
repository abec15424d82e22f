#include "misspair/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "misspair/errors.hpp"

namespace misspair {

namespace {

constexpr double kPivotTol = 1e-14;
constexpr double kRankTol = 1e-12;

double max_abs(const Sym2& s) {
  return std::max({std::fabs(s.a), std::fabs(s.b), std::fabs(s.c)});
}

double max_abs3(double a, double b, double c) {
  return std::max({std::fabs(a), std::fabs(b), std::fabs(c)});
}

}  // namespace

Lower2 cholesky_lower(const Sym2& s) {
  const double scale = max_abs(s);
  const double tol = kPivotTol * scale;
  if (s.a <= tol) {
    throw NotPositiveDefinite("cholesky_lower: leading pivot not positive");
  }
  Lower2 l;
  l.l00 = std::sqrt(s.a);
  l.l10 = s.b / l.l00;
  const double pivot = s.c - l.l10 * l.l10;
  if (pivot <= tol) {
    throw NotPositiveDefinite("cholesky_lower: trailing pivot not positive");
  }
  l.l11 = std::sqrt(pivot);
  return l;
}

EigSym2 eig_sym(const Sym2& s) {
  EigSym2 out;
  if (s.b == 0.0) {
    if (s.a >= s.c) {
      out.values = {s.a, s.c};
      out.vectors = {1.0, 0.0, 0.0, 1.0};
    } else {
      out.values = {s.c, s.a};
      out.vectors = {0.0, 1.0, 1.0, 0.0};
    }
    return out;
  }
  const double mid = 0.5 * (s.a + s.c);
  const double disc = std::hypot(0.5 * (s.a - s.c), s.b);
  const double l1 = mid + disc;
  const double l2 = mid - disc;
  // Eigenvector for l1: pick the better-conditioned of the two defining rows.
  double vx, vy;
  if (std::fabs(l1 - s.a) >= std::fabs(l1 - s.c)) {
    vx = s.b;
    vy = l1 - s.a;
  } else {
    vx = l1 - s.c;
    vy = s.b;
  }
  const double norm = std::hypot(vx, vy);
  vx /= norm;
  vy /= norm;
  out.values = {l1, l2};
  out.vectors = {vx, vy, -vy, vx};
  return out;
}

EigSym3 eig_sym(const Sym3& s) {
  // Cyclic Jacobi sweeps; off-diagonal threshold 1e-14 relative to scale.
  double a[3][3] = {{s.a00, s.a01, s.a02},
                    {s.a01, s.a11, s.a12},
                    {s.a02, s.a12, s.a22}};
  double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  double scale = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) scale = std::max(scale, std::fabs(a[i][j]));
  const double stop = (scale > 0.0) ? kPivotTol * scale : 0.0;

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = max_abs3(a[0][1], a[0][2], a[1][2]);
    if (off <= stop) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (std::fabs(a[p][q]) <= stop) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        const double app = a[p][p], aqq = a[q][q], apq = a[p][q];
        a[p][p] = app - t * apq;
        a[q][q] = aqq + t * apq;
        a[p][q] = a[q][p] = 0.0;
        const int r = 3 - p - q;  // remaining index
        const double arp = a[r][p], arq = a[r][q];
        a[r][p] = a[p][r] = c * arp - sn * arq;
        a[r][q] = a[q][r] = sn * arp + c * arq;
        for (int i = 0; i < 3; ++i) {
          const double vip = v[i][p], viq = v[i][q];
          v[i][p] = c * vip - sn * viq;
          v[i][q] = sn * vip + c * viq;
        }
      }
    }
  }

  int order[3] = {0, 1, 2};
  std::sort(order, order + 3,
            [&](int i, int j) { return a[i][i] > a[j][j]; });
  EigSym3 out;
  double* vals = &out.values.x0;
  for (int k = 0; k < 3; ++k) {
    vals[k] = a[order[k]][order[k]];
    for (int i = 0; i < 3; ++i) out.vectors[3 * k + i] = v[i][order[k]];
  }
  return out;
}

Sym2 pinv(const Sym2& s) {
  const EigSym2 e = eig_sym(s);
  const double cutoff =
      kRankTol * std::max(std::fabs(e.values.x0), std::fabs(e.values.x1));
  const double d0 = std::fabs(e.values.x0) > cutoff ? 1.0 / e.values.x0 : 0.0;
  const double d1 = std::fabs(e.values.x1) > cutoff ? 1.0 / e.values.x1 : 0.0;
  const double v0x = e.vectors[0], v0y = e.vectors[1];
  const double v1x = e.vectors[2], v1y = e.vectors[3];
  Sym2 out;
  out.a = d0 * v0x * v0x + d1 * v1x * v1x;
  out.b = d0 * v0x * v0y + d1 * v1x * v1y;
  out.c = d0 * v0y * v0y + d1 * v1y * v1y;
  return out;
}

Sym3 pinv(const Sym3& s) {
  const EigSym3 e = eig_sym(s);
  const double* vals = &e.values.x0;
  const double cutoff =
      kRankTol * max_abs3(vals[0], vals[1], vals[2]);
  double inv[3];
  for (int k = 0; k < 3; ++k) {
    inv[k] = std::fabs(vals[k]) > cutoff ? 1.0 / vals[k] : 0.0;
  }
  double m[3][3] = {};
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        m[i][j] += inv[k] * e.vectors[3 * k + i] * e.vectors[3 * k + j];
      }
    }
  }
  Sym3 out;
  out.a00 = m[0][0];
  out.a01 = m[0][1];
  out.a02 = m[0][2];
  out.a11 = m[1][1];
  out.a12 = m[1][2];
  out.a22 = m[2][2];
  return out;
}

double quad_form(const Vec2& v, const Sym2& s) {
  return v.x0 * v.x0 * s.a + 2.0 * v.x0 * v.x1 * s.b + v.x1 * v.x1 * s.c;
}

double quad_form(const Vec3& v, const Sym3& s) {
  return v.x0 * v.x0 * s.a00 + v.x1 * v.x1 * s.a11 + v.x2 * v.x2 * s.a22 +
         2.0 * (v.x0 * v.x1 * s.a01 + v.x0 * v.x2 * s.a02 +
                v.x1 * v.x2 * s.a12);
}

}  // namespace misspair
