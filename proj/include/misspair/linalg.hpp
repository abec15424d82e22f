#ifndef MISSPAIR_LINALG_HPP
#define MISSPAIR_LINALG_HPP

// Exact-shape dense linear algebra for the 2x2 and 3x3 symmetric matrices
// this library works with. Not a general matrix toolkit on purpose.

#include <array>

namespace misspair {

struct Vec2 {
  double x0 = 0.0;
  double x1 = 0.0;
};

struct Vec3 {
  double x0 = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
};

// Symmetric 2x2 matrix [[a, b], [b, c]].
struct Sym2 {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double trace() const { return a + c; }
  double det() const { return a * c - b * b; }
};

// Symmetric 3x3 matrix, upper triangle stored row by row.
struct Sym3 {
  double a00 = 0.0, a01 = 0.0, a02 = 0.0;
  double a11 = 0.0, a12 = 0.0;
  double a22 = 0.0;

  double operator()(int i, int j) const {
    static constexpr int idx[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
    const double* e = &a00;
    return e[idx[i][j]];
  }
  double trace() const { return a00 + a11 + a22; }
};

// Lower-triangular 2x2 factor [[l00, 0], [l10, l11]].
struct Lower2 {
  double l00 = 0.0;
  double l10 = 0.0;
  double l11 = 0.0;
};

// Column-major eigenvector storage: column i pairs with values[i].
struct EigSym2 {
  Vec2 values;                       // descending
  std::array<double, 4> vectors{};   // [v0x, v0y, v1x, v1y]
};

struct EigSym3 {
  Vec3 values;                       // descending
  std::array<double, 9> vectors{};   // three columns of length 3
};

// Lower Cholesky factor of a 2x2 SPD matrix. A pivot <= 1e-14 * max|S_ij|
// raises NotPositiveDefinite.
Lower2 cholesky_lower(const Sym2& s);

// Symmetric eigendecomposition: closed form for 2x2, cyclic Jacobi for 3x3.
EigSym2 eig_sym(const Sym2& s);
EigSym3 eig_sym(const Sym3& s);

// Moore-Penrose pseudoinverse; eigenvalues below 1e-12 * max|lambda| in
// magnitude are treated as zero.
Sym2 pinv(const Sym2& s);
Sym3 pinv(const Sym3& s);

double quad_form(const Vec2& v, const Sym2& s);
double quad_form(const Vec3& v, const Sym3& s);

}  // namespace misspair

#endif  // MISSPAIR_LINALG_HPP
