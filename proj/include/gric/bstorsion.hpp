#pragma once

// Truncated relation matrix for the symmetric-square coinvariants of the
// dualizing module of BS(1,m), and an exact integer Smith normal form to
// certify torsion-freeness at a given truncation depth. The ambient ring
// at the truncation is the group ring of Z[1/m]/mZ: basis a_x indexed by
// fractions x = j / m^N in [0, m), with a_x a_y = a_{(x+y) mod m}.

#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "gric/base.hpp"

namespace gric {

struct IndexSet {
  long long m = 0;
  int depth = 0;
  // index j stands for the fraction j / m^depth, 0 <= j < m^(depth+1)
  Int denom = 1;  // m^depth
  Int size = 0;   // m^(depth+1)

  std::pair<Int, Int> fraction(const Int& j) const {
    Int g = boost::multiprecision::gcd(j, denom);
    if (j == 0) return {0, 1};
    return {j / g, denom / g};
  }
};

inline IndexSet truncated_generators(long long m, int depth) {
  if (m < 2) throw Error(ErrorKind::input, "need m >= 2");
  if (depth < 1) throw Error(ErrorKind::input, "need depth >= 1");
  IndexSet s;
  s.m = m;
  s.depth = depth;
  s.denom = 1;
  for (int i = 0; i < depth; ++i) s.denom *= m;
  s.size = s.denom * m;
  return s;
}

using IntRow = std::vector<Int>;

struct IntMatrix {
  size_t rows = 0, cols = 0;
  std::vector<IntRow> data;

  IntMatrix() = default;
  IntMatrix(size_t r, size_t c) : rows(r), cols(c), data(r, IntRow(c, 0)) {}
  static IntMatrix identity(size_t n) {
    IntMatrix m(n, n);
    for (size_t i = 0; i < n; ++i) m.data[i][i] = 1;
    return m;
  }
  Int& at(size_t i, size_t j) { return data[i][j]; }
  const Int& at(size_t i, size_t j) const { return data[i][j]; }

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows == b.rows && a.cols == b.cols && a.data == b.data;
  }
};

inline IntMatrix int_mat_mul(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols != b.rows)
    throw Error(ErrorKind::shape_mismatch, "integer matrix product mismatch");
  IntMatrix r(a.rows, b.cols);
  for (size_t i = 0; i < a.rows; ++i)
    for (size_t k = 0; k < a.cols; ++k) {
      if (a.data[i][k] == 0) continue;
      for (size_t j = 0; j < b.cols; ++j)
        r.data[i][j] += a.data[i][k] * b.data[k][j];
    }
  return r;
}

// exact determinant by fraction-free (Bareiss) elimination
inline Int int_mat_det(const IntMatrix& a) {
  if (a.rows != a.cols)
    throw Error(ErrorKind::shape_mismatch, "determinant of non-square matrix");
  size_t n = a.rows;
  if (n == 0) return 1;
  std::vector<IntRow> m = a.data;
  Int prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      size_t p = k + 1;
      while (p < n && m[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(m[k], m[p]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j)
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign > 0 ? m[n - 1][n - 1] : Int(-m[n - 1][n - 1]);
}

// Relation matrix of the truncated quotient: one row a_z - a_{(m-z) mod m}
// per unordered symmetry pair {z, m-z} with z != (m-z) mod m, and one row
// a_z - m sum_{k<m} a_{(k + z/m) mod m} per z with z/m still inside the
// truncation (i.e. m | j).
struct RelationMatrix {
  IndexSet basis;
  IntMatrix matrix;
  size_t symmetry_rows = 0;
  size_t doubling_rows = 0;
};

inline RelationMatrix relation_matrix(long long m, int depth) {
  IndexSet s = truncated_generators(m, depth);
  const long long size = s.size.convert_to<long long>();
  std::vector<IntRow> rows;
  size_t sym = 0, dbl = 0;
  for (long long j = 0; j < size; ++j) {
    long long jr = (size - j) % size;  // index of (m - z) mod m
    if (j < jr) {
      IntRow row(size, 0);
      row[j] += 1;
      row[jr] -= 1;
      rows.push_back(std::move(row));
      ++sym;
    }
  }
  for (long long j = 0; j < size; ++j) {
    if (j % m != 0) continue;  // z/m must stay inside the truncation
    IntRow row(size, 0);
    row[j] += 1;
    long long base = j / m;  // index of z/m
    long long step = size / m;  // index shift of a^1
    for (long long k = 0; k < m; ++k)
      row[(base + k * step) % size] -= m;
    rows.push_back(std::move(row));
    ++dbl;
  }
  IntMatrix mat(rows.size(), size);
  mat.data = std::move(rows);
  return RelationMatrix{s, std::move(mat), sym, dbl};
}

// Smith normal form with optional unimodular transforms: U A V = D with
// d_1 | d_2 | ... and all d_i >= 0. Pivots are chosen by least absolute
// value to limit intermediate growth.
struct SmithResult {
  std::vector<Int> divisors;  // length min(rows, cols)
  bool with_transforms = false;
  IntMatrix u, v;  // U (rows x rows), V (cols x cols)
};

inline SmithResult smith_normal_form(const IntMatrix& a,
                                     bool want_transforms = false) {
  size_t rows = a.rows, cols = a.cols;
  IntMatrix m = a;
  IntMatrix u = IntMatrix::identity(rows);
  IntMatrix v = IntMatrix::identity(cols);

  const auto row_axpy = [&](size_t dst, size_t src, const Int& q) {
    // row_dst -= q * row_src
    for (size_t j = 0; j < cols; ++j) m.data[dst][j] -= q * m.data[src][j];
    for (size_t j = 0; j < rows; ++j) u.data[dst][j] -= q * u.data[src][j];
  };
  const auto col_axpy = [&](size_t dst, size_t src, const Int& q) {
    for (size_t i = 0; i < rows; ++i) m.data[i][dst] -= q * m.data[i][src];
    for (size_t i = 0; i < cols; ++i) v.data[i][dst] -= q * v.data[i][src];
  };
  const auto row_swap = [&](size_t x, size_t y) {
    if (x == y) return;
    std::swap(m.data[x], m.data[y]);
    std::swap(u.data[x], u.data[y]);
  };
  const auto col_swap = [&](size_t x, size_t y) {
    if (x == y) return;
    for (size_t i = 0; i < rows; ++i) std::swap(m.data[i][x], m.data[i][y]);
    for (size_t i = 0; i < cols; ++i) std::swap(v.data[i][x], v.data[i][y]);
  };
  const auto row_negate = [&](size_t x) {
    for (size_t j = 0; j < cols; ++j) m.data[x][j] = -m.data[x][j];
    for (size_t j = 0; j < rows; ++j) u.data[x][j] = -u.data[x][j];
  };

  const size_t steps = std::min(rows, cols);
  for (size_t t = 0; t < steps; ++t) {
    // least nonzero |entry| in the trailing block
    size_t pi = t, pj = t;
    Int best = 0;
    for (size_t i = t; i < rows; ++i)
      for (size_t j = t; j < cols; ++j) {
        if (m.data[i][j] == 0) continue;
        Int mag = abs(m.data[i][j]);
        if (best == 0 || mag < best) {
          best = mag;
          pi = i;
          pj = j;
        }
      }
    if (best == 0) break;
    row_swap(t, pi);
    col_swap(t, pj);

    bool clean = false;
    while (!clean) {
      clean = true;
      for (size_t i = t + 1; i < rows; ++i) {
        if (m.data[i][t] == 0) continue;
        Int q = m.data[i][t] / m.data[t][t];
        if (q != 0) row_axpy(i, t, q);
        if (m.data[i][t] != 0) {  // remainder smaller than the pivot
          row_swap(t, i);
          clean = false;
        }
      }
      for (size_t j = t + 1; j < cols; ++j) {
        if (m.data[t][j] == 0) continue;
        Int q = m.data[t][j] / m.data[t][t];
        if (q != 0) col_axpy(j, t, q);
        if (m.data[t][j] != 0) {
          col_swap(t, j);
          clean = false;
        }
      }
    }
    if (m.data[t][t] < 0) row_negate(t);
  }

  // enforce the divisibility chain
  for (;;) {
    bool fixed = true;
    for (size_t t = 0; t + 1 < steps; ++t) {
      const Int& d1 = m.data[t][t];
      const Int& d2 = m.data[t + 1][t + 1];
      if (d1 == 0 && d2 != 0) {  // zeros sink to the end
        row_swap(t, t + 1);
        col_swap(t, t + 1);
        fixed = false;
        continue;
      }
      if (d1 != 0 && d2 % d1 != 0) {
        // mix the two diagonal positions and re-reduce the 2x2 block:
        // the pair (d1, d2) becomes (gcd, lcm)
        col_axpy(t, t + 1, Int(-1));  // col_t += col_{t+1}
        while (m.data[t + 1][t] != 0) {
          if (abs(m.data[t][t]) < abs(m.data[t + 1][t])) {
            row_swap(t, t + 1);
            continue;
          }
          Int q = m.data[t][t] / m.data[t + 1][t];
          row_axpy(t, t + 1, q);
          row_swap(t, t + 1);
        }
        // clear the (t, t+1) entry reintroduced by the column mix;
        // every entry of that column is a multiple of the new pivot
        if (m.data[t][t + 1] != 0) {
          Int q = m.data[t][t + 1] / m.data[t][t];
          col_axpy(t + 1, t, q);
        }
        if (m.data[t][t] < 0) row_negate(t);
        if (m.data[t + 1][t + 1] < 0) row_negate(t + 1);
        fixed = false;
      }
    }
    if (fixed) break;
  }

  SmithResult res;
  res.divisors.reserve(steps);
  for (size_t t = 0; t < steps; ++t) res.divisors.push_back(m.data[t][t]);
  res.with_transforms = want_transforms;
  if (want_transforms) {
    res.u = std::move(u);
    res.v = std::move(v);
  }
  return res;
}

inline IntMatrix smith_diagonal(const SmithResult& s, size_t rows, size_t cols) {
  IntMatrix d(rows, cols);
  for (size_t t = 0; t < s.divisors.size(); ++t) d.data[t][t] = s.divisors[t];
  return d;
}

struct TorsionReport {
  long long m = 0;
  int depth = 0;
  Int basis_size = 0;
  size_t symmetry_rows = 0;
  size_t doubling_rows = 0;
  std::vector<Int> divisors;
  Int free_rank = 0;
  bool torsion_free = false;
  bool transforms_verified = false;
};

inline TorsionReport torsion_report(long long m, int depth,
                                    bool verify_transforms = true) {
  RelationMatrix rel = relation_matrix(m, depth);
  SmithResult snf = smith_normal_form(rel.matrix, verify_transforms);
  TorsionReport rep;
  rep.m = m;
  rep.depth = depth;
  rep.basis_size = rel.basis.size;
  rep.symmetry_rows = rel.symmetry_rows;
  rep.doubling_rows = rel.doubling_rows;
  rep.divisors = snf.divisors;
  Int nonzero = 0;
  bool tf = true;
  for (const Int& d : snf.divisors) {
    if (d != 0) {
      ++nonzero;
      if (d != 1) tf = false;
    }
  }
  rep.free_rank = Int(rel.matrix.cols) - nonzero;
  rep.torsion_free = tf;
  if (verify_transforms) {
    IntMatrix prod = int_mat_mul(int_mat_mul(snf.u, rel.matrix), snf.v);
    IntMatrix diag = smith_diagonal(snf, rel.matrix.rows, rel.matrix.cols);
    Int du = int_mat_det(snf.u), dv = int_mat_det(snf.v);
    rep.transforms_verified =
        prod == diag && (du == 1 || du == -1) && (dv == 1 || dv == -1);
  }
  return rep;
}

}  // namespace gric
