#include "fpt/fp.hpp"

#include <sstream>

namespace fpt {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Mismatch: return "mismatch";
    case ErrorKind::Precision: return "precision";
    case ErrorKind::Membership: return "membership";
    case ErrorKind::Window: return "window";
    case ErrorKind::Budget: return "budget";
    case ErrorKind::Stabilization: return "stabilization";
    case ErrorKind::Branch: return "branch";
    case ErrorKind::Inconsistency: return "inconsistency";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Io: return "io";
    case ErrorKind::Invalid: return "invalid";
  }
  return "error";
}

bool is_prime_u32(u32 n) {
  if (n < 2) return false;
  for (u32 q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

void check_modulus(u32 p) {
  if (p < 2 || p >= (1u << 16) || !is_prime_u32(p))
    fail(ErrorKind::Invalid, "modulus must be a prime in [2, 2^16), got " + std::to_string(p));
}

u32 fp_pow(u32 a, u64 e, u32 p) {
  u32 r = 1 % p, b = a % p;
  while (e) {
    if (e & 1) r = fp_mul(r, b, p);
    b = fp_mul(b, b, p);
    e >>= 1;
  }
  return r;
}

u32 fp_inv(u32 a, u32 p) {
  a %= p;
  if (a == 0) fail(ErrorKind::Invalid, "inverse of zero mod " + std::to_string(p));
  return fp_pow(a, p - 2, p);
}

static void check_same_len(const FpVec& a, const FpVec& b) {
  if (a.size() != b.size()) fail(ErrorKind::Mismatch, "vector lengths differ");
}

FpVec vec_add(const FpVec& a, const FpVec& b, u32 p) {
  check_same_len(a, b);
  FpVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = fp_add(a[i], b[i], p);
  return r;
}

FpVec vec_sub(const FpVec& a, const FpVec& b, u32 p) {
  check_same_len(a, b);
  FpVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = fp_sub(a[i], b[i], p);
  return r;
}

FpVec vec_neg(const FpVec& a, u32 p) {
  FpVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = fp_neg(a[i], p);
  return r;
}

FpVec vec_scale(const FpVec& a, u32 c, u32 p) {
  FpVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = fp_mul(a[i], c, p);
  return r;
}

bool vec_is_zero(const FpVec& a) {
  for (u32 x : a)
    if (x) return false;
  return true;
}

const FpScalar& FpScalar::same(const FpScalar& o) const {
  if (p != o.p)
    fail(ErrorKind::Mismatch, "moduli differ: " + std::to_string(p) + " vs " + std::to_string(o.p));
  return o;
}

MatFp::MatFp(u32 p_, int r, int c) : p(p_), rows(r), cols(c) {
  check_modulus(p_);
  if (r < 0 || c < 0) fail(ErrorKind::Mismatch, "negative matrix dimensions");
  a.assign(static_cast<size_t>(r) * static_cast<size_t>(c), 0);
}

MatFp MatFp::identity(u32 p, int n) {
  MatFp m(p, n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

bool MatFp::is_zero() const {
  for (u32 x : a)
    if (x) return false;
  return true;
}

static void check_same_shape(const MatFp& x, const MatFp& y, const char* op) {
  if (x.p != y.p)
    fail(ErrorKind::Mismatch, std::string(op) + ": moduli differ");
  if (x.rows != y.rows || x.cols != y.cols)
    fail(ErrorKind::Mismatch, std::string(op) + ": shapes " + std::to_string(x.rows) + "x" +
                                  std::to_string(x.cols) + " vs " + std::to_string(y.rows) + "x" +
                                  std::to_string(y.cols));
}

MatFp mat_add(const MatFp& x, const MatFp& y) {
  check_same_shape(x, y, "mat_add");
  MatFp r = x;
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = fp_add(r.a[i], y.a[i], r.p);
  return r;
}

MatFp mat_sub(const MatFp& x, const MatFp& y) {
  check_same_shape(x, y, "mat_sub");
  MatFp r = x;
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = fp_sub(r.a[i], y.a[i], r.p);
  return r;
}

MatFp mat_neg(const MatFp& x) {
  MatFp r = x;
  for (u32& v : r.a) v = fp_neg(v, r.p);
  return r;
}

MatFp mat_scale(const MatFp& x, u32 c) {
  MatFp r = x;
  for (u32& v : r.a) v = fp_mul(v, c, r.p);
  return r;
}

MatFp mat_mul(const MatFp& x, const MatFp& y) {
  if (x.p != y.p) fail(ErrorKind::Mismatch, "mat_mul: moduli differ");
  if (x.cols != y.rows)
    fail(ErrorKind::Mismatch, "mat_mul: inner dimensions " + std::to_string(x.cols) + " vs " +
                                  std::to_string(y.rows));
  MatFp r(x.p, x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      u32 xv = x.at(i, k);
      if (!xv) continue;
      for (int j = 0; j < y.cols; ++j)
        r.at(i, j) = static_cast<u32>((r.at(i, j) + u64(xv) * y.at(k, j)) % r.p);
    }
  return r;
}

MatFp mat_pow(const MatFp& x, u64 e) {
  if (x.rows != x.cols) fail(ErrorKind::Mismatch, "mat_pow: matrix not square");
  MatFp r = MatFp::identity(x.p, x.rows), b = x;
  while (e) {
    if (e & 1) r = mat_mul(r, b);
    b = mat_mul(b, b);
    e >>= 1;
  }
  return r;
}

MatFp transpose(const MatFp& x) {
  MatFp r(x.p, x.cols, x.rows);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) r.at(j, i) = x.at(i, j);
  return r;
}

FpVec mat_vec(const MatFp& x, const FpVec& v) {
  if (static_cast<int>(v.size()) != x.cols)
    fail(ErrorKind::Mismatch, "mat_vec: vector length " + std::to_string(v.size()) + " vs cols " +
                                  std::to_string(x.cols));
  FpVec r(x.rows, 0);
  for (int i = 0; i < x.rows; ++i) {
    u64 acc = 0;
    for (int j = 0; j < x.cols; ++j) acc += u64(x.at(i, j)) * v[j];
    r[i] = static_cast<u32>(acc % x.p);
  }
  return r;
}

Echelon echelon_form(const MatFp& m) {
  Echelon e;
  e.rref = m;
  MatFp& r = e.rref;
  int row = 0;
  for (int col = 0; col < r.cols && row < r.rows; ++col) {
    int piv = -1;
    for (int i = row; i < r.rows; ++i)
      if (r.at(i, col)) { piv = i; break; }
    if (piv < 0) continue;
    if (piv != row)
      for (int j = 0; j < r.cols; ++j) std::swap(r.at(piv, j), r.at(row, j));
    u32 inv = fp_inv(r.at(row, col), r.p);
    for (int j = col; j < r.cols; ++j) r.at(row, j) = fp_mul(r.at(row, j), inv, r.p);
    for (int i = 0; i < r.rows; ++i) {
      if (i == row) continue;
      u32 f = r.at(i, col);
      if (!f) continue;
      for (int j = col; j < r.cols; ++j)
        r.at(i, j) = fp_sub(r.at(i, j), fp_mul(f, r.at(row, j), r.p), r.p);
    }
    e.pivots.push_back(col);
    ++row;
  }
  e.rank = row;
  return e;
}

int mat_rank(const MatFp& m) { return echelon_form(m).rank; }

std::vector<FpVec> kernel_basis(const MatFp& m) {
  Echelon e = echelon_form(m);
  std::vector<bool> is_pivot(m.cols, false);
  for (int c : e.pivots) is_pivot[c] = true;
  std::vector<FpVec> basis;
  for (int free = 0; free < m.cols; ++free) {
    if (is_pivot[free]) continue;
    FpVec v(m.cols, 0);
    v[free] = 1;
    for (int r = 0; r < e.rank; ++r) {
      int pc = e.pivots[r];
      v[pc] = fp_neg(e.rref.at(r, free), m.p);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<FpVec> solve_linear(const MatFp& m, const FpVec& b) {
  if (static_cast<int>(b.size()) != m.rows)
    fail(ErrorKind::Mismatch, "solve_linear: rhs length vs rows");
  MatFp aug(m.p, m.rows, m.cols + 1);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, m.cols) = b[i];
  }
  Echelon e = echelon_form(aug);
  FpVec x(m.cols, 0);
  for (int r = 0; r < e.rank; ++r) {
    int pc = e.pivots[r];
    if (pc == m.cols) return std::nullopt;  // pivot in the rhs column
    x[pc] = e.rref.at(r, m.cols);
  }
  return x;
}

MatFp rows_from_vecs(u32 p, int cols, const std::vector<FpVec>& vs) {
  MatFp m(p, static_cast<int>(vs.size()), cols);
  for (size_t i = 0; i < vs.size(); ++i) {
    if (static_cast<int>(vs[i].size()) != cols)
      fail(ErrorKind::Mismatch, "rows_from_vecs: row length mismatch");
    for (int j = 0; j < cols; ++j) m.at(static_cast<int>(i), j) = vs[i][j] % p;
  }
  return m;
}

MatFp stack_rows(const MatFp& top, const MatFp& bottom) {
  if (top.p != bottom.p || top.cols != bottom.cols)
    fail(ErrorKind::Mismatch, "stack_rows: incompatible matrices");
  MatFp r(top.p, top.rows + bottom.rows, top.cols);
  r.a.assign(top.a.begin(), top.a.end());
  r.a.insert(r.a.end(), bottom.a.begin(), bottom.a.end());
  return r;
}

FpVec reduce_against(const MatFp& ech, FpVec v) {
  if (static_cast<int>(v.size()) != ech.cols)
    fail(ErrorKind::Mismatch, "reduce_against: length mismatch");
  for (int r = 0; r < ech.rows; ++r) {
    int pc = -1;
    for (int j = 0; j < ech.cols; ++j)
      if (ech.at(r, j)) { pc = j; break; }
    if (pc < 0) continue;
    u32 f = v[pc];
    if (!f) continue;
    for (int j = pc; j < ech.cols; ++j)
      v[j] = fp_sub(v[j], fp_mul(f, ech.at(r, j), ech.p), ech.p);
  }
  return v;
}

bool in_row_space(const MatFp& ech, const FpVec& v) {
  return vec_is_zero(reduce_against(ech, v));
}

MatFp mat_inverse(const MatFp& m) {
  if (m.rows != m.cols) fail(ErrorKind::Mismatch, "mat_inverse: matrix not square");
  int n = m.rows;
  MatFp aug(m.p, n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n + i) = 1;
  }
  Echelon e = echelon_form(aug);
  if (e.rank < n || e.pivots[n - 1] != n - 1)
    fail(ErrorKind::Inconsistency, "mat_inverse: matrix singular");
  MatFp r(m.p, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r.at(i, j) = e.rref.at(i, n + j);
  return r;
}

bool is_nilpotent(const MatFp& m) {
  if (m.rows != m.cols) fail(ErrorKind::Mismatch, "is_nilpotent: matrix not square");
  return mat_pow(m, static_cast<u64>(m.rows)).is_zero();
}

bool is_unipotent(const MatFp& a) {
  if (a.rows != a.cols) fail(ErrorKind::Mismatch, "is_unipotent: matrix not square");
  return is_nilpotent(mat_sub(a, MatFp::identity(a.p, a.rows)));
}

bool is_strictly_upper(const MatFp& m) {
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j <= i && j < m.cols; ++j)
      if (m.at(i, j)) return false;
  return true;
}

// Extends `have` (rows spanning a subspace, echelon order) by those kernel
// vectors of `sys` that are independent from it; returns the new vectors.
static std::vector<FpVec> new_flag_layer(const MatFp& sys, MatFp& have, int n) {
  std::vector<FpVec> added;
  for (const FpVec& v : kernel_basis(sys)) {
    MatFp trial(have.p, have.rows + 1, n);
    trial.a.assign(have.a.begin(), have.a.end());
    trial.a.insert(trial.a.end(), v.begin(), v.end());
    if (mat_rank(trial) > have.rows) {
      have = trial;
      added.push_back(v);
    }
  }
  return added;
}

MatFp joint_strict_triangularize(const std::vector<MatFp>& mats) {
  if (mats.empty()) fail(ErrorKind::Mismatch, "joint_strict_triangularize: empty family");
  u32 p = mats[0].p;
  int n = mats[0].rows;
  for (size_t i = 0; i < mats.size(); ++i) {
    if (mats[i].p != p) fail(ErrorKind::Mismatch, "joint_strict_triangularize: moduli differ");
    if (mats[i].rows != n || mats[i].cols != n)
      fail(ErrorKind::Mismatch, "joint_strict_triangularize: shapes differ");
    if (!is_nilpotent(mats[i]))
      fail(ErrorKind::Invalid, "joint_strict_triangularize: matrix " + std::to_string(i) + " is not nilpotent");
  }
  for (size_t i = 0; i < mats.size(); ++i)
    for (size_t j = i + 1; j < mats.size(); ++j)
      if (!(mat_mul(mats[i], mats[j]) == mat_mul(mats[j], mats[i])))
        fail(ErrorKind::Invalid, "joint_strict_triangularize: matrices " + std::to_string(i) +
                                     " and " + std::to_string(j) + " do not commute");

  // Iterated common kernel: W_{k+1} = {v : M v in W_k for all M}.
  MatFp have(p, 0, n);
  std::vector<FpVec> flag_cols;
  while (have.rows < n) {
    // Conditions C M v = 0 where rows of C span the annihilator of W_k,
    // i.e. the vectors orthogonal to every row of `have`.
    std::vector<FpVec> ann = kernel_basis(have);
    MatFp cmat(p, static_cast<int>(ann.size()), n);
    for (size_t i = 0; i < ann.size(); ++i)
      for (int j = 0; j < n; ++j) cmat.at(static_cast<int>(i), j) = ann[i][j];
    MatFp sys(p, 0, n);
    for (const MatFp& m : mats) {
      MatFp cm = mat_mul(cmat, m);
      MatFp grown(p, sys.rows + cm.rows, n);
      grown.a.assign(sys.a.begin(), sys.a.end());
      grown.a.insert(grown.a.end(), cm.a.begin(), cm.a.end());
      sys = grown;
    }
    std::vector<FpVec> layer = new_flag_layer(sys, have, n);
    if (layer.empty())
      fail(ErrorKind::Inconsistency, "joint_strict_triangularize: flag did not grow");
    for (FpVec& v : layer) flag_cols.push_back(std::move(v));
  }

  MatFp pmat(p, n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) pmat.at(i, j) = flag_cols[j][i];
  MatFp pinv = mat_inverse(pmat);
  for (size_t i = 0; i < mats.size(); ++i)
    if (!is_strictly_upper(mat_mul(pinv, mat_mul(mats[i], pmat))))
      fail(ErrorKind::Inconsistency, "joint_strict_triangularize: conjugate of matrix " +
                                         std::to_string(i) + " not strictly upper");
  return pmat;
}

std::string mat_to_string(const MatFp& m) {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < m.rows; ++i) {
    if (i) os << "; ";
    for (int j = 0; j < m.cols; ++j) {
      if (j) os << " ";
      os << m.at(i, j);
    }
  }
  os << "] mod " << m.p;
  return os.str();
}

}  // namespace fpt
