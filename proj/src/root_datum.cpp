#include "affkl/root_datum.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <numeric>

namespace affkl {

long long dot(const IntVec& a, const IntVec& b) {
  if (a.size() != b.size()) throw std::logic_error("dot: size mismatch");
  long long s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}
IntVec vec_add(const IntVec& a, const IntVec& b) {
  IntVec r(a);
  for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}
IntVec vec_sub(const IntVec& a, const IntVec& b) {
  IntVec r(a);
  for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}
IntVec vec_neg(const IntVec& a) {
  IntVec r(a);
  for (auto& x : r) x = -x;
  return r;
}
IntVec vec_scale(const IntVec& a, long long c) {
  IntVec r(a);
  for (auto& x : r) x *= c;
  return r;
}
bool vec_is_zero(const IntVec& a) {
  return std::all_of(a.begin(), a.end(), [](long long x) { return x == 0; });
}
IntVec mat_apply(const IntMat& m, const IntVec& v) {
  IntVec r(m.size(), 0);
  for (size_t i = 0; i < m.size(); ++i) r[i] = dot(m[i], v);
  return r;
}
IntMat mat_mul_int(const IntMat& a, const IntMat& b) {
  size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  IntMat r(n, IntVec(m, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t t = 0; t < k; ++t)
      if (a[i][t])
        for (size_t j = 0; j < m; ++j) r[i][j] += a[i][t] * b[t][j];
  return r;
}
IntMat mat_identity_int(size_t n) {
  IntMat r(n, IntVec(n, 0));
  for (size_t i = 0; i < n; ++i) r[i][i] = 1;
  return r;
}
IntMat mat_transpose_int(const IntMat& m) {
  if (m.empty()) return {};
  IntMat r(m[0].size(), IntVec(m.size(), 0));
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < m[i].size(); ++j) r[j][i] = m[i][j];
  return r;
}

IntMat mat_inverse_unimodular(const IntMat& m) {
  size_t n = m.size();
  const IntMat& a = m;
  // adjugate route; lattice ranks here never exceed 3
  auto det2 = [](long long a_, long long b_, long long c_, long long d_) { return a_ * d_ - b_ * c_; };
  long long det = 0;
  if (n == 1) det = a[0][0];
  else if (n == 2) det = det2(a[0][0], a[0][1], a[1][0], a[1][1]);
  else if (n == 3) {
    det = a[0][0] * det2(a[1][1], a[1][2], a[2][1], a[2][2]) -
          a[0][1] * det2(a[1][0], a[1][2], a[2][0], a[2][2]) +
          a[0][2] * det2(a[1][0], a[1][1], a[2][0], a[2][1]);
  } else {
    throw std::logic_error("mat_inverse_unimodular: rank > 3 unsupported");
  }
  if (det != 1 && det != -1) throw std::logic_error("mat_inverse_unimodular: det not a unit");
  IntMat adj(n, IntVec(n, 0));
  if (n == 1) adj[0][0] = 1;
  else if (n == 2) {
    adj = {{a[1][1], -a[0][1]}, {-a[1][0], a[0][0]}};
  } else {
    for (size_t i = 0; i < 3; ++i)
      for (size_t j = 0; j < 3; ++j) {
        long long sub[2][2];
        size_t ri = 0;
        for (size_t x = 0; x < 3; ++x) {
          if (x == j) continue;
          size_t ci = 0;
          for (size_t y = 0; y < 3; ++y) {
            if (y == i) continue;
            sub[ri][ci++] = a[x][y];
          }
          ++ri;
        }
        long long c = det2(sub[0][0], sub[0][1], sub[1][0], sub[1][1]);
        adj[i][j] = ((i + j) % 2 == 0 ? c : -c);
      }
  }
  for (auto& row : adj)
    for (auto& x : row) x *= det;  // det = +-1
  return adj;
}

Smith smith_normal_form(IntMat a) {
  size_t rows = a.size(), cols = a.empty() ? 0 : a[0].size();
  Smith s;
  s.u = mat_identity_int(rows);
  s.v = mat_identity_int(cols);
  auto swap_rows = [&](size_t i, size_t j) { std::swap(a[i], a[j]); std::swap(s.u[i], s.u[j]); };
  auto swap_cols = [&](size_t i, size_t j) {
    for (auto& row : a) std::swap(row[i], row[j]);
    for (auto& row : s.v) std::swap(row[i], row[j]);
  };
  auto addmul_row = [&](size_t dst, size_t src, long long c) {
    for (size_t k = 0; k < cols; ++k) a[dst][k] += c * a[src][k];
    for (size_t k = 0; k < rows; ++k) s.u[dst][k] += c * s.u[src][k];
  };
  auto addmul_col = [&](size_t dst, size_t src, long long c) {
    for (size_t k = 0; k < rows; ++k) a[k][dst] += c * a[k][src];
    for (size_t k = 0; k < cols; ++k) s.v[k][dst] += c * s.v[k][src];
  };
  auto neg_row = [&](size_t i) {
    for (auto& x : a[i]) x = -x;
    for (auto& x : s.u[i]) x = -x;
  };

  size_t t = 0;
  for (;;) {
    t = 0;
    while (t < rows && t < cols) {
      // find nonzero pivot with minimal |value|
      size_t pi = SIZE_MAX, pj = SIZE_MAX;
      long long best = 0;
      for (size_t i = t; i < rows; ++i)
        for (size_t j = t; j < cols; ++j)
          if (a[i][j] != 0 && (best == 0 || std::abs(a[i][j]) < best)) {
            best = std::abs(a[i][j]);
            pi = i; pj = j;
          }
      if (pi == SIZE_MAX) break;
      swap_rows(t, pi);
      swap_cols(t, pj);
      if (a[t][t] < 0) neg_row(t);
      bool clean = true;
      for (size_t i = t + 1; i < rows; ++i)
        if (a[i][t] != 0) {
          long long q = a[i][t] / a[t][t];
          addmul_row(i, t, -q);
          if (a[i][t] != 0) clean = false;
        }
      for (size_t j = t + 1; j < cols; ++j)
        if (a[t][j] != 0) {
          long long q = a[t][j] / a[t][t];
          addmul_col(j, t, -q);
          if (a[t][j] != 0) clean = false;
        }
      if (!clean) continue;  // remainders left, repeat with smaller pivot
      ++t;
    }
    // enforce the divisibility chain; mixing columns and re-eliminating
    // strictly decreases gcd(d_i, d_{i+1}) at the first break, so this ends
    bool broken = false;
    for (size_t i = 0; i + 1 < t; ++i)
      if (a[i + 1][i + 1] % a[i][i] != 0) {
        addmul_col(i, i + 1, 1);
        broken = true;
        break;
      }
    if (!broken) break;
  }
  s.diag.assign(std::min(rows, cols), 0);
  for (size_t i = 0; i < t; ++i) s.diag[i] = a[i][i];
  return s;
}

std::optional<IntSolution> solve_integer(const IntMat& a, const IntVec& b) {
  size_t rows = a.size(), cols = a.empty() ? 0 : a[0].size();
  Smith s = smith_normal_form(a);
  IntVec ub = mat_apply(s.u, b);
  IntVec y(cols, 0);
  size_t t = 0;
  for (size_t i = 0; i < s.diag.size(); ++i)
    if (s.diag[i] != 0) t = i + 1;
  for (size_t i = 0; i < rows; ++i) {
    if (i < t) {
      if (ub[i] % s.diag[i] != 0) return std::nullopt;
      y[i] = ub[i] / s.diag[i];
    } else if (ub[i] != 0) {
      return std::nullopt;
    }
  }
  IntSolution sol;
  sol.particular = mat_apply(s.v, y);
  for (size_t j = t; j < cols; ++j) {
    IntVec e(cols, 0);
    e[j] = 1;
    sol.kernel.push_back(mat_apply(s.v, e));
  }
  return sol;
}

long long RootDatum::cartan(size_t i, size_t j) const {
  return dot(roots_[j], coroots_[i]);
}

namespace {

struct LabelData {
  size_t n;
  IntMat roots, coroots;
};

std::map<std::string, LabelData> label_table() {
  std::map<std::string, LabelData> t;
  // rank 1, simply connected side (X* = weight lattice)
  t["A1"] = {1, {{2}}, {{1}}};
  // rank 1, adjoint side (X* = root lattice)
  t["A1adj"] = {1, {{1}}, {{2}}};
  // A2, simply connected side
  t["A2"] = {2, {{2, -1}, {-1, 2}}, {{1, 0}, {0, 1}}};
  // B2, simply connected side (alpha1 long, alpha2 short)
  t["B2"] = {2, {{2, -2}, {-1, 2}}, {{1, 0}, {0, 1}}};
  // G2 (alpha1 short, alpha2 long); weight lattice = root lattice
  t["G2"] = {2, {{1, 0}, {0, 1}}, {{2, -3}, {-1, 2}}};
  t["GL2"] = {2, {{1, -1}}, {{1, -1}}};
  t["GL3"] = {3, {{1, -1, 0}, {0, 1, -1}}, {{1, -1, 0}, {0, 1, -1}}};
  return t;
}

}  // namespace

std::vector<std::string> RootDatum::supported_labels() {
  std::vector<std::string> out;
  for (auto& [k, v] : label_table()) out.push_back(k);
  return out;
}

std::shared_ptr<const RootDatum> RootDatum::build(const std::string& label) {
  auto table = label_table();
  auto it = table.find(label);
  if (it == table.end()) throw std::invalid_argument("unknown cartan label: " + label);
  auto rd = std::shared_ptr<RootDatum>(new RootDatum());
  rd->label_ = label;
  rd->n_ = it->second.n;
  rd->roots_ = it->second.roots;
  rd->coroots_ = it->second.coroots;
  rd->r_ = rd->roots_.size();
  rd->finish();
  return rd;
}

void RootDatum::finish() {
  // defining axioms
  for (size_t i = 0; i < r_; ++i)
    if (dot(roots_[i], coroots_[i]) != 2)
      throw std::logic_error("root datum: <alpha_i, alpha_i^vee> != 2");
  // finite type: symmetrized Cartan matrix positive definite
  IntMat c(r_, IntVec(r_, 0));
  for (size_t i = 0; i < r_; ++i)
    for (size_t j = 0; j < r_; ++j) c[i][j] = cartan(i, j);
  // symmetrizer d_i: minimal positive integers with d_i c_ij = d_j c_ji
  IntVec d(r_, 1);
  for (int pass = 0; pass < 4; ++pass)
    for (size_t i = 0; i < r_; ++i)
      for (size_t j = 0; j < r_; ++j) {
        if (c[i][j] == 0) continue;
        // want d_i * c[i][j] == d_j * c[j][i]
        long long lhs = d[i] * c[i][j], rhs = d[j] * c[j][i];
        if (lhs != rhs) {
          long long g = std::gcd(std::abs(lhs), std::abs(rhs));
          d[i] *= std::abs(rhs) / g;
          d[j] *= std::abs(lhs) / g;
        }
      }
  // positive definiteness of (d_i c_ij) via leading principal minors
  std::vector<std::vector<double>> sym(r_, std::vector<double>(r_));
  for (size_t i = 0; i < r_; ++i)
    for (size_t j = 0; j < r_; ++j) sym[i][j] = double(d[i] * c[i][j]);
  for (size_t k = 1; k <= r_; ++k) {
    // determinant of leading k x k block (tiny sizes)
    double det = 0;
    if (k == 1) det = sym[0][0];
    else if (k == 2) det = sym[0][0] * sym[1][1] - sym[0][1] * sym[1][0];
    else det = sym[0][0] * (sym[1][1] * sym[2][2] - sym[1][2] * sym[2][1]) -
               sym[0][1] * (sym[1][0] * sym[2][2] - sym[1][2] * sym[2][0]) +
               sym[0][2] * (sym[1][0] * sym[2][1] - sym[1][1] * sym[2][0]);
    if (det <= 0) throw std::logic_error("root datum: Cartan matrix not of finite type");
  }

  // enumerate all roots by closing the simples under simple reflections
  std::set<IntVec> seen;
  std::vector<PosRoot> all;
  std::vector<std::pair<IntVec, IntVec>> queue;
  for (size_t i = 0; i < r_; ++i) queue.emplace_back(roots_[i], coroots_[i]);
  while (!queue.empty()) {
    auto [beta, betav] = queue.back();
    queue.pop_back();
    if (seen.count(beta)) continue;
    seen.insert(beta);
    // squared length: use symmetrizer scale via expansion in simple roots
    all.push_back({beta, betav, 0});
    for (size_t i = 0; i < r_; ++i) {
      IntVec nb = vec_sub(beta, vec_scale(roots_[i], dot(beta, coroots_[i])));
      IntVec nbv = vec_sub(betav, vec_scale(coroots_[i], dot(roots_[i], betav)));
      if (!seen.count(nb)) queue.emplace_back(nb, nbv);
    }
  }
  // norms: (beta,beta) proportional to d-weighted form on simple-root coords
  for (auto& pr : all) {
    auto expn = solve_integer(mat_transpose_int(roots_), pr.root);
    if (!expn) throw std::logic_error("root datum: root not in root lattice span");
    const IntVec& x = expn->particular;
    long long q = 0;
    for (size_t i = 0; i < r_; ++i)
      for (size_t j = 0; j < r_; ++j) q += x[i] * x[j] * d[i] * c[i][j];
    pr.norm2 = q;
  }
  // positives: nonnegative coordinates in simple-root basis
  for (auto& pr : all) {
    auto expn = solve_integer(mat_transpose_int(roots_), pr.root);
    bool pos = true, neg = true;
    for (long long x : expn->particular) {
      if (x < 0) pos = false;
      if (x > 0) neg = false;
    }
    if (pos && !vec_is_zero(pr.root)) pos_roots_.push_back(pr);
    (void)neg;
  }
  std::sort(pos_roots_.begin(), pos_roots_.end(),
            [](const PosRoot& a, const PosRoot& b) { return a.root < b.root; });

  // maximal short roots (single component for all supported types)
  long long min_norm = 0;
  for (auto& pr : pos_roots_)
    if (min_norm == 0 || pr.norm2 < min_norm) min_norm = pr.norm2;
  std::vector<PosRoot> shorts;
  for (auto& pr : pos_roots_)
    if (pr.norm2 == min_norm) shorts.push_back(pr);
  for (auto& cand : shorts) {
    bool maximal = true;
    for (auto& other : shorts)
      if (other.root != cand.root && dominance_leq(cand.root, other.root)) maximal = false;
    if (maximal) max_short_.push_back(cand);
  }
  if (max_short_.size() != 1)
    throw std::logic_error("root datum: expected a unique maximal short root");

  // class group X*/ZR via SNF of the matrix with columns the simple roots
  IntMat col_roots(n_, IntVec(r_, 0));
  for (size_t i = 0; i < r_; ++i)
    for (size_t k = 0; k < n_; ++k) col_roots[k][i] = roots_[i][k];
  Smith s = smith_normal_form(col_roots);
  class_u_ = s.u;
  class_diag_ = s.diag;
  weights_quot_free_ = true;
  for (long long dd : s.diag)
    if (dd > 1) weights_quot_free_ = false;

  IntMat col_coroots(n_, IntVec(r_, 0));
  for (size_t i = 0; i < r_; ++i)
    for (size_t k = 0; k < n_; ++k) col_coroots[k][i] = coroots_[i][k];
  Smith s2 = smith_normal_form(col_coroots);
  coweights_quot_free_ = true;
  for (long long dd : s2.diag)
    if (dd > 1) coweights_quot_free_ = false;

  // central lattice: kernel of pairing against all simple coroots
  IntMat pairing(r_, IntVec(n_, 0));
  for (size_t i = 0; i < r_; ++i) pairing[i] = coroots_[i];
  auto sol = solve_integer(pairing, IntVec(r_, 0));
  central_ = sol->kernel;
}

IntVec RootDatum::class_coords(const IntVec& lambda) const {
  IntVec c = mat_apply(class_u_, lambda);
  for (size_t i = 0; i < class_diag_.size() && i < c.size(); ++i) {
    if (class_diag_[i] != 0) {
      long long m = class_diag_[i];
      c[i] = ((c[i] % m) + m) % m;
    }
  }
  return c;
}

bool RootDatum::dominance_leq(const IntVec& mu, const IntVec& lambda) const {
  IntVec diff = vec_sub(lambda, mu);
  auto expn = solve_integer(mat_transpose_int(roots_), diff);
  if (!expn) return false;
  for (long long x : expn->particular)
    if (x < 0) return false;
  // kernel directions would leave the root span; coefficients must be unique
  return true;
}

}  // namespace affkl
