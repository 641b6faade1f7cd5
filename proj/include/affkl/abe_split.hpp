#pragma once

#include "affkl/abe_graded.hpp"
#include "affkl/abe_hom.hpp"

namespace affkl {

// rescale a vector of polynomials by a common rational scalar (coprime
// integer coefficients); no-op over prime fields
template <class K>
void content_normalize_polys(std::vector<GradedPoly<K>>& vec) {
  if constexpr (field_traits<K>::is_rational) {
    std::vector<K> coeffs;
    for (auto& p : vec)
      for (auto& [e, c] : p.terms()) coeffs.push_back(c);
    K s = content_scalar(coeffs);
    for (auto& p : vec) p = p.scaled(s);
  }
}

template <class K>
void content_normalize_fracs(std::vector<Frac<K>>& row) {
  if constexpr (field_traits<K>::is_rational) {
    std::vector<K> coeffs;
    for (auto& f : row)
      for (auto& [e, c] : f.num().terms()) coeffs.push_back(c);
    K s = content_scalar(coeffs);
    if (s.is_zero()) return;
    for (auto& f : row)
      if (!f.is_zero()) {
        GradedPoly<K> n = f.num().scaled(s);
        f = f.is_polynomial() ? Frac<K>(std::move(n)) : Frac<K>(std::move(n), f.den_val());
      }
  }
}

// residue of a degree-0 endomorphism on Lambda / R_+ Lambda
template <class K>
Mat<K> residue_matrix(const Flagged<K>& m, const Morphism<K>& f) {
  size_t n = m.rank();
  Mat<K> out(n, n, K());
  Expo zero_e;
  for (size_t k = 0; k < n; ++k)
    for (size_t i = 0; i < n; ++i) {
      if (m.lat_deg[k] != m.lat_deg[i]) continue;
      const GradedPoly<K>& p = f.mat(k, i);
      if (p.is_zero()) continue;
      if (zero_e.empty()) zero_e = Expo(p.nvars(), 0);
      out(k, i) = p.coeff(zero_e);
    }
  return out;
}

// minimal polynomial of a square matrix over K (Krylov on the full space)
template <class K>
std::vector<K> min_poly(const Mat<K>& a, K zero, K one) {
  size_t n = a.rows();
  // iterate powers of a as vectors in K^{n^2}
  std::vector<std::vector<K>> pows;
  Mat<K> cur = Mat<K>::identity(n, zero, one);
  auto flatten = [&](const Mat<K>& m) {
    std::vector<K> v(n * n, zero);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) v[i * n + j] = m(i, j);
    return v;
  };
  Echelon<K> ech(n * n, zero);
  for (size_t k = 0; k <= n; ++k) {
    std::vector<K> row = flatten(cur);
    pows.push_back(row);
    if (!ech.insert(row)) {
      // cur is a combination of lower powers: solve for the coefficients
      std::vector<SparseRow<K>> rows;
      // columns: coefficients c_0..c_{k-1} with sum c_t a^t = a^k
      // transpose system: for each coordinate position, a row
      size_t unknowns = k;
      std::vector<std::vector<K>> sys;
      for (size_t pos = 0; pos < n * n; ++pos) {
        std::vector<K> r(unknowns + 1, zero);
        for (size_t t = 0; t < k; ++t) r[t] = pows[t][pos];
        r[unknowns] = pows[k][pos];
        sys.push_back(std::move(r));
      }
      // gaussian solve
      Echelon<K> e2(unknowns + 1, zero);
      for (auto r : sys) e2.insert(r);
      auto kern = e2.kernel(one);
      // kernel vectors with last coordinate nonzero give the combination
      for (auto& v : kern) {
        if (v[unknowns].is_zero()) continue;
        K scale = -(one / v[unknowns]);
        std::vector<K> mp(k + 1, zero);
        for (size_t t = 0; t < k; ++t) mp[t] = v[t] * scale;
        mp[k] = one;
        return mp;  // monic: a^k - sum c_t a^t = 0
      }
      throw std::logic_error("min_poly: inconsistent solve");
    }
    cur = mat_mul(cur, a, zero);
  }
  throw std::logic_error("min_poly: no relation found");
}

// decide whether mu(t) = (t - kappa)^m for some kappa; returns kappa.
// Over Q the binomial C(m,1) never vanishes; over F_ell the first
// nonvanishing binomial index is a power of ell, where x -> x^ell is the
// identity on the prime field, so the extracted power equals kappa itself.
template <class K>
std::optional<K> power_linear_root(const std::vector<K>& mu, K zero, K one, uint32_t ell) {
  size_t m = mu.size() - 1;
  if (m == 0) return std::nullopt;
  K kappa = zero;
  bool found = false;
  auto binom_in_K = [&](size_t n, size_t k) {
    if (ell == 0) {
      K acc = one;
      for (size_t t = 0; t < k; ++t)
        acc = acc * field_traits<K>::from_int((long long)(n - t), ell) /
              field_traits<K>::from_int((long long)(t + 1), ell);
      return acc;
    }
    std::vector<std::vector<long long>> pas(n + 1, std::vector<long long>(n + 1, 0));
    for (size_t a = 0; a <= n; ++a) {
      pas[a][0] = 1;
      for (size_t b = 1; b <= a; ++b)
        pas[a][b] = (pas[a - 1][b - 1] + (b <= a - 1 ? pas[a - 1][b] : 0)) % (long long)ell;
    }
    return field_traits<K>::from_int(pas[n][k], ell);
  };
  for (size_t i = 1; i <= m; ++i) {
    K c = binom_in_K(m, i);
    if (c.is_zero()) continue;
    // coefficient of t^{m-i} is binom(m,i) (-kappa)^i
    K val = mu[m - i] / c;
    if (i % 2 == 1) val = -val;
    kappa = val;
    found = true;
    break;
  }
  if (!found) return std::nullopt;
  // verify (t - kappa)^m == mu
  std::vector<K> p{-kappa, one};
  std::vector<K> acc{one};
  for (size_t t = 0; t < m; ++t) {
    std::vector<K> nxt(acc.size() + 1, zero);
    for (size_t a = 0; a < acc.size(); ++a) {
      nxt[a] += acc[a] * p[0];
      nxt[a + 1] += acc[a] * p[1];
    }
    acc = std::move(nxt);
  }
  if (acc.size() != mu.size()) return std::nullopt;
  for (size_t a = 0; a < acc.size(); ++a)
    if (!(acc[a] == mu[a])) return std::nullopt;
  return kappa;
}

// invert a degree-0 endomorphism via its residue: f = R0 + (strictly
// positive part), so f is invertible iff R0 is, and the Neumann series of
// -R0^{-1}(f - R0) terminates (the positive part raises the coefficient
// degree, which is bounded by the lattice degree spread)
template <class K>
std::optional<Morphism<K>> invert_morphism(const AbeContext<K>& ctx, const Flagged<K>& m,
                                           const Morphism<K>& f) {
  size_t n = m.rank();
  size_t nv = ctx.real()->nvars();
  K zero = ctx.real()->zero(), one = ctx.real()->one();
  Mat<K> r0 = residue_matrix(m, f);
  Mat<K> r0inv;
  try {
    r0inv = mat_inverse(r0, zero, one);
  } catch (const std::domain_error&) {
    return std::nullopt;
  }
  auto lift = [&](const Mat<K>& a) {
    Mat<GradedPoly<K>> out(n, n, GradedPoly<K>(nv));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        if (!a(i, j).is_zero()) out(i, j) = GradedPoly<K>::constant(nv, a(i, j));
    return out;
  };
  auto matmul = [&](const Mat<GradedPoly<K>>& a, const Mat<GradedPoly<K>>& b) {
    Mat<GradedPoly<K>> out(n, n, GradedPoly<K>(nv));
    for (size_t i = 0; i < n; ++i)
      for (size_t k = 0; k < n; ++k) {
        if (a(i, k).is_zero()) continue;
        for (size_t j = 0; j < n; ++j) {
          if (b(k, j).is_zero()) continue;
          out(i, j) = out(i, j) + a(i, k) * b(k, j);
        }
      }
    return out;
  };
  Mat<GradedPoly<K>> r0inv_p = lift(r0inv);
  // N = -R0^{-1} (f - R0)
  Mat<GradedPoly<K>> diff = f.mat;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (!r0(i, j).is_zero()) diff(i, j) = diff(i, j) - GradedPoly<K>::constant(nv, r0(i, j));
  Mat<GradedPoly<K>> nmat = matmul(r0inv_p, diff);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (!nmat(i, j).is_zero()) nmat(i, j) = -nmat(i, j);
  Morphism<K> out;
  out.deg = 0;
  // acc = (sum_t N^t) R0^{-1}
  Mat<GradedPoly<K>> acc = lift(Mat<K>::identity(n, zero, one));
  Mat<GradedPoly<K>> term = nmat;
  for (;;) {
    bool nonzero = false;
    for (size_t i = 0; i < n && !nonzero; ++i)
      for (size_t j = 0; j < n && !nonzero; ++j)
        if (!term(i, j).is_zero()) nonzero = true;
    if (!nonzero) break;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        if (!term(i, j).is_zero()) acc(i, j) = acc(i, j) + term(i, j);
    term = matmul(term, nmat);
  }
  out.mat = matmul(acc, r0inv_p);
  return out;
}

// Extract the image of an idempotent degree-0 endomorphism as a flagged
// object, with the prescribed character (used for both summands of a split).
template <class K>
struct Extraction {
  Flagged<K> object;
  Morphism<K> include;  // object -> ambient
  Morphism<K> project;  // ambient -> object
};

template <class K>
Extraction<K> extract_image(const AbeContext<K>& ctx, const Flagged<K>& m,
                            const Morphism<K>& idem, const HeckeElement& ch_new) {
  const Realization<K>& real = *ctx.real();
  size_t nv = real.nvars();
  GradedLattice<K> lat(ctx, m);
  // spanning set: columns of the idempotent
  std::vector<std::pair<typename GradedLattice<K>::PolyVec, int>> spanning;
  for (size_t i = 0; i < m.rank(); ++i) {
    typename GradedLattice<K>::PolyVec col(m.rank(), GradedPoly<K>(nv));
    bool nonzero = false;
    for (size_t k = 0; k < m.rank(); ++k) {
      col[k] = idem.mat(k, i);
      nonzero = nonzero || !col[k].is_zero();
    }
    if (nonzero) spanning.emplace_back(std::move(col), m.lat_deg[i]);
  }
  std::sort(spanning.begin(), spanning.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
  auto gens = lat.left_min_generators(spanning);
  for (auto& g : gens.gens) content_normalize_polys(g);
  size_t nr = gens.gens.size();

  Extraction<K> out;
  Flagged<K>& obj = out.object;
  obj.real = ctx.real();
  obj.lat_deg = gens.degrees;
  obj.ch = ch_new;
  obj.ch_multiplicative = m.ch_multiplicative;

  // U: old-lattice coordinates of the new lattice basis
  Mat<GradedPoly<K>> U(m.rank(), nr, GradedPoly<K>(nv));
  for (size_t t = 0; t < nr; ++t)
    for (size_t k = 0; k < m.rank(); ++k) U(k, t) = gens.gens[t][k];

  // B = D * U: line coordinates of the new basis
  Mat<Frac<K>> B(m.lines.size(), nr);
  for (size_t j = 0; j < m.lines.size(); ++j)
    for (size_t t = 0; t < nr; ++t) {
      Frac<K> acc;
      for (size_t k = 0; k < m.rank(); ++k) {
        if (m.loc(j, k).is_zero() || U(k, t).is_zero()) continue;
        acc += m.loc(j, k) * Frac<K>(U(k, t));
      }
      acc.normalize_forms(real);
      B(j, t) = std::move(acc);
    }

  // per element: pick a basis of the block column space as the new lines
  std::map<AffElem, std::vector<size_t>> blocks;
  for (size_t j = 0; j < m.lines.size(); ++j) blocks[m.lines[j].w].push_back(j);
  std::vector<std::vector<Frac<K>>> newloc_rows;  // rows over new lattice
  for (auto& [w, rows] : blocks) {
    // column space basis via column-pivot Gaussian on the block
    size_t nr_rows = rows.size();
    std::vector<size_t> pivot_cols;
    Mat<Frac<K>> work(nr_rows, nr);
    for (size_t a = 0; a < nr_rows; ++a)
      for (size_t t = 0; t < nr; ++t) work(a, t) = B(rows[a], t);
    Mat<Frac<K>> workref = work;
    size_t rrank = 0;
    std::vector<size_t> pivot_rows;
    for (size_t t = 0; t < nr && rrank < nr_rows; ++t) {
      size_t piv = SIZE_MAX;
      for (size_t a = rrank; a < nr_rows; ++a)
        if (!workref(a, t).is_zero()) { piv = a; break; }
      if (piv == SIZE_MAX) continue;
      if (piv != rrank)
        for (size_t c = 0; c < nr; ++c) std::swap(workref(piv, c), workref(rrank, c));
      Frac<K> f = workref(rrank, t).inv();
      for (size_t c = 0; c < nr; ++c)
        if (!workref(rrank, c).is_zero()) workref(rrank, c) *= f;
      for (size_t a = 0; a < nr_rows; ++a) {
        if (a == rrank || workref(a, t).is_zero()) continue;
        Frac<K> g = workref(a, t);
        for (size_t c = 0; c < nr; ++c)
          if (!workref(rrank, c).is_zero()) workref(a, c) -= g * workref(rrank, c);
      }
      pivot_cols.push_back(t);
      ++rrank;
    }
    // new line vectors: the pivot columns of the original block; coordinates
    // of all columns in that basis: solve C X = B_block
    if (rrank == 0) continue;
    Mat<Frac<K>> C(nr_rows, rrank);
    for (size_t a = 0; a < nr_rows; ++a)
      for (size_t p = 0; p < rrank; ++p) C(a, p) = work(a, pivot_cols[p]);
    // solve via least-structure Gaussian: [C | B] row reduce
    Mat<Frac<K>> X(rrank, nr);
    {
      // build augmented and eliminate
      size_t cols = rrank + nr;
      Mat<Frac<K>> aug(nr_rows, cols);
      for (size_t a = 0; a < nr_rows; ++a) {
        for (size_t p = 0; p < rrank; ++p) aug(a, p) = C(a, p);
        for (size_t t = 0; t < nr; ++t) aug(a, rrank + t) = B(rows[a], t);
      }
      size_t rr = 0;
      for (size_t p = 0; p < rrank; ++p) {
        size_t piv = SIZE_MAX;
        for (size_t a = rr; a < nr_rows; ++a)
          if (!aug(a, p).is_zero()) { piv = a; break; }
        if (piv == SIZE_MAX) throw std::logic_error("extract_image: block basis defect");
        if (piv != rr)
          for (size_t c = 0; c < cols; ++c) std::swap(aug(piv, c), aug(rr, c));
        Frac<K> f = aug(rr, p).inv();
        for (size_t c = 0; c < cols; ++c)
          if (!aug(rr, c).is_zero()) aug(rr, c) *= f;
        for (size_t a = 0; a < nr_rows; ++a) {
          if (a == rr || aug(a, p).is_zero()) continue;
          Frac<K> g = aug(a, p);
          for (size_t c = 0; c < cols; ++c)
            if (!aug(rr, c).is_zero()) aug(a, c) -= g * aug(rr, c);
        }
        ++rr;
      }
      for (size_t a = rr; a < nr_rows; ++a)
        for (size_t t = 0; t < nr; ++t)
          if (!aug(a, rrank + t).is_zero())
            throw std::logic_error("extract_image: columns escape the block basis");
      for (size_t p = 0; p < rrank; ++p)
        for (size_t t = 0; t < nr; ++t) X(p, t) = aug(p, rrank + t);
    }
    for (size_t p = 0; p < rrank; ++p) {
      // phi of the new line vector: degree of the chosen pivot column
      int phi = gens.degrees[pivot_cols[p]];
      obj.lines.push_back({w, phi});
      std::vector<Frac<K>> row(nr);
      for (size_t t = 0; t < nr; ++t) {
        X(p, t).normalize_forms(real);
        row[t] = X(p, t);
      }
      content_normalize_fracs(row);
      newloc_rows.push_back(std::move(row));
    }
  }
  if (newloc_rows.size() != nr)
    throw std::logic_error("extract_image: line count does not match the extracted rank");
  obj.loc = Mat<Frac<K>>(nr, nr);
  for (size_t j = 0; j < nr; ++j)
    for (size_t t = 0; t < nr; ++t) obj.loc(j, t) = newloc_rows[j][t];

  // character consistency: per-element line counts match ch at v = 1
  {
    std::map<AffElem, long long> expect;
    for (auto& [w, p] : ch_new.terms()) expect[w] = p.eval_at_one();
    std::map<AffElem, long long> got;
    for (auto& l : obj.lines) got[l.w] += 1;
    if (expect != got)
      throw std::logic_error("extract_image: flag support does not match the character");
  }

  // inclusion: U; projection: solve U * P = idem over the lattice
  out.include.deg = 0;
  out.include.mat = U;
  // projection: since idem = U * P with P polynomial, solve degreewise:
  // columns of P are coordinates of idem-columns in the new basis
  out.project.deg = 0;
  out.project.mat = Mat<GradedPoly<K>>(nr, m.rank(), GradedPoly<K>(nv));
  {
    // idem factors as U * P with P polynomial; solve U y = idem-column
    // degreewise for each column
    for (size_t i = 0; i < m.rank(); ++i) {
      // solve sum_t y_t * U(:, t) = idem(:, i) with y_t homogeneous of degree
      // lat_deg[i] - obj.lat_deg[t]
      int dtar = m.lat_deg[i];
      // unknown coefficients per t and monomial
      std::vector<std::pair<size_t, Expo>> unknowns;
      for (size_t t = 0; t < nr; ++t) {
        int rem = dtar - obj.lat_deg[t];
        if (rem < 0 || rem % 2) continue;
        for (auto& e : GradedLattice<K>::monomials(nv, rem / 2))
          unknowns.emplace_back(t, e);
      }
      // rows: coefficients of each coordinate polynomial of the old lattice
      std::map<std::pair<size_t, Expo>, size_t> rowindex;
      std::vector<SparseRow<K>> rows;
      std::vector<K> rhs_map;
      auto row_of = [&](size_t k, const Expo& e) {
        auto key = std::make_pair(k, e);
        auto it = rowindex.find(key);
        if (it == rowindex.end()) {
          it = rowindex.emplace(key, rows.size()).first;
          rows.emplace_back();
          rhs_map.push_back(K());
        }
        return it->second;
      };
      for (size_t u = 0; u < unknowns.size(); ++u) {
        auto& [t, e] = unknowns[u];
        for (size_t k = 0; k < m.rank(); ++k) {
          if (U(k, t).is_zero()) continue;
          for (auto& [em, c] : U(k, t).terms()) {
            Expo tot(e);
            for (size_t v = 0; v < nv; ++v) tot[v] += em[v];
            rows[row_of(k, tot)].add(u, c);
          }
        }
      }
      for (size_t k = 0; k < m.rank(); ++k) {
        if (idem.mat(k, i).is_zero()) continue;
        for (auto& [em, c] : idem.mat(k, i).terms()) rhs_map[row_of(k, em)] = c;
      }
      // solve least-squares-free linear system via augmented kernel: append
      // rhs as an extra unknown with coefficient -1
      std::vector<SparseRow<K>> aug = rows;
      for (size_t r = 0; r < aug.size(); ++r)
        if (!rhs_map[r].is_zero()) aug[r].add(unknowns.size(), -rhs_map[r]);
      std::vector<std::vector<K>> kern;
      if constexpr (field_traits<K>::is_rational) {
        kern = sparse_kernel_steered(aug, unknowns.size() + 1);
      } else {
        kern = sparse_kernel<K>(aug, unknowns.size() + 1, real.zero(), real.one());
      }
      bool done = false;
      for (auto& v : kern) {
        if (v[unknowns.size()].is_zero()) continue;
        K scale = v[unknowns.size()].inv();
        for (size_t u = 0; u < unknowns.size(); ++u) {
          if (v[u].is_zero()) continue;
          auto& [t, e] = unknowns[u];
          out.project.mat(t, i).add_term(e, v[u] * scale);
        }
        done = true;
        break;
      }
      if (!done && !column_is_zero(idem, i))
        throw std::logic_error("extract_image: projection solve failed");
    }
  }
  return out;
}

template <class K>
bool column_is_zero(const Morphism<K>& f, size_t i) {
  for (size_t k = 0; k < f.mat.rows(); ++k)
    if (!f.mat(k, i).is_zero()) return false;
  return true;
}

// switch duality via a right basis
template <class K>
Flagged<K> switch_object(const AbeContext<K>& ctx, const Flagged<K>& m) {
  const Realization<K>& real = *ctx.real();
  const WeylGroup& W = *ctx.group();
  GradedLattice<K> lat(ctx, m);
  auto rb = lat.right_basis();
  size_t n = m.rank();
  Flagged<K> out;
  out.real = ctx.real();
  out.lat_deg = rb.degrees;
  for (auto& l : m.lines) out.lines.push_back({W.inverse(l.w), l.phi});
  out.loc = Mat<Frac<K>>(m.lines.size(), n);
  for (size_t t = 0; t < n; ++t) {
    for (size_t j = 0; j < m.lines.size(); ++j) {
      // line coordinate of the right-basis vector, then the switch twist
      Frac<K> acc;
      for (size_t k = 0; k < n; ++k) {
        if (m.loc(j, k).is_zero() || rb.gens[t][k].is_zero()) continue;
        acc += m.loc(j, k) * Frac<K>(rb.gens[t][k]);
      }
      if (!acc.is_zero()) acc = ctx.act_frac(W.inverse(m.lines[j].w), acc);
      acc.normalize_forms(real);
      out.loc(j, t) = std::move(acc);
    }
  }
  for (auto& [w, p] : m.ch.terms()) out.ch.add_term(W.inverse(w), p);
  out.ch_multiplicative = m.ch_multiplicative;
  return out;
}

}  // namespace affkl
