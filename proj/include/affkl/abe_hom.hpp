#pragma once

#include <functional>
#include <map>
#include <tuple>

#include "affkl/abe.hpp"
#include "affkl/abe_graded.hpp"

namespace affkl {

// division with remainder by a linear form (remainder free of the pivot var)
template <class K>
std::pair<GradedPoly<K>, GradedPoly<K>> div_rem_linear(const GradedPoly<K>& p,
                                                       const std::vector<K>& form) {
  size_t nv = p.nvars();
  size_t pivot = SIZE_MAX;
  for (size_t v = 0; v < nv; ++v)
    if (!form[v].is_zero()) { pivot = v; break; }
  if (pivot == SIZE_MAX) throw std::domain_error("div_rem_linear: zero form");
  GradedPoly<K> f = GradedPoly<K>::linear(form);
  GradedPoly<K> q(nv), r = p;
  for (;;) {
    // find a term with positive pivot exponent and maximal pivot degree
    const std::map<Expo, K>& ts = r.terms();
    Expo best;
    bool found = false;
    int bestdeg = 0;
    for (auto& [e, c] : ts)
      if (e[pivot] > bestdeg) { bestdeg = e[pivot]; best = e; found = true; }
    if (!found) break;
    K c = r.coeff(best);
    Expo e = best;
    e[pivot] -= 1;
    GradedPoly<K> t(nv);
    t.add_term(e, c / form[pivot]);
    q = q + t;
    r = r - t * f;
  }
  return {q, r};
}

template <class K>
struct Morphism {
  int deg = 0;
  Mat<GradedPoly<K>> mat;  // target rank x source rank
};

template <class K>
Morphism<K> identity_morphism(const AbeContext<K>& ctx, const Flagged<K>& m) {
  Morphism<K> f;
  f.deg = 0;
  size_t n = m.rank();
  f.mat = Mat<GradedPoly<K>>(n, n, GradedPoly<K>(ctx.real()->nvars()));
  for (size_t i = 0; i < n; ++i) f.mat(i, i) = ctx.one_poly();
  return f;
}

template <class K>
Morphism<K> compose(const Morphism<K>& g, const Morphism<K>& f) {  // g o f
  Morphism<K> out;
  out.deg = f.deg + g.deg;
  out.mat = Mat<GradedPoly<K>>(g.mat.rows(), f.mat.cols(), GradedPoly<K>());
  for (size_t i = 0; i < g.mat.rows(); ++i)
    for (size_t k = 0; k < g.mat.cols(); ++k) {
      if (g.mat(i, k).is_zero()) continue;
      for (size_t j = 0; j < f.mat.cols(); ++j) {
        if (f.mat(k, j).is_zero()) continue;
        out.mat(i, j) = out.mat(i, j) + g.mat(i, k) * f.mat(k, j);
      }
    }
  return out;
}

namespace detail {

// factor a fraction denominator into registry linear forms
template <class K>
std::map<size_t, int> factor_denominator(const Realization<K>& real, const Frac<K>& f) {
  std::map<size_t, int> out;
  if (f.is_polynomial() || f.is_zero()) return out;
  GradedPoly<K> d = f.den_val();
  bool progress = true;
  while (!d.is_constant() && progress) {
    progress = false;
    for (size_t id = 0; id < real.num_forms(); ++id) {
      if (auto q = d.divided_by(real.form_poly(id))) {
        out[id] += 1;
        d = *q;
        progress = true;
        break;
      }
    }
  }
  if (!d.is_constant())
    throw std::logic_error("factor_denominator: denominator outside the form registry");
  return out;
}

inline void form_lcm(std::map<size_t, int>& acc, const std::map<size_t, int>& other) {
  for (auto& [id, m] : other) {
    auto it = acc.find(id);
    if (it == acc.end() || it->second < m) acc[id] = m;
  }
}
inline void form_sum(std::map<size_t, int>& acc, const std::map<size_t, int>& other) {
  for (auto& [id, m] : other) acc[id] += m;
}

template <class K>
GradedPoly<K> forms_product(const Realization<K>& real, const std::map<size_t, int>& ms) {
  GradedPoly<K> p = GradedPoly<K>::constant(real.nvars(), real.one());
  for (auto& [id, m] : ms)
    for (int t = 0; t < m; ++t) p = p * real.form_poly(id);
  return p;
}

}  // namespace detail

// Basis of the space of degree-d morphisms M -> N: block maps A over Q
// between equal flag labels whose induced lattice matrix E is polynomial.
// Solved jointly in (A, E) through A D_M = D_N E, which only involves the
// forward localization matrices (small data); the inverses enter solely
// through their denominator multisets, which bound the A-denominators.
template <class K>
std::vector<Morphism<K>> hom_graded(const AbeContext<K>& ctx, const Flagged<K>& M,
                                    const Flagged<K>& N, int d) {
  using detail::factor_denominator;
  using detail::form_lcm;
  using detail::form_sum;
  using detail::forms_product;
  const Realization<K>& real = *ctx.real();
  size_t nv = real.nvars();
  const Mat<Frac<K>>& DN = N.loc;
  const Mat<Frac<K>>& DM = M.loc;
  const Mat<Frac<K>>& DNi = N.loc_inverse();
  const Mat<Frac<K>>& DMi = M.loc_inverse();

  // denominator budgets per line
  std::vector<std::map<size_t, int>> dn_row(N.lines.size()), dmi_col(M.lines.size());
  for (size_t j = 0; j < N.lines.size(); ++j)
    for (size_t k = 0; k < N.rank(); ++k)
      form_lcm(dn_row[j], factor_denominator(real, DN(j, k)));
  for (size_t jp = 0; jp < M.lines.size(); ++jp)
    for (size_t i = 0; i < M.rank(); ++i)
      form_lcm(dmi_col[jp], factor_denominator(real, DMi(i, jp)));

  // unknowns: blocks (j over N lines, jp over M lines) with equal labels;
  // each block carries a shared denominator Delta and a monomial family
  struct Block {
    size_t j, jp;
    std::map<size_t, int> delta_ms;
    std::vector<Expo> monos;
    size_t first_unknown = 0;
  };
  std::vector<Block> blocks;
  size_t num_unknowns = 0;
  auto enumerate_monos = [&](int half) {
    std::vector<Expo> ms;
    Expo cur(nv, 0);
    std::function<void(size_t, int)> bld = [&](size_t pos, int rem) {
      if (pos + 1 == nv) {
        cur[pos] = rem;
        ms.push_back(cur);
        cur[pos] = 0;
        return;
      }
      for (int t = rem; t >= 0; --t) {
        cur[pos] = t;
        bld(pos + 1, rem - t);
      }
      cur[pos] = 0;
    };
    bld(0, half);
    return ms;
  };
  for (size_t j = 0; j < N.lines.size(); ++j)
    for (size_t jp = 0; jp < M.lines.size(); ++jp) {
      if (!(N.lines[j].w == M.lines[jp].w)) continue;
      Block b;
      b.j = j;
      b.jp = jp;
      b.delta_ms = dn_row[j];
      form_sum(b.delta_ms, dmi_col[jp]);
      int deg_delta = 0;
      for (auto& [id, m] : b.delta_ms) deg_delta += 2 * m;
      int target = d + M.lines[jp].phi - N.lines[j].phi + deg_delta;
      if (target < 0 || target % 2 != 0) continue;
      b.monos = enumerate_monos(target / 2);
      b.first_unknown = num_unknowns;
      num_unknowns += b.monos.size();
      blocks.push_back(std::move(b));
    }
  if (num_unknowns == 0) return {};

  // E-unknowns: entry (k, i) of the lattice matrix, homogeneous of degree
  // d + d^M_i - d^N_k
  struct EEntry {
    size_t k, i;
    std::vector<Expo> monos;
    size_t first_unknown;
  };
  std::vector<EEntry> eentries;
  std::vector<std::vector<size_t>> eindex(N.rank(), std::vector<size_t>(M.rank(), SIZE_MAX));
  for (size_t k = 0; k < N.rank(); ++k)
    for (size_t i = 0; i < M.rank(); ++i) {
      int deg = d + M.lat_deg[i] - N.lat_deg[k];
      if (deg < 0 || deg % 2 != 0) continue;
      EEntry e;
      e.k = k;
      e.i = i;
      e.monos = enumerate_monos(deg / 2);
      e.first_unknown = num_unknowns;
      num_unknowns += e.monos.size();
      eindex[k][i] = eentries.size();
      eentries.push_back(std::move(e));
    }

  // constraints: for every (line j of N, lattice i of M):
  //   sum_{jp matching j} A_{j,jp} D_M(jp, i) - sum_k D_N(j, k) E(k, i) = 0
  std::vector<SparseRow<K>> rows;
  std::vector<size_t> blocks_of_line(N.lines.size());
  {
    std::vector<std::vector<size_t>> by_line(N.lines.size());
    for (size_t b = 0; b < blocks.size(); ++b) by_line[blocks[b].j].push_back(b);
    for (size_t j = 0; j < N.lines.size(); ++j) {
      struct Term {
        GradedPoly<K> lifted;  // numerator against the common denominator
        size_t first_unknown;
        const std::vector<Expo>* monos;
      };
      for (size_t i = 0; i < M.rank(); ++i) {
        std::vector<Term> terms;
        std::map<size_t, int> gms;
        // A-terms
        struct RawTerm {
          GradedPoly<K> base;
          std::map<size_t, int> den;
          size_t first_unknown;
          const std::vector<Expo>* monos;
        };
        std::vector<RawTerm> raws;
        for (size_t b : by_line[j]) {
          const Frac<K>& dm = DM(blocks[b].jp, i);
          if (dm.is_zero()) continue;
          RawTerm rt;
          rt.den = factor_denominator(real, dm);
          if (dm.is_polynomial()) {
            rt.base = dm.num();
          } else {
            GradedPoly<K> formsden = forms_product(real, rt.den);
            auto unit = dm.den_val().divided_by(formsden);
            if (!unit || !unit->is_constant())
              throw std::logic_error("hom_graded: denominator outside the form registry");
            rt.base = dm.num().scaled(unit->constant_value().inv());
          }
          form_sum(rt.den, blocks[b].delta_ms);
          rt.first_unknown = blocks[b].first_unknown;
          rt.monos = &blocks[b].monos;
          form_lcm(gms, rt.den);
          raws.push_back(std::move(rt));
        }
        // E-terms
        for (size_t k = 0; k < N.rank(); ++k) {
          if (eindex[k][i] == SIZE_MAX) continue;
          const Frac<K>& dn = DN(j, k);
          if (dn.is_zero()) continue;
          RawTerm rt;
          rt.den = factor_denominator(real, dn);
          if (dn.is_polynomial()) {
            rt.base = -dn.num();
          } else {
            GradedPoly<K> formsden = forms_product(real, rt.den);
            auto unit = dn.den_val().divided_by(formsden);
            if (!unit || !unit->is_constant())
              throw std::logic_error("hom_graded: denominator outside the form registry");
            rt.base = (-dn.num()).scaled(unit->constant_value().inv());
          }
          const EEntry& ee = eentries[eindex[k][i]];
          rt.first_unknown = ee.first_unknown;
          rt.monos = &ee.monos;
          form_lcm(gms, rt.den);
          raws.push_back(std::move(rt));
        }
        if (raws.empty()) continue;
        for (auto& rt : raws) {
          std::map<size_t, int> mult = gms;
          for (auto& [id, m] : rt.den) mult[id] -= m;
          terms.push_back({rt.base * forms_product(real, mult), rt.first_unknown, rt.monos});
        }
        // rows: monomial coefficients of the lifted identity
        std::map<Expo, SparseRow<K>> local;
        for (auto& t : terms) {
          for (size_t m = 0; m < t.monos->size(); ++m) {
            size_t ui = t.first_unknown + m;
            const Expo& shift = (*t.monos)[m];
            for (auto& [e, cc] : t.lifted.terms()) {
              Expo tot(e);
              for (size_t v = 0; v < nv; ++v) tot[v] += shift[v];
              local[tot].add(ui, cc);
            }
          }
        }
        for (auto& [key, row] : local)
          if (!row.terms.empty()) rows.push_back(std::move(row));
      }
    }
  }
  (void)blocks_of_line;
  (void)DNi;
  (void)DMi;

  std::vector<std::vector<K>> kernel;
  if constexpr (field_traits<K>::is_rational) {
    kernel = sparse_kernel_steered(rows, num_unknowns);
  } else {
    kernel = sparse_kernel<K>(rows, num_unknowns, real.zero(), real.one());
  }
  for (auto& sol : kernel) content_normalize(sol);

  // read off the lattice matrices
  std::vector<Morphism<K>> out;
  for (auto& sol : kernel) {
    Morphism<K> f;
    f.deg = d;
    f.mat = Mat<GradedPoly<K>>(N.rank(), M.rank(), GradedPoly<K>(nv));
    bool zero = true;
    for (auto& ee : eentries) {
      GradedPoly<K> p(nv);
      for (size_t m = 0; m < ee.monos.size(); ++m) {
        const K& lambda = sol[ee.first_unknown + m];
        if (!lambda.is_zero()) p.add_term(ee.monos[m], lambda);
      }
      if (!p.is_zero()) zero = false;
      f.mat(ee.k, ee.i) = std::move(p);
    }
    if (!zero) out.push_back(std::move(f));
  }
  return out;
}

// total graded Hom rank over R computed from generator degrees; the window
// is derived from the lattice degrees, with Q-rank completeness certificate
template <class K>
struct HomRankReport {
  long long rank = 0;
  long long expected_q_rank = 0;
  bool complete = false;
  std::map<int, size_t> gens_by_degree;
};

template <class K>
HomRankReport<K> hom_total_rank(const AbeContext<K>& ctx, const Flagged<K>& M,
                                const Flagged<K>& N, int extra_window = 0) {
  HomRankReport<K> rep;
  // expected rank over Q: matching line labels
  std::map<AffElem, std::pair<size_t, size_t>> counts;
  for (auto& l : M.lines) counts[l.w].first++;
  for (auto& l : N.lines) counts[l.w].second++;
  for (auto& [w, c] : counts) rep.expected_q_rank += (long long)c.first * (long long)c.second;

  int dmin = INT32_MAX, dmax = INT32_MIN;
  for (int dn : N.lat_deg)
    for (int dm : M.lat_deg) {
      dmin = std::min(dmin, dn - dm);
      dmax = std::max(dmax, dn - dm);
    }
  dmin -= extra_window;
  dmax += extra_window;

  // degreewise: count R-module generators of Hom*(M, N); morphisms of degree
  // d that factor as r * (lower generator) are not new generators
  std::vector<std::pair<int, Morphism<K>>> gens;
  for (int d = dmin; d <= dmax; ++d) {
    auto basis = hom_graded(ctx, M, N, d);
    if (basis.empty()) continue;
    // coordinates: stack matrices into vectors of polynomials, compare the
    // degree-d piece of (R * earlier generators) with the new basis
    size_t nv = ctx.real()->nvars();
    // coordinate index: (k, i, monomial)
    std::map<std::tuple<size_t, size_t, Expo>, size_t> index;
    auto coords_of = [&](const Morphism<K>& f) {
      std::vector<std::pair<size_t, K>> sparse;
      for (size_t k = 0; k < f.mat.rows(); ++k)
        for (size_t i = 0; i < f.mat.cols(); ++i)
          for (auto& [e, c] : f.mat(k, i).terms()) {
            auto key = std::make_tuple(k, i, e);
            auto it = index.find(key);
            if (it == index.end()) it = index.emplace(key, index.size()).first;
            sparse.emplace_back(it->second, c);
          }
      return sparse;
    };
    std::vector<std::vector<std::pair<size_t, K>>> sp;
    for (auto& g : gens) {
      int rem = d - g.first;
      if (rem < 0 || rem % 2) continue;
      for (auto& e : GradedLattice<K>::monomials(nv, rem / 2)) {
        GradedPoly<K> mono(nv);
        mono.add_term(e, ctx.real()->one());
        Morphism<K> scaled = g.second;
        for (size_t k = 0; k < scaled.mat.rows(); ++k)
          for (size_t i = 0; i < scaled.mat.cols(); ++i)
            if (!scaled.mat(k, i).is_zero()) scaled.mat(k, i) = mono * scaled.mat(k, i);
        sp.push_back(coords_of(scaled));
      }
    }
    std::vector<std::vector<std::pair<size_t, K>>> newsp;
    for (auto& f : basis) newsp.push_back(coords_of(f));
    size_t ncols = index.size();
    Echelon<K> ech(ncols, ctx.real()->zero());
    std::vector<K> dense(ncols, K());
    auto insert = [&](const std::vector<std::pair<size_t, K>>& row) {
      std::fill(dense.begin(), dense.end(), K());
      for (auto& [c, v] : row) dense[c] += v;
      std::vector<K> r = dense;
      return ech.insert(r);
    };
    for (auto& row : sp) insert(row);
    size_t before = ech.rank();
    size_t added = 0;
    for (size_t b = 0; b < newsp.size(); ++b)
      if (insert(newsp[b])) {
        ++added;
        gens.emplace_back(d, basis[b]);
      }
    (void)before;
    if (added) rep.gens_by_degree[d] += added;
  }
  rep.rank = 0;
  for (auto& [d, c] : rep.gens_by_degree) rep.rank += (long long)c;
  rep.complete = (rep.rank == rep.expected_q_rank);
  return rep;
}

}  // namespace affkl
