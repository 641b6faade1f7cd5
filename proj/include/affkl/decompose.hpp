#pragma once

#include <atomic>
#include <mutex>
#include <set>
#include <thread>

#include "affkl/abe_split.hpp"

namespace affkl {

struct SplitFailure : std::runtime_error {
  explicit SplitFailure(const std::string& msg) : std::runtime_error(msg) {}
};

// End^0 as an abstract algebra: basis of degree-0 endomorphisms together
// with structure constants.
template <class K>
struct End0Algebra {
  std::vector<Morphism<K>> basis;
  // structure[i][j] = coordinates of basis[i] o basis[j]
  std::vector<std::vector<std::vector<K>>> structure;
  size_t dimension() const { return basis.size(); }
};

namespace detail {

// coordinates of a morphism against a basis (exact linear solve)
template <class K>
std::optional<std::vector<K>> expand_in_basis(const std::vector<Morphism<K>>& basis,
                                              const Morphism<K>& target, K zero, K one) {
  if (basis.empty()) return std::nullopt;
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
  std::vector<std::vector<std::pair<size_t, K>>> cols;
  for (auto& b : basis) cols.push_back(coords_of(b));
  auto tcol = coords_of(target);
  std::vector<SparseRow<K>> rows(index.size());
  for (size_t b = 0; b < cols.size(); ++b)
    for (auto& [pos, c] : cols[b]) rows[pos].add(b, c);
  for (auto& [pos, c] : tcol) rows[pos].add(cols.size(), -c);
  std::vector<std::vector<K>> kern;
  if constexpr (field_traits<K>::is_rational) {
    kern = sparse_kernel_steered(rows, cols.size() + 1);
  } else {
    kern = sparse_kernel<K>(rows, cols.size() + 1, zero, one);
  }
  for (auto& v : kern) {
    if (v[cols.size()].is_zero()) continue;
    K scale = v[cols.size()].inv();
    std::vector<K> out(cols.size(), zero);
    for (size_t b = 0; b < cols.size(); ++b) out[b] = v[b] * scale;
    return out;
  }
  return std::nullopt;
}

}  // namespace detail

template <class K>
End0Algebra<K> end0(const AbeContext<K>& ctx, const Flagged<K>& m) {
  End0Algebra<K> alg;
  alg.basis = hom_graded(ctx, m, m, 0);
  K zero = ctx.real()->zero(), one = ctx.real()->one();
  for (size_t i = 0; i < alg.basis.size(); ++i) {
    alg.structure.emplace_back();
    for (size_t j = 0; j < alg.basis.size(); ++j) {
      Morphism<K> prod = compose(alg.basis[i], alg.basis[j]);
      auto coords = detail::expand_in_basis(alg.basis, prod, zero, one);
      if (!coords) throw std::logic_error("end0: composition escapes the basis");
      alg.structure.back().push_back(*coords);
    }
  }
  return alg;
}

// report on the local structure of End^0 via residues of (seeded) samples
struct LocalityReport {
  bool local_split = true;  // all sampled residues are scalar + nilpotent
  bool nonsplit_detected = false;
  std::string note;
};

template <class K>
LocalityReport end0_locality(const AbeContext<K>& ctx, const Flagged<K>& m,
                             const End0Algebra<K>& alg, uint64_t seed, int samples = 16) {
  LocalityReport rep;
  K zero = ctx.real()->zero(), one = ctx.real()->one();
  uint32_t ell = ctx.real()->field().ell;
  uint64_t state = seed * 6364136223846793005ull + 1442695040888963407ull;
  auto next = [&state]() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  };
  std::vector<Morphism<K>> tries = alg.basis;
  for (int t = 0; t < samples && alg.dimension() > 1; ++t) {
    Morphism<K> f;
    f.deg = 0;
    f.mat = Mat<GradedPoly<K>>(m.rank(), m.rank(), GradedPoly<K>(ctx.real()->nvars()));
    for (auto& b : alg.basis) {
      long long c = (long long)(next() % 11) - 5;
      if (!c) continue;
      for (size_t i = 0; i < m.rank(); ++i)
        for (size_t j = 0; j < m.rank(); ++j)
          f.mat(i, j) = f.mat(i, j) + b.mat(i, j).scaled(field_traits<K>::from_int(c, ell));
    }
    tries.push_back(std::move(f));
  }
  for (auto& f : tries) {
    Mat<K> res = residue_matrix(m, f);
    if (res.rows() == 0) continue;
    auto mu = min_poly(res, zero, one);
    if (!power_linear_root(mu, zero, one, ell)) {
      rep.local_split = false;
      rep.nonsplit_detected = true;
      rep.note = "an End0 sample has a non power-linear minimal polynomial";
      break;
    }
  }
  return rep;
}

// One summand split off a flagged object.
template <class K>
struct Summand {
  AffElem label;
  int shift = 0;
  Flagged<K> object;
  bool verified_indecomposable = true;
};

// Decomposition session: builds the indecomposables B_w bottom-up and holds
// the resulting ell-Kazhdan-Lusztig data. Thread-safe for stratum-parallel
// table computation (lower strata must be complete before a stratum starts).
template <class K>
class DecomposeSession {
public:
  DecomposeSession(AbeContext<K> ctx, uint64_t seed) : ctx_(std::move(ctx)), seed_(seed) {}

  const AbeContext<K>& ctx() const { return ctx_; }
  uint64_t seed() const { return seed_; }

  const Flagged<K>& indecomposable(const AffElem& w) {
    ensure(w);
    std::lock_guard<std::mutex> lock(mu_);
    return found_.at(w).obj;
  }
  const HeckeElement& character(const AffElem& w) {
    ensure(w);
    std::lock_guard<std::mutex> lock(mu_);
    return found_.at(w).ch;
  }
  bool has(const AffElem& w) const {
    std::lock_guard<std::mutex> lock(mu_);
    return found_.count(w) > 0;
  }

  // Decompose a Bott-Samelson class object. With skip_top set (internal use)
  // the expansion leaves that label alone and the remainder is returned as
  // the summand labelled by it.
  std::vector<Summand<K>> split(Flagged<K> m, const AffElem* skip_top = nullptr) {
    std::vector<Summand<K>> out;
    // true multiplicities are symmetric in the shift, while the unknown top
    // character pollutes the expansion with strictly positive exponents
    // only; the symmetric filter removes almost every spurious candidate
    peel_loop(m, skip_top, out, /*symmetric_filter=*/true);
    if (!m.ch.is_zero()) {
      if (!skip_top) {
        // external split: exhaust the leftovers with raw counts
        peel_loop(m, skip_top, out, /*symmetric_filter=*/false);
      } else {
        // if the remainder cannot be the top character (negative
        // coefficients or bar asymmetry), retry with the raw counts
        bool suspicious = false;
        for (auto& [y, c] : m.ch.terms())
          if (!c.nonneg_coeffs()) suspicious = true;
        if (!suspicious && !(ctx_.hecke().bar(m.ch) == m.ch)) suspicious = true;
        if (suspicious) peel_loop(m, skip_top, out, /*symmetric_filter=*/false);
      }
    }
    if (!m.ch.is_zero()) {
      Summand<K> s;
      s.label = longest_support(m.ch);
      s.shift = 0;
      s.object = std::move(m);
      out.push_back(std::move(s));
    }
    return out;
  }

  // the Bott-Samelson object of a word
  Flagged<K> bott_samelson(const std::vector<int>& word) {
    Flagged<K> m = ctx_.std_object(ctx_.group()->identity(), 0);
    for (int i : word) m = ctx_.tensor(m, ctx_.bs_generator((size_t)i));
    return m;
  }

  // the character ch(B_w) recomputed by peeling along an arbitrary reduced
  // word of w (for word-independence verification)
  HeckeElement character_via_word(const AffElem& w, const std::vector<int>& word) {
    const WeylGroup& W = *ctx_.group();
    if (word.empty()) return HeckeElement::std_basis(W.identity());
    AffElem prefix = W.identity();
    for (size_t t = 0; t + 1 < word.size(); ++t) prefix = W.mult(prefix, W.gen((size_t)word[t]));
    ensure(prefix);
    Flagged<K> m = ctx_.tensor(indecomposable(prefix), ctx_.bs_generator((size_t)word.back()));
    auto parts = split(std::move(m), &w);
    for (auto& p : parts)
      if (p.label == w) return p.object.ch;
    throw SplitFailure("character_via_word: top summand missing");
  }

  void ensure(const AffElem& w) {
    if (has(w)) return;
    const WeylGroup& W = *ctx_.group();
    if (!W.in_coxeter_part(w))
      throw std::invalid_argument("indecomposables live on W'; apply the omega twist instead");
    long long len = W.length(w);
    if (len == 0) {
      Entry e;
      e.obj = ctx_.std_object(w, 0);
      e.ch = e.obj.ch;
      store(w, std::move(e));
      return;
    }
    auto word = W.lex_word(w);
    size_t last = (size_t)word.back();
    AffElem wp = W.mult(w, W.gen(last));
    ensure(wp);
    Flagged<K> m = ctx_.tensor(indecomposable(wp), ctx_.bs_generator(last));
    auto parts = split(std::move(m), &w);
    for (auto& p : parts) {
      if (p.label == w) {
        if (p.object.rank() == 0)
          throw SplitFailure("ensure: empty top summand for " + W.to_string(w));
        LaurentPoly diag = p.object.ch.coeff(w);
        if (!(diag == LaurentPoly::constant(1)))
          throw SplitFailure("ensure: top coefficient of ch(B_w) is not 1 for " + W.to_string(w));
        Entry e;
        e.ch = p.object.ch;
        e.obj = std::move(p.object);
        store(w, std::move(e));
        return;
      }
    }
    throw SplitFailure("ensure: no summand with top " + W.to_string(w));
  }

private:
  struct Entry {
    Flagged<K> obj;
    HeckeElement ch;
  };

  void peel_loop(Flagged<K>& m, const AffElem* skip_top, std::vector<Summand<K>>& out,
                 bool symmetric_filter) {
    const WeylGroup& W = *ctx_.group();
    std::set<std::pair<AffElem, int>> failed;
    for (;;) {
      if (m.ch.is_zero()) break;
      std::vector<std::tuple<AffElem, int, long long>> cands;
      {
        HeckeElement r = m.ch;
        while (!r.is_zero()) {
          AffElem y = longest_support(r);
          LaurentPoly raw = r.coeff(y);
          if (skip_top && y == *skip_top) {
            r = r - raw * HeckeElement::std_basis(y);
            continue;
          }
          ensure(y);
          if (symmetric_filter) {
            // symmetric part: min(c_k, c_{-k}) per +-k pair
            std::set<int> seen;
            for (auto& [k, cc] : raw.coeffs()) {
              int a = std::abs(k);
              if (seen.count(a)) continue;
              seen.insert(a);
              long long c1 = raw.coeff(a), c2 = raw.coeff(-a);
              long long mcount = a == 0 ? c1 : std::min(c1, c2);
              if (mcount <= 0) continue;
              if (!failed.count({y, a})) cands.emplace_back(y, a, mcount);
              if (a != 0 && !failed.count({y, -a})) cands.emplace_back(y, -a, mcount);
            }
          } else {
            for (auto& [k, cc] : raw.coeffs())
              if (cc > 0 && !failed.count({y, k})) cands.emplace_back(y, k, cc);
          }
          r = r - raw * character_ref(y);
        }
      }
      std::sort(cands.begin(), cands.end(), [&](const auto& a, const auto& b) {
        long long la = W.length(std::get<0>(a)), lb = W.length(std::get<0>(b));
        if (la != lb) return la > lb;
        if (!(std::get<0>(a) == std::get<0>(b))) return std::get<0>(a) < std::get<0>(b);
        return std::get<1>(a) < std::get<1>(b);
      });
      bool progressed = false;
      for (auto& [y, k, count] : cands) {
        long long peeled = 0;
        for (long long c = 0; c < count; ++c) {
          if (try_peel(m, y, k)) {
            Summand<K> s;
            s.label = y;
            s.shift = k;
            s.object = ctx_.shifted(indecomposable(y), k);
            out.push_back(std::move(s));
            ++peeled;
          } else {
            break;
          }
        }
        if (peeled < count) failed.insert({y, k});
        if (peeled) {
          progressed = true;
          break;  // recompute candidates against the smaller object
        }
      }
      if (!progressed) break;
    }
  }

  void store(const AffElem& w, Entry e) {
    std::lock_guard<std::mutex> lock(mu_);
    found_.emplace(w, std::move(e));
  }
  const HeckeElement& character_ref(const AffElem& y) {
    std::lock_guard<std::mutex> lock(mu_);
    return found_.at(y).ch;
  }

  AffElem longest_support(const HeckeElement& h) const {
    const WeylGroup& W = *ctx_.group();
    const AffElem* best = nullptr;
    long long bl = -1;
    for (auto& [w, c] : h.terms()) {
      long long l = W.length(w);
      if (l > bl) {
        bl = l;
        best = &w;
      }
    }
    if (!best) throw std::logic_error("longest_support: zero element");
    return *best;
  }

  // try to split one copy of B_y(k) off m; updates m in place on success
  bool try_peel(Flagged<K>& m, const AffElem& y, int k) {
    Flagged<K> target = ctx_.shifted(indecomposable(y), k);
    auto phis = hom_graded(ctx_, target, m, 0);
    if (phis.empty()) return false;
    auto psis = hom_graded(ctx_, m, target, 0);
    if (psis.empty()) return false;
    auto attempt = [&](const Morphism<K>& phi, const Morphism<K>& psi) -> bool {
      Morphism<K> u = compose(psi, phi);
      auto uinv = invert_morphism(ctx_, target, u);
      if (!uinv) return false;
      Morphism<K> proj = compose(*uinv, psi);
      Morphism<K> keep = identity_morphism(ctx_, m);
      Morphism<K> pk = compose(phi, proj);
      for (size_t a = 0; a < keep.mat.rows(); ++a)
        for (size_t b = 0; b < keep.mat.cols(); ++b)
          keep.mat(a, b) = keep.mat(a, b) - pk.mat(a, b);
      HeckeElement ch_keep = m.ch - LaurentPoly::v_pow(k) * character_ref(y);
      auto ext = extract_image(ctx_, m, keep, ch_keep);
      m = std::move(ext.object);
      return true;
    };
    for (auto& psi : psis)
      for (auto& phi : phis)
        if (attempt(phi, psi)) return true;
    // seeded random combinations as a fallback (retry budget 16)
    uint64_t state = seed_ * 0x9e3779b97f4a7c15ull + 12345;
    auto next = [&state]() {
      state ^= state << 13;
      state ^= state >> 7;
      state ^= state << 17;
      return state;
    };
    uint32_t ell = ctx_.real()->field().ell;
    auto combine = [&](const std::vector<Morphism<K>>& basis) {
      Morphism<K> f = basis[0];
      for (size_t a = 0; a < f.mat.rows(); ++a)
        for (size_t b = 0; b < f.mat.cols(); ++b) f.mat(a, b) = GradedPoly<K>(ctx_.real()->nvars());
      for (auto& g : basis) {
        long long c = (long long)(next() % 7) - 3;
        if (!c) continue;
        for (size_t a = 0; a < f.mat.rows(); ++a)
          for (size_t b = 0; b < f.mat.cols(); ++b)
            f.mat(a, b) = f.mat(a, b) + g.mat(a, b).scaled(field_traits<K>::from_int(c, ell));
      }
      return f;
    };
    for (int trial = 0; trial < 16; ++trial)
      if (attempt(combine(phis), combine(psis))) return true;
    return false;
  }

  AbeContext<K> ctx_;
  uint64_t seed_;
  std::map<AffElem, Entry> found_;
  mutable std::mutex mu_;
};

// ell-KL table on W' up to the length bound.
struct LklTable {
  std::string cartan_label;
  FieldSpec field;
  long long bound = 0;
  uint64_t seed = 0;
  std::map<std::pair<AffElem, AffElem>, LaurentPoly> entries;
  std::vector<AffElem> elements;  // ball order: length then lex word

  LaurentPoly entry(const AffElem& y, const AffElem& w) const {
    auto it = entries.find({y, w});
    return it == entries.end() ? LaurentPoly() : it->second;
  }
};

template <class K>
LklTable lkl_table(DecomposeSession<K>& session, const std::string& label, long long bound,
                   int workers = 1) {
  const WeylGroupPtr& W = session.ctx().group();
  auto ball = W->coxeter_ball(bound);
  LklTable table;
  table.cartan_label = label;
  table.field = session.ctx().real()->field();
  table.bound = bound;
  table.seed = session.seed();
  table.elements = ball.elems;
  std::map<long long, std::vector<size_t>> strata;
  for (size_t i = 0; i < ball.elems.size(); ++i) strata[ball.lengths[i]].push_back(i);
  for (auto& [len, idxs] : strata) {
    if (workers > 1 && idxs.size() > 1) {
      std::atomic<size_t> cursor{0};
      std::vector<std::thread> pool;
      std::vector<std::exception_ptr> errors((size_t)workers);
      for (int t = 0; t < workers; ++t)
        pool.emplace_back([&, t] {
          try {
            for (;;) {
              size_t at = cursor.fetch_add(1);
              if (at >= idxs.size()) break;
              session.ensure(ball.elems[idxs[at]]);
            }
          } catch (...) {
            errors[(size_t)t] = std::current_exception();
          }
        });
      for (auto& th : pool) th.join();
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    } else {
      for (size_t i : idxs) session.ensure(ball.elems[i]);
    }
  }
  for (const auto& w : ball.elems) {
    const HeckeElement& ch = session.character(w);
    for (auto& [y, c] : ch.terms()) table.entries[{y, w}] = c;
  }
  return table;
}

// tilting multiplicities: entries evaluated at v = 1
inline std::map<std::pair<AffElem, AffElem>, long long> tilting_table(const LklTable& t) {
  std::map<std::pair<AffElem, AffElem>, long long> out;
  for (auto& [key, p] : t.entries) out[key] = p.eval_at_one();
  return out;
}

// Hom-formula comparison: rank_R Hom(B_w, B_y) against the character sum
struct HomFormulaReport {
  long long rank = 0;
  long long char_sum = 0;
  bool equal = false;
  bool window_complete = false;
};

template <class K>
HomFormulaReport hom_dimension_check(DecomposeSession<K>& session, const AffElem& w,
                                     const AffElem& y) {
  const Flagged<K>& bw = session.indecomposable(w);
  const Flagged<K>& by = session.indecomposable(y);
  HomFormulaReport rep;
  std::map<AffElem, long long> cw, cy;
  for (auto& [z, p] : session.character(w).terms()) cw[z] = p.eval_at_one();
  for (auto& [z, p] : session.character(y).terms()) cy[z] = p.eval_at_one();
  for (auto& [z, a] : cw) {
    auto it = cy.find(z);
    if (it != cy.end()) rep.char_sum += a * it->second;
  }
  auto hr = hom_total_rank(session.ctx(), bw, by);
  rep.rank = hr.rank;
  rep.window_complete = hr.complete;
  rep.equal = (rep.rank == rep.char_sum);
  return rep;
}

}  // namespace affkl
