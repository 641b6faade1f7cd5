#include "affkl/weyl.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace affkl {

FiniteWeyl::FiniteWeyl(RootDatumPtr datum) : datum_(std::move(datum)) {
  size_t n = datum_->lattice_rank(), r = datum_->ss_rank();
  // matrices of the simple reflections on X^*: s_i(l) = l - <l, a_i^vee> a_i
  std::vector<IntMat> gen_mats;
  for (size_t i = 0; i < r; ++i) {
    IntMat m = mat_identity_int(n);
    for (size_t col = 0; col < n; ++col) {
      IntVec e(n, 0);
      e[col] = 1;
      IntVec img = vec_sub(e, vec_scale(datum_->simple_root(i), dot(e, datum_->simple_coroot(i))));
      for (size_t row = 0; row < n; ++row) m[row][col] = img[row];
    }
    gen_mats.push_back(m);
  }
  // BFS closure; lex-least words by level order with ascending generators
  std::map<IntMat, size_t> index;
  mats_.push_back(mat_identity_int(n));
  words_.push_back({});
  index[mats_[0]] = 0;
  size_t head = 0;
  while (head < mats_.size()) {
    IntMat cur = mats_[head];
    std::vector<int> wcur = words_[head];
    for (size_t i = 0; i < r; ++i) {
      IntMat nxt = mat_mul_int(cur, gen_mats[i]);  // right multiplication
      if (!index.count(nxt)) {
        index[nxt] = mats_.size();
        mats_.push_back(nxt);
        std::vector<int> w = wcur;
        w.push_back((int)i);
        words_.push_back(w);
      }
    }
    ++head;
  }
  // simple ids, inverses, mult table, comatrices
  simple_.resize(r);
  for (size_t i = 0; i < r; ++i) simple_[i] = index.at(gen_mats[i]);
  size_t N = mats_.size();
  mult_table_.assign(N * N, 0);
  for (size_t a = 0; a < N; ++a)
    for (size_t b = 0; b < N; ++b) mult_table_[a * N + b] = index.at(mat_mul_int(mats_[a], mats_[b]));
  inv_.resize(N);
  for (size_t a = 0; a < N; ++a)
    for (size_t b = 0; b < N; ++b)
      if (mult_table_[a * N + b] == 0) inv_[a] = b;
  comats_.resize(N);
  for (size_t a = 0; a < N; ++a) comats_[a] = mat_transpose_int(mats_[inv_[a]]);
  for (size_t a = 0; a < N; ++a)
    if (words_[a].size() > words_[longest_].size()) longest_ = a;
}

WeylGroup::WeylGroup(RootDatumPtr datum) : datum_(std::move(datum)) {
  fin_ = std::make_unique<FiniteWeyl>(datum_);
  size_t r = datum_->ss_rank();
  for (size_t i = 0; i < r; ++i) gens_.push_back(finite_elem(fin_->simple(i)));
  // affine generator t(beta) s_beta per component (unique here)
  for (const auto& beta : datum_->max_short_roots()) {
    // s_beta as finite element: reflection matrix l -> l - <l, beta^vee> beta
    size_t n = datum_->lattice_rank();
    IntMat m = mat_identity_int(n);
    for (size_t col = 0; col < n; ++col) {
      IntVec e(n, 0);
      e[col] = 1;
      IntVec img = vec_sub(e, vec_scale(beta.root, dot(e, beta.coroot)));
      for (size_t row = 0; row < n; ++row) m[row][col] = img[row];
    }
    size_t id = SIZE_MAX;
    for (size_t a = 0; a < fin_->size(); ++a)
      if (fin_->matrix(a) == m) { id = a; break; }
    if (id == SIZE_MAX) throw std::logic_error("affine generator: reflection not in W_f");
    // t(beta) s_beta = s_beta t(s_beta^{-1} beta) = s_beta t(-beta)
    gens_.push_back(AffElem{id, vec_neg(beta.root)});
  }
}

WeylGroupPtr WeylGroup::create(RootDatumPtr datum) {
  return WeylGroupPtr(new WeylGroup(std::move(datum)));
}

AffElem WeylGroup::mult(const AffElem& a, const AffElem& b) const {
  // (v1 t(l1)) (v2 t(l2)) = v1 v2 t(v2^{-1} l1 + l2)
  size_t v = fin_->mult(a.fin, b.fin);
  IntVec lam = vec_add(fin_->apply(fin_->inverse(b.fin), a.lam), b.lam);
  return AffElem{v, lam};
}

AffElem WeylGroup::inverse(const AffElem& a) const {
  size_t v = fin_->inverse(a.fin);
  return AffElem{v, vec_neg(fin_->apply(a.fin, a.lam))};
}

long long WeylGroup::length(const AffElem& w) const {
  long long total = 0;
  for (const auto& pr : datum_->positive_roots()) {
    long long pairing = dot(w.lam, pr.coroot);
    IntVec img = fin_->apply(w.fin, pr.root);
    // sign of w(alpha): positive iff expansion in simple roots nonnegative
    bool img_positive = datum_->dominance_leq(IntVec(img.size(), 0), img);
    if (img_positive)
      total += std::llabs(pairing);
    else
      total += std::llabs(pairing + 1);
  }
  return total;
}

bool WeylGroup::in_coxeter_part(const AffElem& w) const {
  return omega_class(w) == datum_->class_coords(IntVec(datum_->lattice_rank(), 0));
}

AffElem WeylGroup::from_word(const std::vector<int>& word) const {
  AffElem x = identity();
  for (int i : word) x = mult(x, gens_.at((size_t)i));
  return x;
}

std::vector<int> WeylGroup::lex_word(const AffElem& w) const {
  if (!in_coxeter_part(w)) throw std::logic_error("lex_word: element not in W'");
  std::vector<int> word;
  AffElem x = w;
  long long len = length(x);
  while (len > 0) {
    bool found = false;
    for (size_t i = 0; i < gens_.size(); ++i) {
      AffElem sx = mult(gens_[i], x);
      long long l2 = length(sx);
      if (l2 < len) {
        word.push_back((int)i);
        x = sx;
        len = l2;
        found = true;
        break;
      }
    }
    if (!found) throw std::logic_error("lex_word: no descent found");
  }
  return word;
}

AffElem WeylGroup::omega_rep(const IntVec& cls) const {
  {
    std::lock_guard<std::mutex> lock(cache_mu_);
    auto it = omega_cache_.find(cls);
    if (it != omega_cache_.end()) {
      if (!it->second) throw std::domain_error("omega_rep: class has no length-zero element");
      return *it->second;
    }
  }
  size_t n = datum_->lattice_rank();
  const auto& pos = datum_->positive_roots();
  std::optional<AffElem> found;
  for (size_t v = 0; v < fin_->size() && !found; ++v) {
    // constraints: <lam, a^vee> = 0 if v(a) > 0, else -1
    IntMat A;
    IntVec b;
    for (const auto& pr : pos) {
      IntVec img = fin_->apply(v, pr.root);
      bool img_pos = datum_->dominance_leq(IntVec(n, 0), img);
      A.push_back(pr.coroot);
      b.push_back(img_pos ? 0 : -1);
    }
    auto sol = solve_integer(A, b);
    if (!sol) continue;
    // among lam0 + central lattice, match the requested class
    const auto& central = datum_->central_lattice();
    // unknowns: t (central coefficients) and k (torsion multipliers)
    IntVec base_cls = datum_->class_coords(sol->particular);
    if (central.empty()) {
      if (base_cls == cls) found = AffElem{v, sol->particular};
      continue;
    }
    // classes are linear in t on the free part and affine mod d on torsion;
    // search a modest box exactly (class growth is linear, box is ample)
    long long box = 6;
    size_t tdim = central.size();
    std::vector<long long> t(tdim, -box);
    while (true) {
      IntVec lam = sol->particular;
      for (size_t i = 0; i < tdim; ++i) lam = vec_add(lam, vec_scale(central[i], t[i]));
      if (datum_->class_coords(lam) == cls) { found = AffElem{v, lam}; break; }
      size_t p = 0;
      while (p < tdim && t[p] == box) { t[p] = -box; ++p; }
      if (p == tdim) break;
      ++t[p];
    }
  }
  {
    std::lock_guard<std::mutex> lock(cache_mu_);
    omega_cache_[cls] = found;
  }
  if (!found) throw std::domain_error("omega_rep: class has no length-zero element");
  return *found;
}

std::pair<AffElem, AffElem> WeylGroup::coset_split(const AffElem& w) const {
  AffElem om = omega_rep(omega_class(w));
  AffElem wp = mult(inverse(om), w);
  return {om, wp};
}

std::vector<AffElem> WeylGroup::omega_window(long long box) const {
  std::vector<AffElem> out;
  size_t n = datum_->lattice_rank();
  // solve per finite part as in omega_rep, then collect translates in the box
  for (size_t v = 0; v < fin_->size(); ++v) {
    IntMat A;
    IntVec b;
    for (const auto& pr : datum_->positive_roots()) {
      IntVec img = fin_->apply(v, pr.root);
      bool img_pos = datum_->dominance_leq(IntVec(n, 0), img);
      A.push_back(pr.coroot);
      b.push_back(img_pos ? 0 : -1);
    }
    auto sol = solve_integer(A, b);
    if (!sol) continue;
    const auto& central = datum_->central_lattice();
    size_t tdim = central.size();
    std::vector<long long> t(tdim, -box - 2);
    while (true) {
      IntVec lam = sol->particular;
      for (size_t i = 0; i < tdim; ++i) lam = vec_add(lam, vec_scale(central[i], t[i]));
      bool inside = std::all_of(lam.begin(), lam.end(),
                                [&](long long x) { return std::llabs(x) <= box; });
      if (inside) out.push_back(AffElem{v, lam});
      if (tdim == 0) break;
      size_t p = 0;
      while (p < tdim && t[p] == box + 2) { t[p] = -box - 2; ++p; }
      if (p == tdim) break;
      ++t[p];
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool WeylGroup::bruhat_leq_via_word(const AffElem& y_cox, const std::vector<int>& word_of_w) const {
  // subword dynamic programming: S_i = S_{i-1} u S_{i-1} * s_i
  std::set<AffElem> cur{identity()};
  for (int i : word_of_w) {
    std::set<AffElem> nxt = cur;
    for (const auto& z : cur) nxt.insert(mult(z, gens_.at((size_t)i)));
    cur = std::move(nxt);
  }
  return cur.count(y_cox) > 0;
}

bool WeylGroup::bruhat_leq(const AffElem& y, const AffElem& w) const {
  if (omega_class(y) != omega_class(w)) throw IncomparableError();
  auto [omy, yp] = coset_split(y);
  auto [omw, wp] = coset_split(w);
  if (length(yp) > length(wp)) return false;
  return bruhat_leq_via_word(yp, lex_word(wp));
}

WeylGroup::Ball WeylGroup::coxeter_ball(long long bound) const {
  Ball ball;
  auto push = [&](const AffElem& e, const std::vector<int>& w) {
    ball.index[e] = ball.elems.size();
    ball.elems.push_back(e);
    ball.words.push_back(w);
    ball.lengths.push_back((long long)w.size());
  };
  push(identity(), {});
  size_t level_begin = 0;
  for (long long len = 1; len <= bound; ++len) {
    size_t level_end = ball.elems.size();
    for (size_t idx = level_begin; idx < level_end; ++idx) {
      AffElem parent = ball.elems[idx];
      for (size_t i = 0; i < gens_.size(); ++i) {
        AffElem child = mult(parent, gens_[i]);
        if (ball.index.count(child)) continue;
        if (length(child) != len) continue;
        auto w = ball.words[idx];
        w.push_back((int)i);
        push(child, w);
      }
    }
    level_begin = level_end;
  }
  return ball;
}

std::pair<AffElem, size_t> WeylGroup::conjugation_datum(size_t affine_gen_index,
                                                        long long search_bound) const {
  {
    std::lock_guard<std::mutex> lock(cache_mu_);
    auto it = conj_cache_.find(affine_gen_index);
    if (it != conj_cache_.end()) return it->second;
  }
  if (affine_gen_index < num_finite_gens() || affine_gen_index >= gens_.size())
    throw std::invalid_argument("conjugation_datum: not an affine generator index");
  AffElem s = gens_[affine_gen_index];
  Ball ball = coxeter_ball(search_bound);
  std::vector<AffElem> omegas = omega_window(3);
  std::sort(omegas.begin(), omegas.end(), [&](const AffElem& a, const AffElem& b) {
    return datum_->class_coords(a.lam) < datum_->class_coords(b.lam);
  });
  for (size_t idx = 0; idx < ball.elems.size(); ++idx) {
    for (const auto& om : omegas) {
      AffElem w = mult(om, ball.elems[idx]);
      for (size_t sp = 0; sp < num_finite_gens(); ++sp) {
        if (conjugate(w, gens_[sp]) == s && length(mult(w, gens_[sp])) == length(w) + 1) {
          auto result = std::make_pair(w, sp);
          std::lock_guard<std::mutex> lock(cache_mu_);
          conj_cache_[affine_gen_index] = result;
          return result;
        }
      }
    }
  }
  throw std::runtime_error(
      "conjugation_datum: search exhausted; increase the bound (or the datum lacks the "
      "required weights)");
}

std::string WeylGroup::to_string(const AffElem& w) const {
  auto [om, wp] = coset_split(w);
  IntVec cls = omega_class(w);
  std::ostringstream os;
  for (size_t i = 0; i < cls.size(); ++i) {
    if (i) os << ",";
    os << cls[i];
  }
  os << ":";
  auto word = lex_word(wp);
  if (word.empty()) {
    os << "e";
  } else {
    for (size_t i = 0; i < word.size(); ++i) {
      if (i) os << ".";
      os << word[i];
    }
  }
  return os.str();
}

AffElem WeylGroup::parse(const std::string& s) const {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("parse: missing ':' in " + s);
  std::string clspart = s.substr(0, colon), wordpart = s.substr(colon + 1);
  IntVec cls;
  {
    std::istringstream is(clspart);
    std::string tok;
    while (std::getline(is, tok, ',')) cls.push_back(std::stoll(tok));
  }
  if (cls.size() != datum_->lattice_rank()) throw std::invalid_argument("parse: class arity");
  std::vector<int> word;
  if (wordpart != "e" && !wordpart.empty()) {
    std::istringstream is(wordpart);
    std::string tok;
    while (std::getline(is, tok, '.')) word.push_back(std::stoi(tok));
  }
  AffElem om = omega_rep(cls);
  return mult(om, from_word(word));
}

std::vector<std::vector<int>> WeylGroup::all_reduced_words(const AffElem& w) const {
  long long len = length(w);
  if (len == 0) return w == identity() ? std::vector<std::vector<int>>{{}}
                                       : std::vector<std::vector<int>>{};
  std::vector<std::vector<int>> out;
  for (size_t i = 0; i < gens_.size(); ++i) {
    AffElem ws = mult(w, gens_[i]);
    if (length(ws) == len - 1) {
      for (auto sub : all_reduced_words(ws)) {
        sub.push_back((int)i);
        out.push_back(std::move(sub));
      }
    }
  }
  return out;
}

}  // namespace affkl
