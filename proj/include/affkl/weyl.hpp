#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "affkl/root_datum.hpp"

namespace affkl {

// Enumerated finite Weyl group. Elements are indexed; index 0 is the identity.
class FiniteWeyl {
public:
  explicit FiniteWeyl(RootDatumPtr datum);

  size_t size() const { return mats_.size(); }
  const RootDatumPtr& datum() const { return datum_; }
  // action on X^*(T)
  const IntMat& matrix(size_t id) const { return mats_[id]; }
  // contragredient action on X_*(T)
  const IntMat& comatrix(size_t id) const { return comats_[id]; }
  size_t mult(size_t a, size_t b) const { return mult_(a, b); }
  size_t inverse(size_t a) const { return inv_[a]; }
  size_t simple(size_t i) const { return simple_[i]; }
  const std::vector<int>& word(size_t id) const { return words_[id]; }
  size_t length(size_t id) const { return words_[id].size(); }
  size_t longest() const { return longest_; }

  IntVec apply(size_t id, const IntVec& lambda) const { return mat_apply(mats_[id], lambda); }
  IntVec coapply(size_t id, const IntVec& mu) const { return mat_apply(comats_[id], mu); }

private:
  size_t mult_(size_t a, size_t b) const { return mult_table_[a * size() + b]; }
  RootDatumPtr datum_;
  std::vector<IntMat> mats_, comats_;
  std::vector<std::vector<int>> words_;
  std::vector<size_t> simple_, inv_;
  std::vector<size_t> mult_table_;
  size_t longest_ = 0;
};

class WeylGroup;
using WeylGroupPtr = std::shared_ptr<const WeylGroup>;

// Element of the extended affine Weyl group, stored as v * t(lambda).
struct AffElem {
  size_t fin = 0;
  IntVec lam;
  bool operator==(const AffElem& o) const { return fin == o.fin && lam == o.lam; }
  bool operator!=(const AffElem& o) const { return !(*this == o); }
  bool operator<(const AffElem& o) const {
    if (fin != o.fin) return fin < o.fin;
    return lam < o.lam;
  }
};

struct AffElemHash {
  size_t operator()(const AffElem& e) const {
    size_t h = e.fin * 1000003u;
    for (long long x : e.lam) h = h * 1099511628211ull + (size_t)(x + 0x7fff);
    return h;
  }
};

struct IncomparableError : std::runtime_error {
  IncomparableError() : std::runtime_error("Bruhat order: elements lie in distinct Omega cosets") {}
};

// The extended affine Weyl group W = W_f x| X^*(T) with its Coxeter structure
// on W' and the length-zero subgroup Omega.
class WeylGroup : public std::enable_shared_from_this<WeylGroup> {
public:
  static WeylGroupPtr create(RootDatumPtr datum);
  static WeylGroupPtr create(const std::string& label) { return create(RootDatum::build(label)); }

  const RootDatumPtr& datum() const { return datum_; }
  const FiniteWeyl& finite() const { return *fin_; }

  AffElem identity() const { return AffElem{0, IntVec(datum_->lattice_rank(), 0)}; }
  AffElem translation(const IntVec& lambda) const { return AffElem{0, lambda}; }
  AffElem finite_elem(size_t id) const { return AffElem{id, IntVec(datum_->lattice_rank(), 0)}; }

  AffElem mult(const AffElem& a, const AffElem& b) const;
  AffElem inverse(const AffElem& a) const;
  AffElem conjugate(const AffElem& g, const AffElem& x) const {  // g x g^{-1}
    return mult(mult(g, x), inverse(g));
  }
  IntVec act_weight(const AffElem& a, const IntVec& lambda) const {  // image of t(lambda) part
    return fin_->apply(a.fin, lambda);
  }

  // Coxeter generators of W': finite simples then one affine generator per
  // component (t(beta) s_beta for beta the maximal short root)
  size_t num_gens() const { return gens_.size(); }
  size_t num_finite_gens() const { return datum_->ss_rank(); }
  const AffElem& gen(size_t i) const { return gens_[i]; }
  const std::vector<AffElem>& gens() const { return gens_; }

  long long length(const AffElem& w) const;
  bool in_coxeter_part(const AffElem& w) const;  // W' membership
  AffElem from_word(const std::vector<int>& word) const;
  // lex-least reduced word of an element of W'
  std::vector<int> lex_word(const AffElem& w) const;

  // Omega handling
  IntVec omega_class(const AffElem& w) const { return datum_->class_coords(w.lam); }
  // the unique length-zero element in the given class (throws if none)
  AffElem omega_rep(const IntVec& cls) const;
  // decomposition w = omega * w' with w' in W'
  std::pair<AffElem, AffElem> coset_split(const AffElem& w) const;
  // all length-zero elements with translation part in the box |lam_i| <= box
  std::vector<AffElem> omega_window(long long box) const;

  // Bruhat order (same Omega coset; throws IncomparableError otherwise)
  bool bruhat_leq(const AffElem& y, const AffElem& w) const;
  // test against an explicit reduced word of the W' part of w
  bool bruhat_leq_via_word(const AffElem& y_cox, const std::vector<int>& word_of_w) const;

  // BFS enumeration of the ball {w in W' : l(w) <= bound}, ordered by
  // (length, lex word)
  struct Ball {
    std::vector<AffElem> elems;
    std::vector<std::vector<int>> words;
    std::vector<long long> lengths;
    std::unordered_map<AffElem, size_t, AffElemHash> index;
  };
  Ball coxeter_ball(long long bound) const;

  // Lemma-style datum for an affine simple reflection: (w, s') with
  // s = w s' w^{-1} and l(w s') = l(w) + 1; deterministic and cached.
  std::pair<AffElem, size_t> conjugation_datum(size_t affine_gen_index,
                                               long long search_bound = 10) const;

  std::string to_string(const AffElem& w) const;
  AffElem parse(const std::string& s) const;

  // all reduced words of an element of W' (for word-independence checks)
  std::vector<std::vector<int>> all_reduced_words(const AffElem& w) const;

private:
  explicit WeylGroup(RootDatumPtr datum);
  RootDatumPtr datum_;
  std::unique_ptr<FiniteWeyl> fin_;
  std::vector<AffElem> gens_;
  // generator data: finite part id and translation
  mutable std::map<IntVec, std::optional<AffElem>> omega_cache_;
  mutable std::map<size_t, std::pair<AffElem, size_t>> conj_cache_;
  mutable std::mutex cache_mu_;
};

}  // namespace affkl
