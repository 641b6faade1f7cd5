#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "affkl/field.hpp"
#include "affkl/weyl.hpp"

namespace affkl {

using Expo = std::vector<int>;

// Multivariate polynomial over K in a fixed number of variables. The
// variables form a basis of t, placed in degree 2; the stored exponent sum
// is half the graded degree.
template <class K>
class GradedPoly {
public:
  GradedPoly() : nv_(0) {}
  explicit GradedPoly(size_t nv) : nv_(nv) {}

  static GradedPoly constant(size_t nv, const K& c) {
    GradedPoly p(nv);
    if (!c.is_zero()) p.t_[Expo(nv, 0)] = c;
    return p;
  }
  static GradedPoly variable(size_t nv, size_t i, const K& one) {
    GradedPoly p(nv);
    Expo e(nv, 0);
    e[i] = 1;
    p.t_[e] = one;
    return p;
  }
  static GradedPoly linear(const std::vector<K>& coeffs) {
    GradedPoly p(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i) {
      if (coeffs[i].is_zero()) continue;
      Expo e(coeffs.size(), 0);
      e[i] = 1;
      p.t_[e] = coeffs[i];
    }
    return p;
  }

  size_t nvars() const { return nv_; }
  bool is_zero() const { return t_.empty(); }
  const std::map<Expo, K>& terms() const { return t_; }
  size_t term_count() const { return t_.size(); }

  void add_term(const Expo& e, const K& c) {
    if (c.is_zero()) return;
    if (nv_ == 0 && !e.empty()) nv_ = e.size();  // adopt arity (default zero)
    auto it = t_.find(e);
    if (it == t_.end()) {
      t_[e] = c;
    } else {
      it->second += c;
      if (it->second.is_zero()) t_.erase(it);
    }
  }
  K coeff(const Expo& e) const {
    auto it = t_.find(e);
    return it == t_.end() ? K() : it->second;
  }

  friend GradedPoly operator+(const GradedPoly& a, const GradedPoly& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    GradedPoly r = a;
    for (auto& [e, c] : b.t_) r.add_term(e, c);
    return r;
  }
  friend GradedPoly operator-(const GradedPoly& a, const GradedPoly& b) {
    if (b.is_zero()) return a;
    GradedPoly r = a;
    if (r.nv_ == 0) r.nv_ = b.nv_;
    for (auto& [e, c] : b.t_) r.add_term(e, -c);
    return r;
  }
  friend GradedPoly operator*(const GradedPoly& a, const GradedPoly& b) {
    GradedPoly r(std::max(a.nv_, b.nv_));
    for (auto& [e1, c1] : a.t_)
      for (auto& [e2, c2] : b.t_) {
        Expo e(e1);
        for (size_t i = 0; i < e.size(); ++i) e[i] += e2[i];
        r.add_term(e, c1 * c2);
      }
    return r;
  }
  GradedPoly operator-() const {
    GradedPoly r(nv_);
    for (auto& [e, c] : t_) r.t_[e] = -c;
    return r;
  }
  GradedPoly scaled(const K& c) const {
    GradedPoly r(nv_);
    if (c.is_zero()) return r;
    for (auto& [e, cc] : t_) r.t_[e] = cc * c;
    return r;
  }
  bool operator==(const GradedPoly& o) const { return nv_ == o.nv_ && t_ == o.t_; }
  bool operator!=(const GradedPoly& o) const { return !(*this == o); }

  // graded degree (2 * exponent sum); polynomials here are kept homogeneous
  // wherever a degree is consulted
  std::optional<int> homogeneous_degree() const {
    if (t_.empty()) return std::nullopt;
    int d = -1;
    for (auto& [e, c] : t_) {
      int s = 0;
      for (int x : e) s += x;
      if (d == -1) d = s;
      else if (d != s) throw std::logic_error("GradedPoly: inhomogeneous degree query");
    }
    return 2 * d;
  }
  int total_exp_max() const {
    int m = 0;
    for (auto& [e, c] : t_) {
      int s = 0;
      for (int x : e) s += x;
      m = std::max(m, s);
    }
    return m;
  }

  bool is_constant() const {
    return t_.empty() || (t_.size() == 1 && t_.begin()->first == Expo(nv_, 0));
  }
  K constant_value() const {
    return t_.empty() ? K() : t_.begin()->second;
  }
  const K& leading_coeff() const { return t_.rbegin()->second; }
  const Expo& leading_expo() const { return t_.rbegin()->first; }

  // exact division; nullopt when not divisible
  std::optional<GradedPoly> divided_by(const GradedPoly& d) const {
    if (d.is_zero()) throw std::domain_error("GradedPoly: division by zero");
    GradedPoly r = *this, q(nv_);
    const Expo& dl = d.leading_expo();
    const K& dc = d.leading_coeff();
    while (!r.is_zero()) {
      const Expo& rl = r.leading_expo();
      Expo e(nv_, 0);
      for (size_t i = 0; i < nv_; ++i) {
        e[i] = rl[i] - dl[i];
        if (e[i] < 0) return std::nullopt;
      }
      K c = r.leading_coeff() / dc;
      GradedPoly t(nv_);
      t.t_[e] = c;
      q = q + t;
      r = r - t * d;
      // leading term strictly decreases in the map order, so this stops
    }
    return q;
  }

  // linear substitution of variables: x_i -> sum_j m[j][i] x_j
  GradedPoly substituted(const std::vector<std::vector<K>>& m, const K& one) const {
    std::vector<GradedPoly> images;
    for (size_t i = 0; i < nv_; ++i) {
      std::vector<K> col(nv_, K());
      for (size_t j = 0; j < nv_; ++j) col[j] = m[j][i];
      images.push_back(GradedPoly::linear(col));
    }
    GradedPoly out(nv_);
    for (auto& [e, c] : t_) {
      GradedPoly term = GradedPoly::constant(nv_, c);
      for (size_t i = 0; i < nv_; ++i)
        for (int k = 0; k < e[i]; ++k) term = term * images[i];
      out = out + term;
    }
    (void)one;
    return out;
  }

  std::string str(const std::vector<std::string>& names = {}) const {
    if (t_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [e, c] : t_) {
      if (!first) os << " + ";
      first = false;
      os << c.str();
      for (size_t i = 0; i < nv_; ++i) {
        if (e[i] == 0) continue;
        os << "*" << (i < names.size() ? names[i] : "x" + std::to_string(i));
        if (e[i] != 1) os << "^" << e[i];
      }
    }
    return os.str();
  }

private:
  std::map<Expo, K> t_;
  size_t nv_;
};

struct RealizationError : std::runtime_error {
  explicit RealizationError(const std::string& msg) : std::runtime_error(msg) {}
};

// The graded realization on t = k (x) X_*(T): roots alpha_s in t, coroot
// functionals on t, and for each finite generator a chosen delta_s with
// pairing 1. The W-action on R = O(t*) factors through W_f.
template <class K>
class Realization {
public:
  Realization(WeylGroupPtr group, FieldSpec field) : w_(std::move(group)), field_(field) {
    const auto& datum = *w_->datum();
    nv_ = datum.lattice_rank();
    size_t nfin = w_->num_finite_gens();
    // action matrices of W_f on t (contragredient of the X^* action)
    const FiniteWeyl& fw = w_->finite();
    for (size_t a = 0; a < fw.size(); ++a) {
      std::vector<std::vector<K>> m(nv_, std::vector<K>(nv_, K()));
      const IntMat& im = fw.comatrix(a);
      for (size_t i = 0; i < nv_; ++i)
        for (size_t j = 0; j < nv_; ++j) m[i][j] = from_int(im[i][j]);
      tmats_.push_back(std::move(m));
    }
    // faithfulness of W_f on t (needed for the W-graded decompositions)
    for (size_t a = 0; a < fw.size(); ++a)
      for (size_t b = a + 1; b < fw.size(); ++b)
        if (tmats_[a] == tmats_[b])
          throw RealizationError("realization degenerate: W_f does not act faithfully on t over " +
                                 field_.str());

    for (size_t i = 0; i < w_->num_gens(); ++i) {
      std::vector<K> av(nv_, K()), ac(nv_, K());
      size_t refl;
      if (i < nfin) {
        for (size_t k = 0; k < nv_; ++k) {
          av[k] = from_int(datum.simple_coroot(i)[k]);
          ac[k] = from_int(datum.simple_root(i)[k]);
        }
        refl = fw.simple(i);
      } else {
        const PosRoot& beta = datum.max_short_roots()[i - nfin];
        for (size_t k = 0; k < nv_; ++k) {
          av[k] = -from_int(beta.coroot[k]);
          ac[k] = -from_int(beta.root[k]);
        }
        refl = w_->gen(i).fin;
      }
      bool av_zero = std::all_of(av.begin(), av.end(), [](const K& x) { return x.is_zero(); });
      if (av_zero)
        throw RealizationError("realization degenerate: alpha_s = 0 for generator " +
                               std::to_string(i) + " over " + field_.str());
      alpha_.push_back(GradedPoly<K>::linear(av));
      alpha_vec_.push_back(av);
      alpha_check_.push_back(ac);
      refl_.push_back(refl);
      if (i < nfin) {
        // delta with <d(alpha), delta> = 1: first index with invertible entry
        std::vector<K> delta(nv_, K());
        bool ok = false;
        for (size_t k = 0; k < nv_; ++k) {
          if (!ac[k].is_zero()) {
            delta[k] = one() / ac[k];
            ok = true;
            break;
          }
        }
        if (!ok)
          throw RealizationError("realization degenerate: no delta_s for generator " +
                                 std::to_string(i) + " over " + field_.str() +
                                 " (d(alpha) vanishes)");
        delta_.push_back(delta);
      }
    }
    // registry of W_f-translates of the alpha_s (monic-normalized)
    for (size_t i = 0; i < alpha_vec_.size(); ++i)
      for (size_t a = 0; a < fw.size(); ++a) {
        std::vector<K> img = apply_t(a, alpha_vec_[i]);
        normalize_form(img);
        if (std::find(forms_.begin(), forms_.end(), img) == forms_.end()) forms_.push_back(img);
      }
    std::sort(forms_.begin(), forms_.end());
  }

  const WeylGroupPtr& group() const { return w_; }
  FieldSpec field() const { return field_; }
  size_t nvars() const { return nv_; }
  K zero() const { return field_traits<K>::zero(field_.ell); }
  K one() const { return field_traits<K>::one(field_.ell); }
  K from_int(long long v) const { return field_traits<K>::from_int(v, field_.ell); }

  const GradedPoly<K>& alpha(size_t i) const { return alpha_[i]; }
  const std::vector<K>& alpha_vec(size_t i) const { return alpha_vec_[i]; }
  const std::vector<K>& alpha_check(size_t i) const { return alpha_check_[i]; }
  const std::vector<K>& delta(size_t i) const { return delta_.at(i); }
  GradedPoly<K> delta_poly(size_t i) const { return GradedPoly<K>::linear(delta_.at(i)); }
  size_t reflection_fin(size_t i) const { return refl_[i]; }

  std::vector<K> apply_t(size_t fin_id, const std::vector<K>& v) const {
    std::vector<K> out(nv_, K());
    for (size_t i = 0; i < nv_; ++i)
      for (size_t j = 0; j < nv_; ++j)
        if (!tmats_[fin_id][i][j].is_zero() && !v[j].is_zero())
          out[i] += tmats_[fin_id][i][j] * v[j];
    return out;
  }

  // action of w = v t(lambda) on R (translations act trivially)
  GradedPoly<K> act(const AffElem& w, const GradedPoly<K>& p) const {
    return act_fin(w.fin, p);
  }
  GradedPoly<K> act_fin(size_t fin_id, const GradedPoly<K>& p) const {
    if (fin_id == 0) return p;
    return p.substituted(tmats_[fin_id], one());
  }

  // Demazure operator for generator i: (p - s(p)) / alpha_i
  GradedPoly<K> demazure(size_t i, const GradedPoly<K>& p) const {
    GradedPoly<K> diff = p - act_fin(refl_[i], p);
    auto q = diff.divided_by(alpha_[i]);
    if (!q)
      throw RealizationError("demazure: p - s(p) not divisible by alpha_s (inconsistent realization)");
    return *q;
  }

  size_t num_forms() const { return forms_.size(); }
  const std::vector<K>& form_vec(size_t id) const { return forms_[id]; }
  GradedPoly<K> form_poly(size_t id) const { return GradedPoly<K>::linear(forms_[id]); }
  // id of a linear form equal (up to scalar) to the given vector; nullopt if unknown
  std::optional<size_t> form_id(std::vector<K> v) const {
    normalize_form(v);
    auto it = std::find(forms_.begin(), forms_.end(), v);
    if (it == forms_.end()) return std::nullopt;
    return (size_t)(it - forms_.begin());
  }

  static void normalize_form(std::vector<K>& v) {
    for (auto& x : v)
      if (!x.is_zero()) {
        K inv = x.inv();
        for (auto& y : v) y = y * inv;
        return;
      }
  }

private:
  WeylGroupPtr w_;
  FieldSpec field_;
  size_t nv_;
  std::vector<std::vector<std::vector<K>>> tmats_;
  std::vector<GradedPoly<K>> alpha_;
  std::vector<std::vector<K>> alpha_vec_, alpha_check_, delta_;
  std::vector<size_t> refl_;
  std::vector<std::vector<K>> forms_;
};

template <class K>
using RealizationPtr = std::shared_ptr<const Realization<K>>;

// validate_realization: builds the realization, surfacing degeneracy errors.
template <class K>
RealizationPtr<K> validate_realization(WeylGroupPtr group, FieldSpec field) {
  if (!field.rational && !is_prime_u32(field.ell))
    throw std::invalid_argument("field: ell must be prime");
  return std::make_shared<const Realization<K>>(std::move(group), field);
}

}  // namespace affkl
