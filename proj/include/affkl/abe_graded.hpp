#pragma once

#include "affkl/abe.hpp"

namespace affkl {

// Degreewise linear algebra on the graded lattice of a flagged object.
// Elements of the lattice are coordinate vectors of polynomials over the
// left basis; graded pieces are finite dimensional k-spaces.
template <class K>
class GradedLattice {
public:
  using Poly = GradedPoly<K>;
  using PolyVec = std::vector<Poly>;  // length = rank

  GradedLattice(const AbeContext<K>& ctx, const Flagged<K>& m) : ctx_(ctx), m_(m) {
    nv_ = ctx.real()->nvars();
    // right action matrices of the variables
    for (size_t v = 0; v < nv_; ++v)
      avar_.push_back(ctx.right_action_matrix(m, GradedPoly<K>::variable(nv_, v, ctx.real()->one())));
  }

  const Flagged<K>& object() const { return m_; }
  size_t rank() const { return m_.rank(); }

  static std::vector<Expo> monomials(size_t nv, int total) {
    std::vector<Expo> out;
    Expo cur(nv, 0);
    build(out, cur, 0, total);
    return out;
  }

  // basis of the degree-d piece: pairs (lattice index, monomial)
  struct PieceBasis {
    std::vector<std::pair<size_t, Expo>> items;
    std::map<std::pair<size_t, Expo>, size_t> index;
  };
  const PieceBasis& piece(int d) const {
    auto it = pieces_.find(d);
    if (it != pieces_.end()) return it->second;
    PieceBasis pb;
    for (size_t i = 0; i < m_.lat_deg.size(); ++i) {
      int rem = d - m_.lat_deg[i];
      if (rem < 0 || rem % 2 != 0) continue;
      for (auto& e : monomials(nv_, rem / 2)) {
        pb.index[{i, e}] = pb.items.size();
        pb.items.emplace_back(i, e);
      }
    }
    return pieces_.emplace(d, std::move(pb)).first->second;
  }

  // coordinates of a homogeneous polynomial vector in the degree-d piece
  std::vector<K> coords(const PolyVec& x, int d) const {
    const PieceBasis& pb = piece(d);
    std::vector<K> out(pb.items.size(), K());
    for (size_t i = 0; i < x.size(); ++i)
      for (auto& [e, c] : x[i].terms()) {
        auto it = pb.index.find({i, e});
        if (it == pb.index.end()) throw std::logic_error("GradedLattice: degree mismatch");
        out[it->second] = c;
      }
    return out;
  }
  PolyVec from_coords(const std::vector<K>& v, int d) const {
    const PieceBasis& pb = piece(d);
    PolyVec out(rank(), Poly(nv_));
    for (size_t t = 0; t < pb.items.size(); ++t)
      if (!v[t].is_zero()) out[pb.items[t].first].add_term(pb.items[t].second, v[t]);
    return out;
  }

  // x * p for the right action (p a polynomial)
  PolyVec right_mul(const PolyVec& x, const Poly& p) const {
    PolyVec out(rank(), Poly(nv_));
    // expand p monomial by monomial through the variable matrices
    for (auto& [e, c] : p.terms()) {
      PolyVec cur = x;
      for (size_t v = 0; v < nv_; ++v)
        for (int k = 0; k < e[v]; ++k) cur = apply(avar_[v], cur);
      for (size_t i = 0; i < rank(); ++i) out[i] = out[i] + cur[i].scaled(c);
    }
    return out;
  }
  PolyVec right_mul_var(const PolyVec& x, size_t v) const { return apply(avar_[v], x); }

  // left multiplication is coordinatewise
  static PolyVec left_mul(const PolyVec& x, const Poly& p) {
    PolyVec out(x.size(), Poly(p.nvars()));
    for (size_t i = 0; i < x.size(); ++i) out[i] = p * x[i];
    return out;
  }

  PolyVec basis_vector(size_t i) const {
    PolyVec v(rank(), Poly(nv_));
    v[i] = GradedPoly<K>::constant(nv_, ctx_.real()->one());
    return v;
  }

  // Minimal generator degrees of the left (or right) submodule generated by
  // the given homogeneous vectors, with a chosen generator set returned.
  // Generators can only occur at degrees of spanning elements, so the scan
  // window is exactly the degree range of the input.
  struct Generators {
    std::vector<PolyVec> gens;
    std::vector<int> degrees;
  };
  Generators left_min_generators(const std::vector<std::pair<PolyVec, int>>& spanning) const {
    Generators out;
    if (spanning.empty()) return out;
    int dmin = spanning[0].second, dmax = spanning[0].second;
    for (auto& [x, d] : spanning) {
      dmin = std::min(dmin, d);
      dmax = std::max(dmax, d);
    }
    for (int d = dmin; d <= dmax; ++d) {
      // span at degree d of monomial multiples of chosen generators
      Echelon<K> ech(piece(d).items.size(), ctx_.real()->zero());
      for (size_t g = 0; g < out.gens.size(); ++g) {
        int rem = d - out.degrees[g];
        if (rem < 0 || rem % 2) continue;
        for (auto& e : monomials(nv_, rem / 2)) {
          Poly mono(nv_);
          mono.add_term(e, ctx_.real()->one());
          std::vector<K> row = coords(left_mul(out.gens[g], mono), d);
          ech.insert(row);
        }
      }
      // spanning elements in this degree that add a pivot are new generators
      for (auto& [x, dd] : spanning) {
        if (dd != d) continue;
        std::vector<K> row = coords(x, d);
        if (ech.insert(row)) {
          out.gens.push_back(x);
          out.degrees.push_back(d);
        }
      }
    }
    return out;
  }

  // A free basis for the right module structure (graded Nakayama over the
  // right action): new basis vectors are piece-basis preimages of a basis of
  // Lambda / Lambda R_+.
  Generators right_basis() const {
    Generators out;
    int dmin = *std::min_element(m_.lat_deg.begin(), m_.lat_deg.end());
    int dmax = *std::max_element(m_.lat_deg.begin(), m_.lat_deg.end());
    for (int widen = 0; widen <= 4 && out.gens.size() < rank(); widen += 2) {
      out.gens.clear();
      out.degrees.clear();
      for (int d = dmin - widen; d <= dmax + widen && out.gens.size() < rank(); ++d) {
        const PieceBasis& pb = piece(d);
        if (pb.items.empty()) continue;
        Echelon<K> ech(pb.items.size(), ctx_.real()->zero());
        const PieceBasis& low = piece(d - 2);
        for (size_t t = 0; t < low.items.size(); ++t) {
          std::vector<K> unit(low.items.size(), K());
          unit[t] = ctx_.real()->one();
          PolyVec x = from_coords(unit, d - 2);
          for (size_t v = 0; v < nv_; ++v) {
            std::vector<K> row = coords(right_mul_var(x, v), d);
            ech.insert(row);
          }
        }
        for (size_t t = 0; t < pb.items.size(); ++t) {
          std::vector<K> unit(pb.items.size(), K());
          unit[t] = ctx_.real()->one();
          std::vector<K> row = unit;
          if (ech.insert(row)) {
            out.gens.push_back(from_coords(unit, d));
            out.degrees.push_back(d);
          }
        }
      }
    }
    if (out.gens.size() != rank())
      throw std::logic_error("right_basis: generator count does not match the rank");
    return out;
  }

private:
  static void build(std::vector<Expo>& out, Expo& cur, size_t pos, int remaining) {
    if (pos + 1 == cur.size()) {
      cur[pos] = remaining;
      out.push_back(cur);
      cur[pos] = 0;
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      cur[pos] = k;
      build(out, cur, pos + 1, remaining - k);
    }
    cur[pos] = 0;
  }

  static PolyVec apply(const Mat<Poly>& m, const PolyVec& x) {
    PolyVec out(x.size(), Poly(x.empty() ? 0 : x[0].nvars()));
    for (size_t i = 0; i < m.rows(); ++i)
      for (size_t k = 0; k < m.cols(); ++k) {
        if (m(i, k).is_zero() || x[k].is_zero()) continue;
        out[i] = out[i] + m(i, k) * x[k];
      }
    return out;
  }

  const AbeContext<K>& ctx_;
  const Flagged<K>& m_;
  size_t nv_;
  std::vector<Mat<GradedPoly<K>>> avar_;
  mutable std::map<int, PieceBasis> pieces_;
};

}  // namespace affkl
