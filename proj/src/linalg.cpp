#include "affkl/linalg.hpp"

#include <optional>

namespace affkl {

namespace {

const uint32_t kSteerPrimes[] = {2147483647u, 2147483629u, 2147483587u, 2147483579u};

std::optional<Zp> rat_mod_p(const Rat& x, uint32_t p) {
  const BigRat& v = x.rep();
  BigInt num = boost::multiprecision::numerator(v);
  BigInt den = boost::multiprecision::denominator(v);
  BigInt pn(p);
  BigInt dm = den % pn;
  if (dm == 0) return std::nullopt;
  BigInt nm = num % pn;
  long long n = (long long)nm;  // |nm| < p fits
  long long d = (long long)dm;
  return Zp(n, p) / Zp(d, p);
}

// rational reconstruction of r mod m with |num|, den <= sqrt(m/2)
std::optional<Rat> rat_reconstruct(BigInt r, const BigInt& m) {
  BigInt half = m / 2;
  BigInt bound = boost::multiprecision::sqrt(half);
  BigInt v0 = m, v1 = ((r % m) + m) % m;
  BigInt t0 = 0, t1 = 1;
  while (v1 > bound) {
    BigInt q = v0 / v1;
    BigInt v2 = v0 - q * v1; v0 = v1; v1 = v2;
    BigInt t2 = t0 - q * t1; t0 = t1; t1 = t2;
  }
  if (t1 == 0) return std::nullopt;
  BigInt num = v1, den = t1;
  if (den < 0) { den = -den; num = -num; }
  if (den > bound + 1) return std::nullopt;
  if (boost::multiprecision::gcd(num, den) != 1) return std::nullopt;
  return Rat(BigRat(num, den));
}

struct ModKernel {
  std::vector<size_t> free_cols;
  std::vector<std::vector<Zp>> basis;  // one vector per free col, canonical reduced form
  bool ok = false;
};

ModKernel kernel_mod_p(const std::vector<SparseRow<Rat>>& rows, size_t ncols, uint32_t p) {
  ModKernel out;
  Echelon<Zp> ech(ncols, Zp::zero_of(p));
  std::vector<Zp> dense(ncols, Zp::zero_of(p));
  for (const auto& sr : rows) {
    std::fill(dense.begin(), dense.end(), Zp::zero_of(p));
    for (auto& [c, v] : sr.terms) {
      auto m = rat_mod_p(v, p);
      if (!m) return out;  // bad prime
      dense[c] += *m;
    }
    std::vector<Zp> row = dense;
    ech.insert(row);
    if (ech.rank() == ncols) break;
  }
  out.basis = ech.kernel(Zp::one_of(p));
  std::vector<char> is_pivot(ncols, 0);
  for (size_t pc : ech.pivot_cols()) is_pivot[pc] = 1;
  for (size_t j = 0; j < ncols; ++j)
    if (!is_pivot[j]) out.free_cols.push_back(j);
  out.ok = true;
  return out;
}

bool verify_exact(const std::vector<SparseRow<Rat>>& rows, const std::vector<Rat>& v) {
  for (const auto& sr : rows) {
    Rat acc(0);
    for (auto& [c, x] : sr.terms)
      if (!v[c].is_zero()) acc += x * v[c];
    if (!acc.is_zero()) return false;
  }
  return true;
}

}  // namespace

std::vector<std::vector<Rat>> sparse_kernel_steered(const std::vector<SparseRow<Rat>>& rows,
                                                    size_t ncols) {
  // accumulate CRT residues over one or more 31-bit primes
  std::vector<ModKernel> mks;
  BigInt modulus = 1;
  for (uint32_t p : kSteerPrimes) {
    ModKernel mk = kernel_mod_p(rows, ncols, p);
    if (!mk.ok) continue;
    if (!mks.empty() && mk.free_cols != mks.front().free_cols) {
      // rank disagreement between primes: keep the larger-rank run (smaller kernel)
      if (mk.free_cols.size() < mks.front().free_cols.size()) {
        mks.clear();
        modulus = 1;
      } else {
        continue;
      }
    }
    mks.push_back(std::move(mk));
    modulus *= p;

    // attempt reconstruction with current modulus
    size_t dim = mks.front().free_cols.size();
    std::vector<std::vector<Rat>> result;
    bool all_ok = true;
    for (size_t b = 0; b < dim && all_ok; ++b) {
      std::vector<Rat> v(ncols, Rat(0));
      for (size_t j = 0; j < ncols && all_ok; ++j) {
        // CRT combine entry j of basis vector b across runs
        BigInt x = 0, m = 1;
        for (size_t r = 0; r < mks.size(); ++r) {
          BigInt pr((long long)(uint64_t)kSteerPrimes[0]);  // placeholder; recompute below
          (void)pr;
          // modulus of run r:
          uint32_t prm = 0;
          {
            // recover which prime run r used by matching basis moduli
            prm = mks[r].basis.empty() || mks[r].basis[b].empty()
                      ? 0
                      : mks[r].basis[b][j].modulus();
          }
          if (prm == 0) { all_ok = false; break; }
          BigInt pi(prm);
          BigInt ai((long long)mks[r].basis[b][j].rep());
          // x' = x mod m, ai mod pi
          BigInt mi = m % pi;
          // solve x + m*t = ai (mod pi)
          long long mi_ll = (long long)mi, ai_ll = (long long)ai;
          BigInt xmod = x % pi;
          long long x_ll = (long long)xmod;
          Zp t = (Zp(ai_ll, prm) - Zp(x_ll, prm)) / Zp(mi_ll == 0 ? 1 : mi_ll, prm);
          if (mi == 0) { all_ok = false; break; }
          x = x + m * BigInt((long long)t.rep());
          m *= pi;
        }
        if (!all_ok) break;
        auto rec = rat_reconstruct(x, m);
        if (!rec) { all_ok = false; break; }
        v[j] = *rec;
      }
      if (all_ok && !verify_exact(rows, v)) all_ok = false;
      if (all_ok) result.push_back(std::move(v));
    }
    if (all_ok) return result;
  }
  // exact fallback
  return sparse_kernel<Rat>(rows, ncols, Rat(0), Rat(1));
}

}  // namespace affkl
