#pragma once

#include <string>
#include <vector>
#include <optional>
#include <memory>
#include <cstdint>

namespace affkl {

using IntVec = std::vector<long long>;
using IntMat = std::vector<IntVec>;  // row-major list of rows

long long dot(const IntVec& a, const IntVec& b);
IntVec vec_add(const IntVec& a, const IntVec& b);
IntVec vec_sub(const IntVec& a, const IntVec& b);
IntVec vec_neg(const IntVec& a);
IntVec vec_scale(const IntVec& a, long long c);
bool vec_is_zero(const IntVec& a);
IntVec mat_apply(const IntMat& m, const IntVec& v);
IntMat mat_mul_int(const IntMat& a, const IntMat& b);
IntMat mat_identity_int(size_t n);
IntMat mat_transpose_int(const IntMat& m);
// inverse of a unimodular or +-1-determinant integer matrix
IntMat mat_inverse_unimodular(const IntMat& m);

// Smith normal form: returns (U, V, D) with U*A*V = D diagonal, U, V unimodular.
struct Smith {
  IntMat u, v;
  IntVec diag;  // d_1 | d_2 | ... (nonzero entries first), length min(rows, cols)
};
Smith smith_normal_form(IntMat a);

// Solve A x = b over the integers. Returns a particular solution and a basis
// of the integer kernel, or nullopt if unsolvable.
struct IntSolution {
  IntVec particular;
  std::vector<IntVec> kernel;
};
std::optional<IntSolution> solve_integer(const IntMat& a, const IntVec& b);

struct PosRoot {
  IntVec root;    // in X^*(T) coordinates
  IntVec coroot;  // in X_*(T) coordinates
  long long norm2;  // relative squared length (symmetrized Cartan scale)
};

// A root datum: lattices X^*(T) = Z^n and X_*(T) = Z^n in dual bases (the
// pairing is the dot product), with simple roots/coroots of finite type.
class RootDatum {
public:
  static std::shared_ptr<const RootDatum> build(const std::string& label);
  static std::vector<std::string> supported_labels();

  const std::string& label() const { return label_; }
  size_t lattice_rank() const { return n_; }
  size_t ss_rank() const { return r_; }
  const IntVec& simple_root(size_t i) const { return roots_[i]; }
  const IntVec& simple_coroot(size_t i) const { return coroots_[i]; }
  long long cartan(size_t i, size_t j) const;  // <alpha_j, alpha_i^vee>

  const std::vector<PosRoot>& positive_roots() const { return pos_roots_; }
  // maximal short roots, one per irreducible component
  const std::vector<PosRoot>& max_short_roots() const { return max_short_; }

  bool weights_quotient_free() const { return weights_quot_free_; }   // X*/ZR torsion-free
  bool derived_simply_connected() const { return coweights_quot_free_; }  // X_*/ZR^vee torsion-free

  // canonical coordinates of [lambda] in X^*/ZR (torsion coords reduced)
  IntVec class_coords(const IntVec& lambda) const;
  // basis of {lambda : <lambda, alpha^vee> = 0 for all coroots}
  const std::vector<IntVec>& central_lattice() const { return central_; }

  // mu <= lambda in dominance order (lambda - mu a nonnegative integer root sum)
  bool dominance_leq(const IntVec& mu, const IntVec& lambda) const;

private:
  RootDatum() = default;
  void finish();  // derives roots, SNF data, flags; validates invariants

  std::string label_;
  size_t n_ = 0, r_ = 0;
  IntMat roots_, coroots_;
  std::vector<PosRoot> pos_roots_;
  std::vector<PosRoot> max_short_;
  std::vector<IntVec> central_;
  bool weights_quot_free_ = true, coweights_quot_free_ = true;
  // SNF of the matrix with columns the simple roots
  IntMat class_u_;
  IntVec class_diag_;
};

using RootDatumPtr = std::shared_ptr<const RootDatum>;

}  // namespace affkl
