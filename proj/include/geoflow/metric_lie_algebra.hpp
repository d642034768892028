#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "geoflow/errors.hpp"
#include "geoflow/integrator.hpp"

namespace geoflow {

// Finite-dimensional Lie algebra given by structure constants:
// c(i,j,k) is the coefficient of e_k in [e_i, e_j].
class LieAlgebra {
 public:
  // brackets: entries {i, j, coeffs} meaning [e_i, e_j] = sum_k coeffs[k] e_k.
  // Antisymmetric counterparts are filled in automatically.
  LieAlgebra(int dim, const std::vector<std::tuple<int, int, Vec>>& brackets);

  int dim() const { return dim_; }
  double c(int i, int j, int k) const { return table_[std::size_t(k)](i, j); }

  Vec bracket(const Vec& x, const Vec& y) const;

  // Matrix of ad_v: column j holds [v, e_j].
  Mat adjoint(const Vec& v) const;

  // Largest |[[x,y],z] + [[y,z],x] + [[z,x],y]| component over all basis triples.
  double jacobi_residual() const;

 private:
  int dim_;
  std::vector<Mat> table_;  // table_[k](i,j) = c(i,j,k)
};

class QuadraticForm {
 public:
  explicit QuadraticForm(const Mat& matrix);

  int dim() const { return int(matrix_.rows()); }
  const Mat& matrix() const { return matrix_; }
  double operator()(const Vec& x, const Vec& y) const { return x.dot(matrix_ * y); }

  // (#positive, #negative) eigenvalue counts.
  std::pair<int, int> signature() const;

  Vec solve(const Vec& rhs) const { return lu_.solve(rhs); }

 private:
  Mat matrix_;
  Eigen::PartialPivLU<Mat> lu_;  // cached factorization for the flow loop
};

class MetricLieAlgebra {
 public:
  MetricLieAlgebra(LieAlgebra algebra, QuadraticForm form,
                   double jacobi_tol = 1e-12);

  int dim() const { return algebra_.dim(); }
  const LieAlgebra& algebra() const { return algebra_; }
  const QuadraticForm& form() const { return form_; }

  Vec bracket(const Vec& x, const Vec& y) const;

  // The unique w with q(w, u) = q(z, ad_y u) for every u.
  Vec ad_star(const Vec& y, const Vec& z) const;

  // Euler-Arnold geodesic field ydot = ad*_y y.
  Vec euler_arnold_field(const Vec& y) const;

  // R(a,b) = q(ad_v e_a, e_b) + q(e_a, ad_v e_b); zero iff the left-invariant
  // field generated by v is Killing.
  Mat killing_generator_residual(const Vec& v) const;

  double energy(const Vec& y) const { return form_(y, y); }

  // Pairing q(y, v) with a fixed generator; constant along Euler-Arnold flows
  // when v generates a Killing field (Clairaut).
  double pairing(const Vec& y, const Vec& v) const { return form_(y, v); }

 private:
  void check_vec(const Vec& v, const char* who) const;

  LieAlgebra algebra_;
  QuadraticForm form_;
};

// Built-in algebras of the incompleteness examples; exact integer entries,
// basis order fixed to (T,X,V) and (T,X,Y,V).
MetricLieAlgebra aff_r_metric_algebra();
MetricLieAlgebra sol_r_metric_algebra();

// JSON definition { "dim": n, "brackets": [[i, j, [coeffs...]], ...],
// "form": [[...]] }, zero-indexed, row-major.
MetricLieAlgebra metric_lie_algebra_from_json(const std::string& json_text);

}  // namespace geoflow
