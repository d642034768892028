#include "geoflow/metric_lie_algebra.hpp"

#include <cmath>
#include <tuple>

#include <json.hpp>

namespace geoflow {

LieAlgebra::LieAlgebra(int dim, const std::vector<std::tuple<int, int, Vec>>& brackets)
    : dim_(dim) {
  if (dim <= 0) throw input_error("LieAlgebra: dim must be positive");
  table_.assign(std::size_t(dim), Mat::Zero(dim, dim));
  for (const auto& [i, j, coeffs] : brackets) {
    if (i < 0 || i >= dim || j < 0 || j >= dim)
      throw input_error("LieAlgebra: bracket index out of range");
    if (coeffs.size() != dim)
      throw input_error("LieAlgebra: bracket coefficient vector has wrong length");
    if (i == j) {
      if (coeffs.norm() != 0.0)
        throw invariant_violation("LieAlgebra: [e_i, e_i] must vanish");
      continue;
    }
    for (int k = 0; k < dim; ++k) {
      table_[std::size_t(k)](i, j) = coeffs[k];
      table_[std::size_t(k)](j, i) = -coeffs[k];
    }
  }
}

Vec LieAlgebra::bracket(const Vec& x, const Vec& y) const {
  if (x.size() != dim_ || y.size() != dim_)
    throw input_error("bracket: vector length does not match algebra dimension");
  Vec out(dim_);
  for (int k = 0; k < dim_; ++k) out[k] = x.dot(table_[std::size_t(k)] * y);
  return out;
}

Mat LieAlgebra::adjoint(const Vec& v) const {
  if (v.size() != dim_)
    throw input_error("adjoint: vector length does not match algebra dimension");
  Mat ad(dim_, dim_);
  for (int k = 0; k < dim_; ++k) ad.row(k) = v.transpose() * table_[std::size_t(k)];
  return ad;
}

double LieAlgebra::jacobi_residual() const {
  double worst = 0.0;
  Vec ei = Vec::Zero(dim_), ej = Vec::Zero(dim_), ek = Vec::Zero(dim_);
  for (int i = 0; i < dim_; ++i) {
    ei.setZero(); ei[i] = 1.0;
    for (int j = 0; j < dim_; ++j) {
      ej.setZero(); ej[j] = 1.0;
      for (int k = 0; k < dim_; ++k) {
        ek.setZero(); ek[k] = 1.0;
        Vec r = bracket(bracket(ei, ej), ek) + bracket(bracket(ej, ek), ei) +
                bracket(bracket(ek, ei), ej);
        worst = std::max(worst, r.cwiseAbs().maxCoeff());
      }
    }
  }
  return worst;
}

QuadraticForm::QuadraticForm(const Mat& matrix) : matrix_(matrix) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0)
    throw input_error("QuadraticForm: matrix must be square and non-empty");
  if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() != 0.0)
    throw invariant_violation("QuadraticForm: matrix must be symmetric");
  lu_ = Eigen::PartialPivLU<Mat>(matrix_);
  if (std::abs(lu_.determinant()) <= 1e-12)
    throw invariant_violation("QuadraticForm: matrix is (numerically) degenerate");
}

std::pair<int, int> QuadraticForm::signature() const {
  Eigen::SelfAdjointEigenSolver<Mat> es(matrix_);
  int pos = 0, neg = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()[i] > 0) ++pos; else ++neg;
  }
  return {pos, neg};
}

MetricLieAlgebra::MetricLieAlgebra(LieAlgebra algebra, QuadraticForm form, double jacobi_tol)
    : algebra_(std::move(algebra)), form_(std::move(form)) {
  if (algebra_.dim() != form_.dim())
    throw input_error("MetricLieAlgebra: algebra and form dimensions disagree");
  const double jr = algebra_.jacobi_residual();
  if (jr > jacobi_tol)
    throw invariant_violation("MetricLieAlgebra: Jacobi identity residual " +
                              std::to_string(jr) + " exceeds tolerance");
}

void MetricLieAlgebra::check_vec(const Vec& v, const char* who) const {
  if (v.size() != dim())
    throw input_error(std::string(who) + ": vector length does not match dimension");
}

Vec MetricLieAlgebra::bracket(const Vec& x, const Vec& y) const {
  return algebra_.bracket(x, y);
}

Vec MetricLieAlgebra::ad_star(const Vec& y, const Vec& z) const {
  check_vec(y, "ad_star");
  check_vec(z, "ad_star");
  // q(w, e_u) = q(z, ad_y e_u) for all u  <=>  Q w = ad_y^T Q z.
  return form_.solve(algebra_.adjoint(y).transpose() * (form_.matrix() * z));
}

Vec MetricLieAlgebra::euler_arnold_field(const Vec& y) const { return ad_star(y, y); }

Mat MetricLieAlgebra::killing_generator_residual(const Vec& v) const {
  check_vec(v, "killing_generator_residual");
  const Mat ad = algebra_.adjoint(v);
  return ad.transpose() * form_.matrix() + form_.matrix() * ad;
}

MetricLieAlgebra aff_r_metric_algebra() {
  // aff(R) + R, basis (T,X,V): [T,X] = X, V central.
  Vec tx = Vec::Zero(3);
  tx[1] = 1.0;
  LieAlgebra alg(3, {{0, 1, tx}});
  Mat q(3, 3);
  q << 1, 0, 0,
       0, 0, 1,
       0, 1, 0;
  return MetricLieAlgebra(alg, QuadraticForm(q));
}

MetricLieAlgebra sol_r_metric_algebra() {
  // sol + R, basis (T,X,Y,V): [T,X] = X, [T,Y] = -Y, V central.
  Vec tx = Vec::Zero(4), ty = Vec::Zero(4);
  tx[1] = 1.0;
  ty[2] = -1.0;
  LieAlgebra alg(4, {{0, 1, tx}, {0, 2, ty}});
  Mat q(4, 4);
  q << 1, 0, 0, 0,
       0, 0, 0, 1,
       0, 0, 1, 0,
       0, 1, 0, 0;
  return MetricLieAlgebra(alg, QuadraticForm(q));
}

MetricLieAlgebra metric_lie_algebra_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw input_error(std::string("algebra definition: ") + e.what());
  }
  if (!j.contains("dim") || !j.contains("brackets") || !j.contains("form"))
    throw input_error("algebra definition: requires dim, brackets, form");
  const int dim = j.at("dim").get<int>();
  std::vector<std::tuple<int, int, Vec>> brackets;
  for (const auto& entry : j.at("brackets")) {
    if (!entry.is_array() || entry.size() != 3)
      throw input_error("algebra definition: bracket entries are [i, j, [coeffs...]]");
    const auto coeffs = entry[2].get<std::vector<double>>();
    Vec c(Eigen::Index(coeffs.size()));
    for (std::size_t k = 0; k < coeffs.size(); ++k) c[Eigen::Index(k)] = coeffs[k];
    brackets.emplace_back(entry[0].get<int>(), entry[1].get<int>(), c);
  }
  const auto rows = j.at("form").get<std::vector<std::vector<double>>>();
  if (int(rows.size()) != dim)
    throw input_error("algebra definition: form must be dim x dim");
  Mat q(dim, dim);
  for (int r = 0; r < dim; ++r) {
    if (int(rows[std::size_t(r)].size()) != dim)
      throw input_error("algebra definition: form must be dim x dim");
    for (int c = 0; c < dim; ++c) q(r, c) = rows[std::size_t(r)][std::size_t(c)];
  }
  return MetricLieAlgebra(LieAlgebra(dim, brackets), QuadraticForm(q));
}

}  // namespace geoflow
