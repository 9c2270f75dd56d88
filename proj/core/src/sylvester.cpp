#include "emin/sylvester.hpp"

#include <cmath>
#include <string>

#include "emin/error.hpp"

namespace emin {

namespace {

bool is_diagonal(const DenseMatrix& a) {
  for (Index i = 0; i < a.nrows(); ++i)
    for (Index j = 0; j < a.ncols(); ++j)
      if (i != j && a(i, j) != 0.0) return false;
  return true;
}

double frob_inner(const DenseMatrix& x, const DenseMatrix& y) {
  double s = 0.0;
  const auto& xv = x.values();
  const auto& yv = y.values();
  for (Index k = 0; k < xv.size(); ++k) s += xv[k] * yv[k];
  return s;
}

DenseMatrix hadamard(const DenseMatrix& x, const DenseMatrix& y) {
  DenseMatrix out = x;
  auto& ov = out.values();
  const auto& yv = y.values();
  for (Index k = 0; k < ov.size(); ++k) ov[k] *= yv[k];
  return out;
}

} // namespace

void MatrixEquation::validate() const {
  const Index nn = a.nrows();
  const Index mm = b.nrows();
  if (!a.square() || !b.square() || !c.square() || !d.square())
    throw DimensionError("MatrixEquation: A, B, C, D must be square");
  if (c.nrows() != nn || d.nrows() != mm || f.nrows() != nn || f.ncols() != mm)
    throw DimensionError("MatrixEquation: shapes do not conform");
}

bool MatrixEquation::diagonal_data() const {
  return is_diagonal(a) && is_diagonal(b) && is_diagonal(c) && is_diagonal(d);
}

DenseMatrix MatrixEquation::apply(const DenseMatrix& w) const {
  if (w.nrows() != n() || w.ncols() != m()) throw DimensionError("MatrixEquation::apply: W shape");
  if (diagonal_data()) {
    DenseMatrix out(n(), m());
    for (Index i = 0; i < n(); ++i)
      for (Index j = 0; j < m(); ++j) out(i, j) = (a(i, i) * b(j, j) + c(i, i) * d(j, j)) * w(i, j);
    return out;
  }
  return a * w * b + c * w * d;
}

MatrixEquation sylvester_equation(DenseMatrix a, DenseMatrix d, DenseMatrix f) {
  MatrixEquation eq;
  eq.b = DenseMatrix::identity(d.nrows());
  eq.c = DenseMatrix::identity(a.nrows());
  eq.a = std::move(a);
  eq.d = std::move(d);
  eq.f = std::move(f);
  eq.validate();
  return eq;
}

DenseMatrix hadamard_diag_preconditioner(const MatrixEquation& eq) {
  eq.validate();
  DenseMatrix out(eq.n(), eq.m());
  for (Index i = 0; i < eq.n(); ++i)
    for (Index j = 0; j < eq.m(); ++j) {
      const double denom = eq.b(j, j) * eq.a(i, i) + eq.d(j, j) * eq.c(i, i);
      if (denom == 0.0 || !std::isfinite(denom))
        throw SingularMatrixError("hadamard_diag_preconditioner: zero denominator at (" +
                                  std::to_string(i) + "," + std::to_string(j) + ")");
      out(i, j) = 1.0 / denom;
    }
  return out;
}

SylvesterResult sylvester_cg(const MatrixEquation& eq, Index max_iters, double tol) {
  eq.validate();
  const DenseMatrix dprec = hadamard_diag_preconditioner(eq);
  SylvesterResult res;
  res.w = DenseMatrix(eq.n(), eq.m());
  const double fnorm = frobenius_norm(eq.f);
  res.residual_history.push_back(fnorm);
  res.functional_history.push_back(0.0);
  if (fnorm == 0.0) {
    res.converged = true;
    return res;
  }

  DenseMatrix r = eq.f;
  DenseMatrix z = hadamard(dprec, r);
  DenseMatrix p = z;
  double rz = frob_inner(r, z);
  for (Index it = 1; it <= max_iters; ++it) {
    const DenseMatrix lp = eq.apply(p);
    const double curvature = frob_inner(p, lp);
    if (!std::isfinite(curvature) || !(curvature > 0.0))
      throw BreakdownError("sylvester_cg: nonpositive curvature, operator is not positive definite",
                           it);
    const double alpha = rz / curvature;
    auto& wv = res.w.values();
    auto& rv = r.values();
    const auto& pv = p.values();
    const auto& lv = lp.values();
    for (Index k = 0; k < wv.size(); ++k) {
      wv[k] += alpha * pv[k];
      rv[k] -= alpha * lv[k];
    }
    res.iterations = it;
    const double rn = frobenius_norm(r);
    res.residual_history.push_back(rn);
    // L W = F - R
    res.functional_history.push_back(-0.5 * (frob_inner(eq.f, res.w) + frob_inner(r, res.w)));
    if (rn <= tol * fnorm) {
      res.converged = true;
      break;
    }
    z = hadamard(dprec, r);
    const double rz_next = frob_inner(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    auto& pm = p.values();
    const auto& zv = z.values();
    for (Index k = 0; k < pm.size(); ++k) pm[k] = zv[k] + beta * pm[k];
  }
  return res;
}

} // namespace emin
