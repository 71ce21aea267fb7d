#include "cosetforge/spectral.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace cosetforge {

namespace {

[[noreturn]] void svd_failure(const CMatrix& m) {
  std::ostringstream os;
  os << "SVD did not converge on a " << m.rows() << "x" << m.cols()
     << " matrix (max |entry| " << m.cwiseAbs().maxCoeff() << ", Frobenius norm " << m.norm()
     << ")";
  fail(errc::numerical_failure, os.str());
}

// Jacobi is the more accurate option and cheap at small sizes; the
// divide-and-conquer variant takes over once the order reaches the hundreds.
template <class Svd>
Svd run_svd(const CMatrix& m, unsigned options) {
  Svd svd(m, options);
  if (svd.info() != Eigen::Success) svd_failure(m);
  return svd;
}

Eigen::VectorXd singular_values(const CMatrix& m) {
  if (m.rows() <= 128) return run_svd<Eigen::JacobiSVD<CMatrix>>(m, 0).singularValues();
  return run_svd<Eigen::BDCSVD<CMatrix>>(m, 0).singularValues();
}

// Mixed-radix digits of every element index. make_product builds indices as
// (g part) * |H| + (h part) with the factor lists concatenated, so the last
// factor is the fastest-varying digit.
std::vector<std::vector<int>> digit_table(const FiniteGroup& g) {
  const auto& factors = g.cyclic_factors();
  int k = int(factors.size());
  std::vector<std::vector<int>> d(g.order(), std::vector<int>(k));
  for (int x = 0; x < g.order(); ++x) {
    int r = x;
    for (int j = k - 1; j >= 0; --j) {
      d[x][j] = r % factors[j];
      r /= factors[j];
    }
  }
  return d;
}

}  // namespace

ConvOperator conv_operator(const FuncC& f) {
  const auto& g = *f.group;
  const int n = g.order();
  CMatrix m(n, n);
  for (element_t x = 0; x < n; ++x)
    for (element_t z = 0; z < n; ++z) m(x, z) = f[g.mul(x, g.inv(z))] / double(n);
  return {f.group, std::move(m), f};
}

double algebra_norm(const FuncC& f) { return singular_values(conv_operator(f).matrix).sum(); }

double fourier_l1_abelian(const FuncC& f) {
  const auto& g = *f.group;
  const auto& factors = g.cyclic_factors();
  if (factors.empty())
    fail(errc::not_explicitly_abelian,
         "group '" + g.name() + "' carries no cyclic factor list, characters unknown");
  const int n = g.order();
  auto digits = digit_table(g);

  // chi_t(x) = prod_j exp(2 pi i t_j x_j / n_j); all phases are multiples of
  // 2 pi / n, so one table of n-th roots covers every character exactly.
  std::vector<Cplx> root(n);
  for (int m = 0; m < n; ++m) root[m] = std::polar(1.0, -2.0 * std::numbers::pi * m / n);
  std::vector<long long> stride(factors.size());
  for (size_t j = 0; j < factors.size(); ++j) stride[j] = n / factors[j];

  double total = 0.0;
  for (int t = 0; t < n; ++t) {
    Cplx acc = 0;
    for (int x = 0; x < n; ++x) {
      long long m = 0;
      for (size_t j = 0; j < factors.size(); ++j)
        m += (long long)digits[t][j] * digits[x][j] * stride[j];
      acc += f[x] * root[size_t(m % n)];
    }
    total += std::abs(acc) / n;
  }
  return total;
}

SplitResult split(const FuncC& f, const Subgroup& h) {
  FuncC structured = coset_average(f, h);
  FuncC residual = f - structured;
  SplitResult r{std::move(structured), std::move(residual), 0.0, 0.0, 0.0};
  r.structured_norm = algebra_norm(r.structured);
  r.residual_norm = algebra_norm(r.residual);
  r.total_norm = algebra_norm(f);
  double gap = std::abs(r.total_norm - r.structured_norm - r.residual_norm);
  if (gap > 1e-7) {
    std::ostringstream os;
    os << "norm of f (" << r.total_norm << ") is off the split total ("
       << r.structured_norm + r.residual_norm << ") by " << gap << " for subgroup of order "
       << h.order();
    fail(errc::additivity_violation, os.str());
  }
  return r;
}

BGFactorization bg_factorize(const FuncC& f) {
  bool all_zero = true;
  for (element_t x = 0; x < f.size() && all_zero; ++x)
    if (f[x] != Cplx(0)) all_zero = false;
  if (all_zero) fail(errc::bad_input, "bg_factorize needs a nonzero function");

  const int n = f.size();
  auto op = conv_operator(f);
  Eigen::VectorXd sv;
  CMatrix u, v;
  if (n <= 128) {
    auto svd = run_svd<Eigen::JacobiSVD<CMatrix>>(op.matrix,
                                                  Eigen::ComputeFullU | Eigen::ComputeFullV);
    sv = svd.singularValues();
    u = svd.matrixU();
    v = svd.matrixV();
  } else {
    auto svd = run_svd<Eigen::BDCSVD<CMatrix>>(op.matrix,
                                               Eigen::ComputeFullU | Eigen::ComputeFullV);
    sv = svd.singularValues();
    u = svd.matrixU();
    v = svd.matrixV();
  }

  double cutoff = 1e-12 * sv(0);
  int kept = 0;
  while (kept < n && sv(kept) >= cutoff && sv(kept) > 0.0) ++kept;

  BGFactorization out;
  out.group = f.group;
  out.constant = 0.0;
  for (int i = 0; i < kept; ++i) out.constant += sv(i);
  out.dimension = kept * n;
  out.v.resize(out.dimension);
  out.w.resize(out.dimension);
  double root_n = std::sqrt(double(n));
  for (int i = 0; i < kept; ++i) {
    out.weights.push_back(sv(i) / out.constant);
    // Columns of U and V are unit vectors in counting l2; scaling by sqrt(n)
    // makes them unit in L2(m_G). h and g are their tildes, per the
    // factorization f = constant * E[ tilde(h) * g ].
    std::vector<Cplx> wf(n), vf(n);
    for (element_t t = 0; t < n; ++t) {
      wf[t] = root_n * u(t, i);
      vf[t] = root_n * v(t, i);
    }
    out.h.push_back(tilde(FuncC(f.group, std::move(wf))));
    out.g.push_back(tilde(FuncC(f.group, std::move(vf))));
    // Matrix-coefficient form: block i of the vectors carries sqrt(s_i / n)
    // times the coordinates of g_i (for v) and h_i (for w), so that
    // <pi(x) v, w> = sum_i s_i <rho_x g_i, h_i>_{L2(m_G)} = f(x).
    double scale = std::sqrt(sv(i) / n);
    for (element_t t = 0; t < n; ++t) {
      out.v(i * n + t) = scale * out.g.back()[t];
      out.w(i * n + t) = scale * out.h.back()[t];
    }
  }
  return out;
}

CMatrix BGFactorization::representation(element_t x) const {
  const auto& gr = *group;
  const int n = gr.order();
  const int blocks = dimension / n;
  CMatrix m = CMatrix::Zero(dimension, dimension);
  // Each block is the right-regular permutation: row t picks out s = t x,
  // matching (rho_x phi)(t) = phi(t x) on coordinates.
  for (element_t t = 0; t < n; ++t) {
    element_t s = gr.mul(t, x);
    for (int b = 0; b < blocks; ++b) m(b * n + t, b * n + s) = 1.0;
  }
  return m;
}

}  // namespace cosetforge
