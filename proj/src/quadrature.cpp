#include "levyheat/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <thread>


namespace levyheat::quad {

namespace bq = boost::math::quadrature;

Result adaptive(const Fn& f, double a, double b, double rel_tol, unsigned max_depth) {
  if (a == b) return {};
  double err = 0.0;
  double l1 = 0.0;
  const double v = bq::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, rel_tol,
                                                            &err, &l1);
  return {v, err * std::max(std::abs(v), l1)};
}

Result adaptive_pieces(const Fn& f, const std::vector<double>& pts, double rel_tol,
                       unsigned max_depth) {
  Result total;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (!(pts[i + 1] > pts[i])) continue;
    const Result r = adaptive(f, pts[i], pts[i + 1], rel_tol, max_depth);
    total.value += r.value;
    total.error += r.error;
  }
  return total;
}

Result endpoint_singular(const Fn& f, double a, double b, double rel_tol) {
  if (a == b) return {};
  thread_local bq::tanh_sinh<double> integrator(12);
  double err = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  const double v = integrator.integrate(f, a, b, rel_tol, &err, &l1, &levels);
  return {v, err * std::max(std::abs(v), l1)};
}

Result half_line(const Fn& f, double a, double rel_tol) {
  thread_local bq::exp_sinh<double> integrator(12);
  double err = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  const double v = integrator.integrate(
      f, a, std::numeric_limits<double>::infinity(), rel_tol, &err, &l1, &levels);
  return {v, err * std::max(std::abs(v), l1)};
}

double gauss20(const Fn& f, double a, double b) {
  return bq::gauss<double, 20>::integrate(f, a, b);
}

double blocked_gauss(const Fn& f, double a, double b, double block) {
  if (!(b > a)) return 0.0;
  const auto nblocks = static_cast<std::size_t>(std::ceil((b - a) / block));
  const double w = (b - a) / static_cast<double>(std::max<std::size_t>(nblocks, 1));
  double s = 0.0;
  for (std::size_t k = 0; k < std::max<std::size_t>(nblocks, 1); ++k) {
    const double lo = a + w * static_cast<double>(k);
    s += gauss20(f, lo, k + 1 == nblocks ? b : lo + w);
  }
  return s;
}

const LaguerreRule& gauss_laguerre(unsigned n, double alpha) {
  static std::mutex mu;
  static std::map<std::pair<unsigned, double>, LaguerreRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find({n, alpha});
  if (it != cache.end()) return it->second;

  // Jacobi matrix of the generalized Laguerre recurrence.
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(n > 0 ? n - 1 : 0);
  for (unsigned i = 0; i < n; ++i) diag[i] = 2.0 * i + alpha + 1.0;
  for (unsigned i = 1; i < n; ++i) sub[i - 1] = std::sqrt(i * (i + alpha));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  LaguerreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mu0 = std::tgamma(alpha + 1.0);
  for (unsigned i = 0; i < n; ++i) {
    rule.nodes[i] = solver.eigenvalues()[i];
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return cache.emplace(std::make_pair(n, alpha), std::move(rule)).first->second;
}

double sphere_area(unsigned dim) {
  // 2 pi^{d/2} / Gamma(d/2)
  return 2.0 * std::pow(kPi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

SphereRule sphere_rule(unsigned dim, unsigned n) {
  SphereRule rule;
  rule.dim = dim;
  if (dim == 1) {
    rule.nodes = {{-1.0}, {1.0}};
    rule.weights = {1.0, 1.0};
  } else if (dim == 2) {
    const double h = 2.0 * kPi / n;
    for (unsigned k = 0; k < n; ++k) {
      const double a = (k + 0.5) * h;
      rule.nodes.push_back({std::cos(a), std::sin(a)});
      rule.weights.push_back(h);
    }
  } else if (dim == 3) {
    const unsigned nz = std::max(8u, n / 2);
    // Gauss-Legendre nodes in cos(polar) via Golub-Welsch.
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(nz);
    Eigen::VectorXd sub(nz - 1);
    for (unsigned i = 1; i < nz; ++i) sub[i - 1] = i / std::sqrt(4.0 * i * i - 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const double h = 2.0 * kPi / n;
    for (unsigned i = 0; i < nz; ++i) {
      const double z = solver.eigenvalues()[i];
      const double wz = 2.0 * solver.eigenvectors()(0, i) * solver.eigenvectors()(0, i);
      const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
      for (unsigned k = 0; k < n; ++k) {
        const double a = (k + 0.5) * h;
        rule.nodes.push_back({s * std::cos(a), s * std::sin(a), z});
        rule.weights.push_back(wz * h);
      }
    }
  } else {
    throw ConfigError("sphere quadrature supports d <= 3");
  }
  return rule;
}

double sin_minus_x(double x) {
  if (std::abs(x) < 1e-2) {
    const double x2 = x * x;
    // -x^3/6 + x^5/120 - x^7/5040 + x^9/362880
    return x * x2 * (-1.0 / 6.0 + x2 * (1.0 / 120.0 + x2 * (-1.0 / 5040.0 + x2 / 362880.0)));
  }
  return std::sin(x) - x;
}

double expm1_minus_x(double x) {
  if (std::abs(x) < 1e-2) {
    const double x2 = x * x;
    return x2 * (0.5 + x * (1.0 / 6.0 + x * (1.0 / 24.0 + x * (1.0 / 120.0 + x / 720.0))));
  }
  return std::expm1(x) - x;
}

}  // namespace levyheat::quad
