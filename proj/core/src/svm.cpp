#include "neoburst/svm.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "neoburst/error.hpp"

namespace neoburst {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Hinge loss with its kink rounded into a quadratic of width h:
// 0 for m <= 0, m^2 / 2h below h, m - h/2 above. Under-estimates the hinge
// by at most h/2 per sample.
double smooth_hinge(double m, double h) {
  if (m <= 0.0) return 0.0;
  return m < h ? 0.5 * m * m / h : m - 0.5 * h;
}

class Problem {
 public:
  Problem(const FeatureMatrix& x, std::span<const int> y, double c)
      : x_(x), y_(y), c_(c), d_(x.cols()) {}

  std::size_t params() const { return d_ + 1; }

  double margin(const Eigen::VectorXd& theta, std::size_t i) const {
    const auto row = x_.row(i);
    double z = theta[d_];
    for (std::size_t k = 0; k < d_; ++k) z += theta[k] * row[k];
    return 1.0 - y_[i] * z;
  }

  double value(const Eigen::VectorXd& theta, double h) const {
    double loss = 0.0;
    for (std::size_t i = 0; i < x_.rows(); ++i) {
      const double m = margin(theta, i);
      loss += h > 0.0 ? smooth_hinge(m, h) : std::max(0.0, m);
    }
    return 0.5 * theta.head(d_).squaredNorm() + c_ * loss;
  }

  void derivatives(const Eigen::VectorXd& theta, double h, Eigen::VectorXd& grad,
                   Eigen::MatrixXd& hess) const {
    const std::size_t p = params();
    grad = Eigen::VectorXd::Zero(p);
    hess = Eigen::MatrixXd::Zero(p, p);
    grad.head(d_) = theta.head(d_);
    hess.topLeftCorner(d_, d_).setIdentity();
    Eigen::VectorXd xi(p);
    for (std::size_t i = 0; i < x_.rows(); ++i) {
      const double m = margin(theta, i);
      if (m <= 0.0) continue;
      const auto row = x_.row(i);
      for (std::size_t k = 0; k < d_; ++k) xi[k] = row[k];
      xi[d_] = 1.0;
      const double yi = y_[i];
      if (m < h) {
        grad -= (c_ * yi * m / h) * xi;
        hess.selfadjointView<Eigen::Lower>().rankUpdate(xi, c_ / h);
      } else {
        grad -= (c_ * yi) * xi;
      }
    }
    hess = hess.selfadjointView<Eigen::Lower>();
  }

 private:
  const FeatureMatrix& x_;
  std::span<const int> y_;
  double c_;
  std::size_t d_;
};

// Damped Newton on the smoothed objective; returns when the Newton
// decrement is negligible.
void newton(const Problem& prob, Eigen::VectorXd& theta, double h, int max_iterations) {
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  for (int it = 0; it < max_iterations; ++it) {
    prob.derivatives(theta, h, grad, hess);
    const double ridge = 1e-12 * (1.0 + hess.diagonal().maxCoeff());
    hess.diagonal().array() += ridge;
    const Eigen::VectorXd step = hess.ldlt().solve(-grad);
    const double decrement = grad.dot(step);
    const double f0 = prob.value(theta, h);
    if (!(decrement < -1e-12 * std::max(1.0, f0))) return;
    double t = 1.0;
    while (t > 1e-10 && prob.value(theta + t * step, h) > f0 + 1e-4 * t * decrement) {
      t *= 0.5;
    }
    if (t <= 1e-10) return;
    theta += t * step;
  }
}

}  // namespace

double LinearSvm::decision(std::span<const double> x) const {
  if (x.size() != weights.size()) throw Error("SVM input has the wrong dimension");
  return dot(weights, x) + bias;
}

double svm_objective(const FeatureMatrix& x, std::span<const int> labels,
                     std::span<const double> weights, double bias, double c) {
  double hinge = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    hinge += std::max(0.0, 1.0 - labels[i] * (dot(weights, x.row(i)) + bias));
  }
  return 0.5 * dot(weights, weights) + c * hinge;
}

LinearSvm train_linear_svm(const FeatureMatrix& x, std::span<const int> labels,
                           const SvmOptions& options) {
  if (!(options.c > 0.0)) throw Error("SVM C must be positive");
  if (labels.size() != x.rows()) throw Error("label count differs from row count");
  std::size_t pos = 0, neg = 0;
  for (int v : labels) {
    if (v == 1) {
      ++pos;
    } else if (v == -1) {
      ++neg;
    } else {
      throw Error("SVM labels must be +1 or -1");
    }
  }
  if (pos == 0 || neg == 0) {
    throw Error("SVM training needs both classes; got " + std::to_string(pos) +
                " positive and " + std::to_string(neg) + " negative samples");
  }

  const Problem prob(x, labels, options.c);
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(prob.params()));
  Eigen::VectorXd best_theta = theta;
  double best = prob.value(theta, 0.0);
  for (double h = 10.0; h >= options.min_smoothing; h *= 0.1) {
    newton(prob, theta, h, options.max_newton_iterations);
    const double smoothed = prob.value(theta, h);
    const double exact = prob.value(theta, 0.0);
    if (exact < best) {
      best = exact;
      best_theta = theta;
    }
    // min of the smoothed objective bounds the true minimum from below.
    if (best - smoothed <= options.tolerance * std::max(1e-12, std::abs(best))) break;
  }

  LinearSvm svm;
  svm.weights.assign(best_theta.data(), best_theta.data() + x.cols());
  svm.bias = best_theta[static_cast<Eigen::Index>(x.cols())];
  svm.objective = svm_objective(x, labels, svm.weights, svm.bias, options.c);
  return svm;
}

}  // namespace neoburst
