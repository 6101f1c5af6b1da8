#ifndef NEOBURST_SVM_HPP_
#define NEOBURST_SVM_HPP_

#include <span>
#include <vector>

#include "neoburst/features.hpp"

namespace neoburst {

struct SvmOptions {
  double c = 1.0;
  // Relative bound on the distance of the returned objective from the optimum.
  double tolerance = 1e-5;
  double min_smoothing = 1e-7;
  int max_newton_iterations = 100;
};

struct LinearSvm {
  std::vector<double> weights;
  double bias = 0.0;
  double objective = 0.0;  // primal objective at (weights, bias)

  double decision(std::span<const double> x) const;
};

// (1/2)|w|^2 + C * sum_i max(0, 1 - y_i (w.x_i + b)).
double svm_objective(const FeatureMatrix& x, std::span<const int> labels,
                     std::span<const double> weights, double bias, double c);

// Minimises the primal objective above with an unregularised bias. The
// hinge is replaced by a quadratically smoothed version whose width shrinks
// tenfold per round; each round is solved by damped Newton from the last
// solution. Stops once the smoothed minimum, a lower bound on the true one,
// is within `tolerance` of the best exact objective. Deterministic; labels
// are +1 / -1 and both must occur.
LinearSvm train_linear_svm(const FeatureMatrix& x, std::span<const int> labels,
                           const SvmOptions& options);

}  // namespace neoburst

#endif  // NEOBURST_SVM_HPP_
