#include "neoburst/mrmr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "neoburst/error.hpp"

namespace neoburst {
namespace {

constexpr int kBins = 16;

std::vector<double> joint_counts(std::span<const int> a, std::span<const int> b,
                                 int a_levels, int b_levels) {
  std::vector<double> joint(static_cast<std::size_t>(a_levels * b_levels), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[static_cast<std::size_t>(a[i] * b_levels + b[i])] += 1.0;
  }
  return joint;
}

}  // namespace

std::vector<int> quantize_equal_frequency(std::span<const double> values,
                                          int bins) {
  const std::size_t n = values.size();
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto below = static_cast<std::size_t>(
        std::lower_bound(sorted.begin(), sorted.end(), values[i]) - sorted.begin());
    out[i] = static_cast<int>((static_cast<std::size_t>(bins) * below) / n);
  }
  return out;
}

double mutual_information(std::span<const int> a, int a_levels,
                          std::span<const int> b, int b_levels) {
  if (a.size() != b.size()) throw Error("sequences differ in length");
  if (a.empty()) return 0.0;
  const std::vector<double> joint = joint_counts(a, b, a_levels, b_levels);
  std::vector<double> pa(static_cast<std::size_t>(a_levels), 0.0);
  std::vector<double> pb(static_cast<std::size_t>(b_levels), 0.0);
  for (int i = 0; i < a_levels; ++i) {
    for (int j = 0; j < b_levels; ++j) {
      const double c = joint[static_cast<std::size_t>(i * b_levels + j)];
      pa[static_cast<std::size_t>(i)] += c;
      pb[static_cast<std::size_t>(j)] += c;
    }
  }
  const double n = static_cast<double>(a.size());
  double mi = 0.0;
  for (int i = 0; i < a_levels; ++i) {
    for (int j = 0; j < b_levels; ++j) {
      const double c = joint[static_cast<std::size_t>(i * b_levels + j)];
      if (c == 0.0) continue;
      mi += (c / n) * std::log(c * n / (pa[static_cast<std::size_t>(i)] *
                                        pb[static_cast<std::size_t>(j)]));
    }
  }
  return std::max(mi, 0.0);
}

MrmrResult select_features(const FeatureMatrix& x, std::span<const int> labels,
                           std::size_t k) {
  const std::size_t cols = x.cols();
  if (k < 1 || k > cols) {
    throw Error("feature count k=" + std::to_string(k) + " outside [1, " +
                std::to_string(cols) + "]");
  }
  if (labels.size() != x.rows()) throw Error("label count differs from row count");
  const bool has_pos = std::find(labels.begin(), labels.end(), 1) != labels.end();
  const bool has_neg = std::find(labels.begin(), labels.end(), -1) != labels.end();
  if (!has_pos || !has_neg) {
    throw Error("feature selection needs both classes in the labels");
  }

  std::vector<int> y(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) y[i] = labels[i] > 0 ? 1 : 0;
  std::vector<std::vector<int>> q(cols);
  MrmrResult result;
  result.relevance.resize(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    q[c] = quantize_equal_frequency(x.column(c), kBins);
    result.relevance[c] = mutual_information(q[c], kBins, y, 2);
  }

  std::vector<bool> taken(cols, false);
  std::vector<double> redundancy(cols, 0.0);
  for (std::size_t pick = 0; pick < k; ++pick) {
    std::size_t best = cols;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < cols; ++c) {
      if (taken[c]) continue;
      const double score =
          pick == 0 ? result.relevance[c]
                    : result.relevance[c] - redundancy[c] / static_cast<double>(pick);
      if (score > best_score) {
        best_score = score;
        best = c;
      }
    }
    taken[best] = true;
    result.selected.push_back(best);
    result.scores.push_back(best_score);
    for (std::size_t c = 0; c < cols; ++c) {
      if (!taken[c]) redundancy[c] += mutual_information(q[c], kBins, q[best], kBins);
    }
  }
  return result;
}

}  // namespace neoburst
