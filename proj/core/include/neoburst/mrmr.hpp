#ifndef NEOBURST_MRMR_HPP_
#define NEOBURST_MRMR_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "neoburst/features.hpp"

namespace neoburst {

// Equal-frequency quantisation: value v maps to bin
// floor(bins * (number of values < v) / n), so ties share a bin.
std::vector<int> quantize_equal_frequency(std::span<const double> values,
                                          int bins);

// Plug-in mutual information (nats) between two discrete sequences.
double mutual_information(std::span<const int> a, int a_levels,
                          std::span<const int> b, int b_levels);

struct MrmrResult {
  std::vector<std::size_t> selected;  // in pick order
  std::vector<double> relevance;      // MI(feature; label) per column
  std::vector<double> scores;         // criterion value at each pick
};

// Greedy minimum-redundancy maximum-relevance selection of k columns.
// Labels are +1 / -1. Features are quantised into 16 equal-frequency bins;
// after the most relevant column, each pick maximises
// MI(f; y) - mean MI(f; s) over already selected s. Ties go to the lower
// column index.
MrmrResult select_features(const FeatureMatrix& x, std::span<const int> labels,
                           std::size_t k);

}  // namespace neoburst

#endif  // NEOBURST_MRMR_HPP_
