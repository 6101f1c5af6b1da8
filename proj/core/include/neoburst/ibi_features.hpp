#ifndef NEOBURST_IBI_FEATURES_HPP_
#define NEOBURST_IBI_FEATURES_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "neoburst/hie_grade.hpp"
#include "neoburst/signal.hpp"

namespace neoburst {

struct IbiFeatureVector {
  std::string subject_id;
  double ibi_percent = 0.0;  // [0, 100]
  double max_ibi_s = 0.0;    // >= 0
  std::optional<HieGrade> true_grade;
};

// 100 * (sum of inter-burst durations) / epoch length.
double ibi_percentage(const IntervalList& intervals);

enum class MaxIbiMode {
  kRange,     // longest minus shortest inter-burst duration
  kPlainMax,  // longest inter-burst duration
};

// Span of inter-burst durations, max - min, by default. Empty lists give 0;
// so does a single interval in range mode.
double max_ibi(const IntervalList& intervals, MaxIbiMode mode = MaxIbiMode::kRange);

// Natural logarithm used for plotting max-IBI on a log axis. x must be > 0.
double log_feature(double x_s);

IbiFeatureVector compute_ibi_features(std::string subject_id,
                                      const IntervalList& intervals,
                                      std::optional<HieGrade> true_grade = {},
                                      MaxIbiMode mode = MaxIbiMode::kRange);

// CSV with header `subject_id,ibi_percent,max_ibi_s,true_grade`; an empty
// true_grade field means unknown.
std::string write_features_csv(std::span<const IbiFeatureVector> rows);
std::vector<IbiFeatureVector> read_features_csv(std::string_view text);

// Linear-interpolation quantile (p in [0, 1]) of a non-empty sample.
double quantile(std::vector<double> values, double p);

}  // namespace neoburst

#endif  // NEOBURST_IBI_FEATURES_HPP_
