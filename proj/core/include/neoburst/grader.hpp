#ifndef NEOBURST_GRADER_HPP_
#define NEOBURST_GRADER_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "neoburst/hie_grade.hpp"
#include "neoburst/ibi_features.hpp"

namespace neoburst {

inline constexpr std::string_view kMlpFormat = "neoburst-mlp/1";
inline constexpr std::size_t kHiddenUnits = 14;
inline constexpr std::size_t kOutputUnits = HieGrade::kCount;

struct MlpOptions {
  // Stop once the average squared error changes by at most theta percent
  // of its previous value in one epoch.
  double theta = 0.1;
  std::uint64_t seed = 1;
  int max_epochs = 5000;
  double learning_rate = 0.1;
  int max_halvings = 20;
};

struct LabeledSample {
  std::vector<double> features;
  HieGrade grade;
};

// n -> 14 -> 4 perceptron, logistic activations on both layers, inputs
// z-scored with the training statistics.
struct MlpModel {
  std::size_t inputs = 0;
  std::vector<double> hidden_weights;  // kHiddenUnits x inputs, row-major
  std::vector<double> hidden_bias;     // kHiddenUnits
  std::vector<double> output_weights;  // kOutputUnits x kHiddenUnits
  std::vector<double> output_bias;     // kOutputUnits
  std::vector<double> input_means;
  std::vector<double> input_sds;
  double theta = 0.1;
  std::uint64_t seed = 1;
  int epochs_run = 0;
  double initial_error = 0.0;
  double final_error = 0.0;

  std::array<double, kOutputUnits> outputs(std::span<const double> features) const;
};

// Full-batch gradient descent on the squared error of one-hot targets.
// Weights and biases start from N(0, 1) draws of a generator seeded with
// options.seed. When a step raises the error the learning rate is halved
// and the step retried. Needs at least two distinct grades.
MlpModel train_mlp(std::span<const LabeledSample> data, const MlpOptions& options);

// Average squared error (1/N) sum_n 1/2 sum_j e_j(n)^2 over `data`.
double average_squared_error(const MlpModel& model, std::span<const LabeledSample> data);

// Index of the largest activation; ties go to the lower grade.
HieGrade argmax_grade(std::span<const double> activations);

HieGrade predict(const MlpModel& model, std::span<const double> features);

struct RuleThresholds {
  double severe_max_ibi_s = 60.0;
  double severe_ibi_percent = 90.0;
  double major_max_ibi_s = 10.0;
  double moderate_ibi_percent = 15.0;
};

// Grade 4 if max IBI >= 60 s or IBI% >= 90; else 3 if max IBI >= 10 s;
// else 2 if IBI% >= 15; else 1.
HieGrade rule_grade(const IbiFeatureVector& fv, const RuleThresholds& t = {});

class ConfusionMatrix {
 public:
  void add(HieGrade actual, HieGrade predicted);
  int count(HieGrade actual, HieGrade predicted) const {
    return counts_[actual.index()][predicted.index()];
  }
  int total() const;
  int correct() const;
  double accuracy() const;
  // Header `actual,pred_1,pred_2,pred_3,pred_4`, one row per actual grade.
  std::string to_csv() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::array<std::array<int, kOutputUnits>, kOutputUnits> counts_{};
};

ConfusionMatrix confusion_and_accuracy(
    std::span<const std::pair<HieGrade, HieGrade>> actual_predicted);

enum class FeatureSet { kBoth, kIbiPercent, kMaxIbi };

std::vector<double> grader_inputs(const IbiFeatureVector& fv, FeatureSet set);
std::string feature_set_name(FeatureSet set);
FeatureSet parse_feature_set(std::string_view name);

struct SubjectPrediction {
  std::string subject_id;
  HieGrade actual;
  HieGrade predicted;
};

struct LosoResult {
  double accuracy = 0.0;
  ConfusionMatrix confusion;
  std::vector<SubjectPrediction> predictions;
  double max_final_over_initial_error = 0.0;  // worst fold, <= 1 expected
};

// Leave-one-subject-out: fold i trains on every other subject with seed
// options.seed + i and predicts subject i. Every row needs a true grade.
LosoResult loso_crossval(std::span<const IbiFeatureVector> data, FeatureSet set,
                         const MlpOptions& options);

std::string save_mlp(const MlpModel& model, FeatureSet set);
std::pair<MlpModel, FeatureSet> load_mlp(std::string_view text);

}  // namespace neoburst

#endif  // NEOBURST_GRADER_HPP_
