#ifndef NEOBURST_DETECTOR_HPP_
#define NEOBURST_DETECTOR_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "neoburst/features.hpp"
#include "neoburst/signal.hpp"

namespace neoburst {

inline constexpr std::string_view kDetectorFormat = "neoburst-detector/1";

// Trained inter-burst detector: normalisation statistics and linear SVM
// weights over the mRMR-selected subset of window features. Positive
// scores mean inter-burst.
struct DetectorModel {
  DetectorConfig config;
  std::vector<std::size_t> selected;  // indices into feature_names(config)
  std::vector<double> means;          // per selected feature
  std::vector<double> sds;            // per selected feature, > 0
  std::vector<double> weights;        // per selected feature
  double bias = 0.0;
  double training_objective = 0.0;

  // Decision values, one per window of `features`.
  std::vector<double> window_scores(const FeatureMatrix& features) const;
};

// A bipolar recording with one ground-truth mask per channel, sampled at
// the detector processing rate.
struct LabeledRecording {
  EegRecording bipolar;
  std::vector<BinaryMask> truth;
};

// +1 (inter-burst) when more than half of a window's samples are
// inter-burst in `truth`, otherwise -1.
std::vector<int> window_labels(const BinaryMask& truth, const DetectorConfig& cfg,
                               std::size_t windows);

// Preprocesses every channel and stacks window features and labels.
struct TrainingSet {
  FeatureMatrix features;
  std::vector<int> labels;
};
TrainingSet build_training_set(std::span<const LabeledRecording> recordings,
                               const DetectorConfig& cfg);

DetectorModel train_detector(const TrainingSet& data, const DetectorConfig& cfg);
DetectorModel train_detector(std::span<const LabeledRecording> recordings,
                             const DetectorConfig& cfg);

// Per-sample score: mean decision value of every window covering the
// sample; samples after the last window take the last window's score.
std::vector<double> sample_scores(std::span<const double> window_scores,
                                  std::size_t samples, const DetectorConfig& cfg);

// Inter-burst runs shorter than min_interburst_s become burst, then burst
// runs shorter than min_burst_s become inter-burst. A run spanning the
// whole mask has nothing to merge into and is kept.
BinaryMask postprocess_mask(const BinaryMask& raw, const DetectorConfig& cfg);

// Masks for one channel sampled at `rate_hz`.
BinaryMask detect_channel(const DetectorModel& model,
                          std::span<const double> samples, double rate_hz);

// One mask per channel of a bipolar recording, at the processing rate.
std::vector<BinaryMask> detect(const DetectorModel& model,
                               const EegRecording& bipolar);

std::string save_detector(const DetectorModel& model);
DetectorModel load_detector(std::string_view text);

}  // namespace neoburst

#endif  // NEOBURST_DETECTOR_HPP_
