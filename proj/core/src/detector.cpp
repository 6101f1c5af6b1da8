#include "neoburst/detector.hpp"

#include <algorithm>
#include <cmath>

#include "neoburst/error.hpp"
#include "neoburst/keyvalue.hpp"
#include "neoburst/mrmr.hpp"
#include "neoburst/svm.hpp"

namespace neoburst {
namespace {

// Flips runs of `value` shorter than `min_len` samples.
void relabel_short_runs(std::vector<std::uint8_t>& labels, std::uint8_t value,
                        double min_len) {
  const std::size_t n = labels.size();
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && labels[j] == labels[i]) ++j;
    const bool whole = i == 0 && j == n;
    if (labels[i] == value && !whole && static_cast<double>(j - i) < min_len) {
      std::fill(labels.begin() + static_cast<std::ptrdiff_t>(i),
                labels.begin() + static_cast<std::ptrdiff_t>(j),
                static_cast<std::uint8_t>(1 - value));
    }
    i = j;
  }
}

FeatureMatrix select_and_normalize(const FeatureMatrix& fm,
                                   const DetectorModel& model) {
  std::vector<std::string> names;
  for (std::size_t idx : model.selected) names.push_back(fm.names()[idx]);
  FeatureMatrix out(std::move(names), fm.rows());
  for (std::size_t r = 0; r < fm.rows(); ++r) {
    for (std::size_t j = 0; j < model.selected.size(); ++j) {
      out.at(r, j) = (fm.at(r, model.selected[j]) - model.means[j]) / model.sds[j];
    }
  }
  return out;
}

}  // namespace

std::vector<double> DetectorModel::window_scores(const FeatureMatrix& features) const {
  std::vector<double> scores(features.rows());
  for (std::size_t r = 0; r < features.rows(); ++r) {
    double s = bias;
    for (std::size_t j = 0; j < selected.size(); ++j) {
      s += weights[j] * (features.at(r, selected[j]) - means[j]) / sds[j];
    }
    scores[r] = s;
  }
  return scores;
}

std::vector<int> window_labels(const BinaryMask& truth, const DetectorConfig& cfg,
                               std::size_t windows) {
  const std::size_t win = cfg.window_samples();
  const std::size_t hop = cfg.hop_samples();
  std::vector<int> labels(windows, -1);
  for (std::size_t w = 0; w < windows; ++w) {
    const std::size_t start = w * hop;
    const std::size_t end = std::min(start + win, truth.size());
    std::size_t ib = 0;
    for (std::size_t i = start; i < end; ++i) ib += truth.labels()[i];
    if (2 * ib > win) labels[w] = 1;
  }
  return labels;
}

TrainingSet build_training_set(std::span<const LabeledRecording> recordings,
                               const DetectorConfig& cfg) {
  cfg.validate();
  TrainingSet set;
  for (const LabeledRecording& rec : recordings) {
    if (rec.truth.size() != rec.bipolar.channel_count()) {
      throw Error("training recording has " +
                  std::to_string(rec.bipolar.channel_count()) + " channels but " +
                  std::to_string(rec.truth.size()) + " truth masks");
    }
    for (std::size_t c = 0; c < rec.bipolar.channel_count(); ++c) {
      const Channel& ch = rec.bipolar.channels()[c];
      const BinaryMask& truth = rec.truth[c];
      if (truth.rate_hz() != cfg.process_rate_hz) {
        throw Error("truth mask for '" + ch.label + "' is not at the processing rate");
      }
      const std::vector<double> pre =
          preprocess(ch.samples, rec.bipolar.sample_rate_hz(), cfg);
      const std::size_t len_diff =
          pre.size() > truth.size() ? pre.size() - truth.size() : truth.size() - pre.size();
      if (len_diff > 1) {
        throw Error("truth mask for '" + ch.label + "' has " +
                    std::to_string(truth.size()) + " samples, signal has " +
                    std::to_string(pre.size()));
      }
      FeatureMatrix fm = extract_features(pre, cfg);
      const std::vector<int> labels = window_labels(truth, cfg, fm.rows());
      set.features.append(fm);
      set.labels.insert(set.labels.end(), labels.begin(), labels.end());
    }
  }
  if (set.labels.empty()) throw Error("no training windows");
  return set;
}

DetectorModel train_detector(const TrainingSet& data, const DetectorConfig& cfg) {
  cfg.validate();
  DetectorModel model;
  model.config = cfg;
  model.selected =
      select_features(data.features, data.labels, cfg.selected_feature_count).selected;

  const std::size_t n = data.features.rows();
  for (std::size_t idx : model.selected) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += data.features.at(r, idx);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double d = data.features.at(r, idx) - mean;
      var += d * d;
    }
    const double sd = std::sqrt(var / static_cast<double>(n));
    model.means.push_back(mean);
    model.sds.push_back(sd > 0.0 ? sd : 1.0);
  }

  const FeatureMatrix z = select_and_normalize(data.features, model);
  SvmOptions opt;
  opt.c = cfg.svm_c;
  const LinearSvm svm = train_linear_svm(z, data.labels, opt);
  model.weights = svm.weights;
  model.bias = svm.bias;
  model.training_objective = svm.objective;
  return model;
}

DetectorModel train_detector(std::span<const LabeledRecording> recordings,
                             const DetectorConfig& cfg) {
  return train_detector(build_training_set(recordings, cfg), cfg);
}

std::vector<double> sample_scores(std::span<const double> window_scores,
                                  std::size_t samples, const DetectorConfig& cfg) {
  const std::size_t win = cfg.window_samples();
  const std::size_t hop = cfg.hop_samples();
  std::vector<double> sum(samples, 0.0);
  std::vector<std::size_t> count(samples, 0);
  for (std::size_t w = 0; w < window_scores.size(); ++w) {
    const std::size_t start = w * hop;
    const std::size_t end = std::min(start + win, samples);
    for (std::size_t i = start; i < end; ++i) {
      sum[i] += window_scores[w];
      ++count[i];
    }
  }
  const double tail = window_scores.empty() ? 0.0 : window_scores.back();
  for (std::size_t i = 0; i < samples; ++i) {
    sum[i] = count[i] ? sum[i] / static_cast<double>(count[i]) : tail;
  }
  return sum;
}

BinaryMask postprocess_mask(const BinaryMask& raw, const DetectorConfig& cfg) {
  std::vector<std::uint8_t> labels = raw.labels();
  relabel_short_runs(labels, 1, cfg.min_interburst_s * raw.rate_hz());
  relabel_short_runs(labels, 0, cfg.min_burst_s * raw.rate_hz());
  return BinaryMask(raw.rate_hz(), std::move(labels));
}

BinaryMask detect_channel(const DetectorModel& model,
                          std::span<const double> samples, double rate_hz) {
  const DetectorConfig& cfg = model.config;
  const std::vector<double> pre = preprocess(samples, rate_hz, cfg);
  const FeatureMatrix fm = extract_features(pre, cfg);
  const std::vector<double> scores =
      sample_scores(model.window_scores(fm), pre.size(), cfg);
  std::vector<std::uint8_t> labels(pre.size());
  for (std::size_t i = 0; i < pre.size(); ++i) labels[i] = scores[i] > 0.0 ? 1 : 0;
  return postprocess_mask(BinaryMask(cfg.process_rate_hz, std::move(labels)), cfg);
}

std::vector<BinaryMask> detect(const DetectorModel& model,
                               const EegRecording& bipolar) {
  std::vector<BinaryMask> masks;
  masks.reserve(bipolar.channel_count());
  for (const Channel& ch : bipolar.channels()) {
    try {
      masks.push_back(detect_channel(model, ch.samples, bipolar.sample_rate_hz()));
    } catch (const Error& e) {
      throw Error("channel '" + ch.label + "': " + e.what());
    }
  }
  return masks;
}

std::string save_detector(const DetectorModel& model) {
  const DetectorConfig& cfg = model.config;
  KeyValueDoc doc;
  doc.set("format", std::string(kDetectorFormat));
  std::vector<double> edges;
  for (const Band& b : cfg.bands) {
    edges.push_back(b.low_hz);
    edges.push_back(b.high_hz);
  }
  doc.set_numbers("bands", edges);
  doc.set_number("process_rate_hz", cfg.process_rate_hz);
  doc.set_number("window_s", cfg.window_s);
  doc.set_number("overlap_fraction", cfg.overlap_fraction);
  doc.set_number("min_interburst_s", cfg.min_interburst_s);
  doc.set_number("min_burst_s", cfg.min_burst_s);
  doc.set_number("svm_c", cfg.svm_c);
  doc.set("selected_feature_count", std::to_string(cfg.selected_feature_count));
  doc.set("seed", std::to_string(cfg.seed));

  const std::vector<std::string> names = feature_names(cfg);
  std::string selected_names, selected_idx;
  for (std::size_t j = 0; j < model.selected.size(); ++j) {
    if (j) {
      selected_names += ' ';
      selected_idx += ' ';
    }
    selected_names += names[model.selected[j]];
    selected_idx += std::to_string(model.selected[j]);
  }
  doc.set("selected_features", selected_names);
  doc.set("selected_indices", selected_idx);
  doc.set_numbers("feature_means", model.means);
  doc.set_numbers("feature_sds", model.sds);
  doc.set_numbers("weights", model.weights);
  doc.set_number("bias", model.bias);
  doc.set_number("training_objective", model.training_objective);
  return doc.to_string();
}

DetectorModel load_detector(std::string_view text) {
  const KeyValueDoc doc = KeyValueDoc::parse(text);
  doc.require_format(kDetectorFormat);
  DetectorModel m;
  DetectorConfig& cfg = m.config;
  const std::vector<double> edges = doc.get_numbers("bands");
  if (edges.empty() || edges.size() % 2 != 0) {
    throw Error("key 'bands' must list low/high pairs");
  }
  cfg.bands.clear();
  for (std::size_t i = 0; i < edges.size(); i += 2) {
    cfg.bands.push_back({edges[i], edges[i + 1]});
  }
  cfg.process_rate_hz = doc.get_number("process_rate_hz");
  cfg.window_s = doc.get_number("window_s");
  cfg.overlap_fraction = doc.get_number("overlap_fraction");
  cfg.min_interburst_s = doc.get_number("min_interburst_s");
  cfg.min_burst_s = doc.get_number("min_burst_s");
  cfg.svm_c = doc.get_number("svm_c");
  cfg.selected_feature_count =
      static_cast<std::size_t>(doc.get_integer("selected_feature_count"));
  cfg.seed = static_cast<std::uint64_t>(doc.get_integer("seed"));
  cfg.validate();

  const std::vector<std::string> names = feature_names(cfg);
  const std::vector<std::string> selected_names = doc.get_words("selected_features");
  for (const std::string& w : doc.get_words("selected_indices")) {
    const auto idx = static_cast<std::size_t>(std::stoul(w));
    if (idx >= names.size()) throw Error("selected index " + w + " out of range");
    m.selected.push_back(idx);
  }
  if (selected_names.size() != m.selected.size()) {
    throw Error("selected_features and selected_indices differ in length");
  }
  for (std::size_t j = 0; j < m.selected.size(); ++j) {
    if (names[m.selected[j]] != selected_names[j]) {
      throw Error("selected feature '" + selected_names[j] +
                  "' does not match index " + std::to_string(m.selected[j]));
    }
  }
  m.means = doc.get_numbers("feature_means");
  m.sds = doc.get_numbers("feature_sds");
  m.weights = doc.get_numbers("weights");
  m.bias = doc.get_number("bias");
  m.training_objective = doc.get_number("training_objective");
  const std::size_t k = m.selected.size();
  if (m.means.size() != k || m.sds.size() != k || m.weights.size() != k) {
    throw Error("normalisation and weight vectors must match the selected features");
  }
  for (double sd : m.sds) {
    if (!(sd > 0.0)) throw Error("feature standard deviations must be positive");
  }
  return m;
}

}  // namespace neoburst
