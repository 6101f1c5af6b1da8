#include "neoburst/grader.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "neoburst/error.hpp"
#include "neoburst/keyvalue.hpp"

namespace neoburst {
namespace {

double logistic(double v) { return 1.0 / (1.0 + std::exp(-v)); }

struct Params {
  std::vector<double> w1, b1, w2, b2;
};

struct Gradient {
  std::vector<double> w1, b1, w2, b2;
};

class Network {
 public:
  Network(std::size_t inputs, std::span<const LabeledSample> data,
          std::span<const double> means, std::span<const double> sds)
      : inputs_(inputs), data_(data) {
    normalized_.reserve(data.size() * inputs);
    for (const LabeledSample& s : data) {
      for (std::size_t f = 0; f < inputs; ++f) {
        normalized_.push_back((s.features[f] - means[f]) / sds[f]);
      }
    }
  }

  // Average over samples of 1/2 sum_j e_j^2; fills `grad` with the gradient
  // of the summed (not averaged) error when non-null.
  double evaluate(const Params& p, Gradient* grad) const {
    std::array<double, kHiddenUnits> h{};
    std::array<double, kOutputUnits> o{}, delta_out{};
    if (grad) {
      grad->w1.assign(p.w1.size(), 0.0);
      grad->b1.assign(p.b1.size(), 0.0);
      grad->w2.assign(p.w2.size(), 0.0);
      grad->b2.assign(p.b2.size(), 0.0);
    }
    double error = 0.0;
    for (std::size_t n = 0; n < data_.size(); ++n) {
      const double* x = normalized_.data() + n * inputs_;
      for (std::size_t k = 0; k < kHiddenUnits; ++k) {
        double a = p.b1[k];
        for (std::size_t f = 0; f < inputs_; ++f) a += p.w1[k * inputs_ + f] * x[f];
        h[k] = logistic(a);
      }
      const int target = data_[n].grade.index();
      for (std::size_t j = 0; j < kOutputUnits; ++j) {
        double a = p.b2[j];
        for (std::size_t k = 0; k < kHiddenUnits; ++k) a += p.w2[j * kHiddenUnits + k] * h[k];
        o[j] = logistic(a);
        const double e = o[j] - (static_cast<int>(j) == target ? 1.0 : 0.0);
        error += 0.5 * e * e;
        delta_out[j] = e * o[j] * (1.0 - o[j]);
      }
      if (!grad) continue;
      for (std::size_t j = 0; j < kOutputUnits; ++j) {
        grad->b2[j] += delta_out[j];
        for (std::size_t k = 0; k < kHiddenUnits; ++k) {
          grad->w2[j * kHiddenUnits + k] += delta_out[j] * h[k];
        }
      }
      for (std::size_t k = 0; k < kHiddenUnits; ++k) {
        double back = 0.0;
        for (std::size_t j = 0; j < kOutputUnits; ++j) {
          back += p.w2[j * kHiddenUnits + k] * delta_out[j];
        }
        const double delta_hidden = back * h[k] * (1.0 - h[k]);
        grad->b1[k] += delta_hidden;
        for (std::size_t f = 0; f < inputs_; ++f) {
          grad->w1[k * inputs_ + f] += delta_hidden * x[f];
        }
      }
    }
    return error / static_cast<double>(data_.size());
  }

 private:
  std::size_t inputs_;
  std::span<const LabeledSample> data_;
  std::vector<double> normalized_;
};

void step(std::vector<double>& out, const std::vector<double>& from,
          const std::vector<double>& grad, double rate) {
  out.resize(from.size());
  for (std::size_t i = 0; i < from.size(); ++i) out[i] = from[i] - rate * grad[i];
}

Params params_of(const MlpModel& m) {
  return {m.hidden_weights, m.hidden_bias, m.output_weights, m.output_bias};
}

}  // namespace

std::array<double, kOutputUnits> MlpModel::outputs(std::span<const double> features) const {
  if (features.size() != inputs) {
    throw Error("grader expects " + std::to_string(inputs) + " features, got " +
                std::to_string(features.size()));
  }
  std::array<double, kHiddenUnits> h{};
  for (std::size_t k = 0; k < kHiddenUnits; ++k) {
    double a = hidden_bias[k];
    for (std::size_t f = 0; f < inputs; ++f) {
      a += hidden_weights[k * inputs + f] * (features[f] - input_means[f]) / input_sds[f];
    }
    h[k] = logistic(a);
  }
  std::array<double, kOutputUnits> o{};
  for (std::size_t j = 0; j < kOutputUnits; ++j) {
    double a = output_bias[j];
    for (std::size_t k = 0; k < kHiddenUnits; ++k) a += output_weights[j * kHiddenUnits + k] * h[k];
    o[j] = logistic(a);
  }
  return o;
}

MlpModel train_mlp(std::span<const LabeledSample> data, const MlpOptions& options) {
  if (data.empty()) throw Error("cannot train the grader on an empty data set");
  const std::size_t inputs = data.front().features.size();
  if (inputs == 0) throw Error("grader needs at least one input feature");
  bool seen[kOutputUnits] = {};
  for (const LabeledSample& s : data) {
    if (s.features.size() != inputs) throw Error("inconsistent feature dimension");
    for (double v : s.features) {
      if (!std::isfinite(v)) throw Error("grader features must be finite");
    }
    seen[s.grade.index()] = true;
  }
  if (std::count(std::begin(seen), std::end(seen), true) < 2) {
    throw Error("grader training needs at least two distinct grades");
  }
  if (!(options.learning_rate > 0.0)) throw Error("learning rate must be positive");

  MlpModel m;
  m.inputs = inputs;
  m.theta = options.theta;
  m.seed = options.seed;
  m.input_means.assign(inputs, 0.0);
  m.input_sds.assign(inputs, 0.0);
  const double n = static_cast<double>(data.size());
  for (const LabeledSample& s : data) {
    for (std::size_t f = 0; f < inputs; ++f) m.input_means[f] += s.features[f] / n;
  }
  for (const LabeledSample& s : data) {
    for (std::size_t f = 0; f < inputs; ++f) {
      const double d = s.features[f] - m.input_means[f];
      m.input_sds[f] += d * d / n;
    }
  }
  for (double& sd : m.input_sds) sd = sd > 0.0 ? std::sqrt(sd) : 1.0;

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto draw = [&](std::size_t count) {
    std::vector<double> v(count);
    for (double& x : v) x = normal(rng);
    return v;
  };
  m.hidden_weights = draw(kHiddenUnits * inputs);
  m.hidden_bias = draw(kHiddenUnits);
  m.output_weights = draw(kOutputUnits * kHiddenUnits);
  m.output_bias = draw(kOutputUnits);

  const Network net(inputs, data, m.input_means, m.input_sds);
  Params current = params_of(m);
  Params candidate;
  Gradient grad;
  double error = net.evaluate(current, &grad);
  m.initial_error = error;
  int epochs = 0;
  while (epochs < options.max_epochs) {
    double rate = options.learning_rate;
    double next_error = 0.0;
    bool improved = false;
    for (int halvings = 0; halvings <= options.max_halvings; ++halvings) {
      step(candidate.w1, current.w1, grad.w1, rate);
      step(candidate.b1, current.b1, grad.b1, rate);
      step(candidate.w2, current.w2, grad.w2, rate);
      step(candidate.b2, current.b2, grad.b2, rate);
      next_error = net.evaluate(candidate, nullptr);
      if (next_error <= error) {
        improved = true;
        break;
      }
      rate *= 0.5;
    }
    if (!improved) break;
    std::swap(current, candidate);
    ++epochs;
    const double change_percent =
        error > 0.0 ? 100.0 * std::abs(next_error - error) / error : 0.0;
    error = net.evaluate(current, &grad);
    if (change_percent <= options.theta) break;
  }
  m.hidden_weights = std::move(current.w1);
  m.hidden_bias = std::move(current.b1);
  m.output_weights = std::move(current.w2);
  m.output_bias = std::move(current.b2);
  m.epochs_run = epochs;
  m.final_error = error;
  return m;
}

double average_squared_error(const MlpModel& model, std::span<const LabeledSample> data) {
  if (data.empty()) return 0.0;
  double total = 0.0;
  for (const LabeledSample& s : data) {
    const auto o = model.outputs(s.features);
    for (std::size_t j = 0; j < kOutputUnits; ++j) {
      const double e = o[j] - (static_cast<int>(j) == s.grade.index() ? 1.0 : 0.0);
      total += 0.5 * e * e;
    }
  }
  return total / static_cast<double>(data.size());
}

HieGrade argmax_grade(std::span<const double> activations) {
  if (activations.size() != kOutputUnits) throw Error("expected four activations");
  std::size_t best = 0;
  for (std::size_t j = 1; j < activations.size(); ++j) {
    if (activations[j] > activations[best]) best = j;
  }
  return HieGrade(static_cast<int>(best) + 1);
}

HieGrade predict(const MlpModel& model, std::span<const double> features) {
  const auto o = model.outputs(features);
  return argmax_grade(o);
}

HieGrade rule_grade(const IbiFeatureVector& fv, const RuleThresholds& t) {
  if (fv.max_ibi_s >= t.severe_max_ibi_s || fv.ibi_percent >= t.severe_ibi_percent) {
    return HieGrade(4);
  }
  if (fv.max_ibi_s >= t.major_max_ibi_s) return HieGrade(3);
  if (fv.ibi_percent >= t.moderate_ibi_percent) return HieGrade(2);
  return HieGrade(1);
}

void ConfusionMatrix::add(HieGrade actual, HieGrade predicted) {
  ++counts_[actual.index()][predicted.index()];
}

int ConfusionMatrix::total() const {
  int t = 0;
  for (const auto& row : counts_) {
    for (int c : row) t += c;
  }
  return t;
}

int ConfusionMatrix::correct() const {
  int t = 0;
  for (std::size_t i = 0; i < kOutputUnits; ++i) t += counts_[i][i];
  return t;
}

double ConfusionMatrix::accuracy() const {
  const int t = total();
  return t == 0 ? 0.0 : static_cast<double>(correct()) / t;
}

std::string ConfusionMatrix::to_csv() const {
  std::string out = "actual,pred_1,pred_2,pred_3,pred_4\n";
  for (std::size_t i = 0; i < kOutputUnits; ++i) {
    out += std::to_string(i + 1);
    for (int c : counts_[i]) {
      out += ',';
      out += std::to_string(c);
    }
    out += '\n';
  }
  return out;
}

ConfusionMatrix confusion_and_accuracy(
    std::span<const std::pair<HieGrade, HieGrade>> actual_predicted) {
  if (actual_predicted.empty()) throw Error("no predictions to tabulate");
  ConfusionMatrix cm;
  for (const auto& [actual, predicted] : actual_predicted) cm.add(actual, predicted);
  return cm;
}

std::vector<double> grader_inputs(const IbiFeatureVector& fv, FeatureSet set) {
  switch (set) {
    case FeatureSet::kIbiPercent:
      return {fv.ibi_percent};
    case FeatureSet::kMaxIbi:
      return {fv.max_ibi_s};
    case FeatureSet::kBoth:
      break;
  }
  return {fv.ibi_percent, fv.max_ibi_s};
}

std::string feature_set_name(FeatureSet set) {
  switch (set) {
    case FeatureSet::kIbiPercent:
      return "ibi_percent";
    case FeatureSet::kMaxIbi:
      return "max_ibi";
    case FeatureSet::kBoth:
      break;
  }
  return "both";
}

FeatureSet parse_feature_set(std::string_view name) {
  if (name == "both") return FeatureSet::kBoth;
  if (name == "ibi_percent") return FeatureSet::kIbiPercent;
  if (name == "max_ibi") return FeatureSet::kMaxIbi;
  throw Error("unknown feature set '" + std::string(name) +
              "' (expected both, ibi_percent or max_ibi)");
}

LosoResult loso_crossval(std::span<const IbiFeatureVector> data, FeatureSet set,
                         const MlpOptions& options) {
  if (data.size() < 3) {
    throw Error("leave-one-subject-out needs at least 3 subjects, got " +
                std::to_string(data.size()));
  }
  std::vector<LabeledSample> samples;
  bool seen[kOutputUnits] = {};
  for (const IbiFeatureVector& fv : data) {
    if (!fv.true_grade) {
      throw Error("subject '" + fv.subject_id + "' has no true grade");
    }
    samples.push_back({grader_inputs(fv, set), *fv.true_grade});
    seen[fv.true_grade->index()] = true;
  }
  if (std::count(std::begin(seen), std::end(seen), true) < 2) {
    throw Error("leave-one-subject-out needs at least two distinct grades");
  }

  LosoResult result;
  std::vector<LabeledSample> train;
  train.reserve(samples.size() - 1);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    train.clear();
    for (std::size_t j = 0; j < samples.size(); ++j) {
      if (j != i) train.push_back(samples[j]);
    }
    MlpOptions fold = options;
    fold.seed = options.seed + i;
    const MlpModel model = train_mlp(train, fold);
    const HieGrade predicted = predict(model, samples[i].features);
    result.confusion.add(samples[i].grade, predicted);
    result.predictions.push_back({data[i].subject_id, samples[i].grade, predicted});
    if (model.initial_error > 0.0) {
      result.max_final_over_initial_error = std::max(
          result.max_final_over_initial_error, model.final_error / model.initial_error);
    }
  }
  result.accuracy = result.confusion.accuracy();
  return result;
}

std::string save_mlp(const MlpModel& model, FeatureSet set) {
  KeyValueDoc doc;
  doc.set("format", std::string(kMlpFormat));
  doc.set("feature_set", feature_set_name(set));
  doc.set("layer_sizes", std::to_string(model.inputs) + " " +
                             std::to_string(kHiddenUnits) + " " +
                             std::to_string(kOutputUnits));
  doc.set("activation", "logistic");
  doc.set_numbers("hidden_weights", model.hidden_weights);
  doc.set_numbers("hidden_bias", model.hidden_bias);
  doc.set_numbers("output_weights", model.output_weights);
  doc.set_numbers("output_bias", model.output_bias);
  doc.set_numbers("input_means", model.input_means);
  doc.set_numbers("input_sds", model.input_sds);
  doc.set_number("theta", model.theta);
  doc.set("seed", std::to_string(model.seed));
  doc.set("epochs_run", std::to_string(model.epochs_run));
  doc.set_number("initial_error", model.initial_error);
  doc.set_number("final_error", model.final_error);
  return doc.to_string();
}

std::pair<MlpModel, FeatureSet> load_mlp(std::string_view text) {
  const KeyValueDoc doc = KeyValueDoc::parse(text);
  doc.require_format(kMlpFormat);
  const FeatureSet set = parse_feature_set(doc.get("feature_set"));
  const std::vector<double> sizes = doc.get_numbers("layer_sizes");
  if (sizes.size() != 3 || sizes[1] != kHiddenUnits || sizes[2] != kOutputUnits ||
      !(sizes[0] >= 1)) {
    throw VersionMismatchError("grader layer sizes must be n 14 4");
  }
  if (doc.get("activation") != "logistic") {
    throw VersionMismatchError("unsupported activation '" + doc.get("activation") + "'");
  }
  MlpModel m;
  m.inputs = static_cast<std::size_t>(sizes[0]);
  if (m.inputs != grader_inputs(IbiFeatureVector{}, set).size()) {
    throw Error("layer sizes do not match feature set '" + feature_set_name(set) + "'");
  }
  m.hidden_weights = doc.get_numbers("hidden_weights");
  m.hidden_bias = doc.get_numbers("hidden_bias");
  m.output_weights = doc.get_numbers("output_weights");
  m.output_bias = doc.get_numbers("output_bias");
  m.input_means = doc.get_numbers("input_means");
  m.input_sds = doc.get_numbers("input_sds");
  if (m.hidden_weights.size() != kHiddenUnits * m.inputs ||
      m.hidden_bias.size() != kHiddenUnits ||
      m.output_weights.size() != kOutputUnits * kHiddenUnits ||
      m.output_bias.size() != kOutputUnits || m.input_means.size() != m.inputs ||
      m.input_sds.size() != m.inputs) {
    throw Error("grader parameter vectors have the wrong sizes");
  }
  for (double sd : m.input_sds) {
    if (!(sd > 0.0)) throw Error("input standard deviations must be positive");
  }
  m.theta = doc.get_number("theta");
  m.seed = static_cast<std::uint64_t>(doc.get_integer("seed"));
  m.epochs_run = static_cast<int>(doc.get_integer("epochs_run"));
  m.initial_error = doc.get_number("initial_error");
  m.final_error = doc.get_number("final_error");
  return {std::move(m), set};
}

}  // namespace neoburst
