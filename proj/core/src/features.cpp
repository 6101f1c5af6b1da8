#include "neoburst/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "neoburst/error.hpp"

namespace neoburst {
namespace {

constexpr double kNleoSmoothingS = 0.25;
constexpr double kEdgeFraction = 0.95;

std::string band_tag(const Band& b) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g-%g", b.low_hz, b.high_hz);
  return buf;
}

}  // namespace

void DetectorConfig::validate() const {
  if (!(process_rate_hz > 0.0)) throw Error("process rate must be positive");
  if (bands.empty()) throw Error("at least one frequency band is required");
  for (const Band& b : bands) {
    if (!(b.low_hz > 0.0) || !(b.low_hz < b.high_hz) ||
        !(b.high_hz < process_rate_hz / 2.0)) {
      throw Error("band " + band_tag(b) + " Hz must lie inside (0, " +
                  std::to_string(process_rate_hz / 2.0) + ") Hz");
    }
  }
  if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0)) {
    throw Error("overlap fraction must be in [0, 1)");
  }
  if (!(window_s > 0.0) || !(min_interburst_s > 0.0) || !(min_burst_s > 0.0)) {
    throw Error("window and event durations must be positive");
  }
  if (window_samples() < 4) throw Error("window is shorter than 4 samples");
  if (!(svm_c > 0.0)) throw Error("SVM C must be positive");
  const std::size_t total = 3 * bands.size() + 2;
  if (selected_feature_count < 1 || selected_feature_count > total) {
    throw Error("selected feature count must be in [1, " +
                std::to_string(total) + "]");
  }
}

std::size_t DetectorConfig::window_samples() const {
  return static_cast<std::size_t>(std::llround(window_s * process_rate_hz));
}

std::size_t DetectorConfig::hop_samples() const {
  const auto hop = static_cast<std::size_t>(
      std::llround((1.0 - overlap_fraction) * static_cast<double>(window_samples())));
  return std::max<std::size_t>(hop, 1);
}

Band DetectorConfig::wideband() const {
  Band w{bands.front().low_hz, bands.front().high_hz};
  for (const Band& b : bands) {
    w.low_hz = std::min(w.low_hz, b.low_hz);
    w.high_hz = std::max(w.high_hz, b.high_hz);
  }
  return w;
}

FeatureMatrix::FeatureMatrix(std::vector<std::string> names, std::size_t rows)
    : names_(std::move(names)), rows_(rows), data_(rows * names_.size(), 0.0) {}

std::vector<double> FeatureMatrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = at(r, c);
  return out;
}

void FeatureMatrix::append(const FeatureMatrix& other) {
  if (rows_ == 0 && names_.empty()) {
    *this = other;
    return;
  }
  if (other.names_ != names_) throw Error("feature matrices have different columns");
  data_.insert(data_.end(), other.data_.begin(), other.data_.end());
  centers_.insert(centers_.end(), other.centers_.begin(), other.centers_.end());
  rows_ += other.rows_;
}

std::vector<std::string> feature_names(const DetectorConfig& cfg) {
  std::vector<std::string> names;
  for (const Band& b : cfg.bands) {
    const std::string tag = band_tag(b);
    names.push_back("rms_" + tag);
    names.push_back("relpow_" + tag);
    names.push_back("nleo_" + tag);
  }
  names.push_back("sef95");
  names.push_back("p2p");
  return names;
}

std::vector<double> preprocess(std::span<const double> x, double rate_hz,
                               const DetectorConfig& cfg) {
  const Band wide = cfg.wideband();
  if (!(rate_hz >= 2.0 * wide.high_hz)) {
    throw Error("sample rate " + std::to_string(rate_hz) +
                " Hz is below twice the highest band edge (" +
                std::to_string(wide.high_hz) + " Hz)");
  }
  std::vector<Biquad> sections = butterworth_highpass(4, wide.low_hz, rate_hz);
  // Steeper low-pass: it doubles as the anti-alias filter before resampling.
  // At rates where the edge is within 2 % of Nyquist the signal is already
  // band limited and the low-pass is skipped.
  if (wide.high_hz < 0.49 * rate_hz) {
    for (const Biquad& s : butterworth_lowpass(8, wide.high_hz, rate_hz)) {
      sections.push_back(s);
    }
  }
  const auto pad = static_cast<std::size_t>(std::ceil(3.0 * rate_hz / wide.low_hz));
  const std::vector<double> filtered = filtfilt(sections, x, pad);
  return resample(filtered, rate_hz, cfg.process_rate_hz);
}

std::size_t window_count(std::size_t samples, const DetectorConfig& cfg) {
  const std::size_t win = cfg.window_samples();
  if (samples < win) return 0;
  return (samples - win) / cfg.hop_samples() + 1;
}

FeatureMatrix extract_features(std::span<const double> x,
                               const DetectorConfig& cfg) {
  const std::size_t win = cfg.window_samples();
  const std::size_t hop = cfg.hop_samples();
  const double rate = cfg.process_rate_hz;
  if (x.size() < win) {
    throw Error("signal of " + std::to_string(x.size()) +
                " samples is shorter than one window (" + std::to_string(win) +
                ")");
  }
  const std::size_t windows = window_count(x.size(), cfg);
  const std::size_t nb = cfg.bands.size();
  FeatureMatrix fm(feature_names(cfg), windows);
  fm.window_centers_s().resize(windows);

  const auto smooth = static_cast<std::size_t>(std::llround(kNleoSmoothingS * rate));
  std::vector<std::vector<double>> filtered(nb), energy(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    filtered[b] = band_filter(x, cfg.bands[b], rate);
    energy[b] = moving_average(nleo(filtered[b]), smooth);
  }

  Periodogram pgram(win);
  const Band wide = cfg.wideband();
  // Bin ownership: band b owns [low, high), the last band also owns its
  // upper edge. Bins outside the wideband range are ignored.
  std::vector<int> owner(pgram.bins(), -1);
  std::vector<bool> in_wide(pgram.bins(), false);
  for (std::size_t k = 0; k < pgram.bins(); ++k) {
    const double f = pgram.bin_hz(k, rate);
    in_wide[k] = f >= wide.low_hz && f <= wide.high_hz;
    for (std::size_t b = 0; b < nb; ++b) {
      const Band& band = cfg.bands[b];
      const bool upper_ok = f < band.high_hz || (b + 1 == nb && f <= band.high_hz);
      if (f >= band.low_hz && upper_ok) {
        owner[k] = static_cast<int>(b);
        break;
      }
    }
  }
  const double bin_width = rate / static_cast<double>(win);

  std::vector<double> band_power(nb);
  for (std::size_t w = 0; w < windows; ++w) {
    const std::size_t start = w * hop;
    fm.window_centers_s()[w] = (static_cast<double>(start) + 0.5 * win) / rate;
    const std::span<const double> seg = x.subspan(start, win);

    const auto power = pgram.power(seg);
    std::fill(band_power.begin(), band_power.end(), 0.0);
    double total = 0.0;
    for (std::size_t k = 0; k < power.size(); ++k) {
      if (!in_wide[k]) continue;
      total += power[k];
      if (owner[k] >= 0) band_power[static_cast<std::size_t>(owner[k])] += power[k];
    }

    for (std::size_t b = 0; b < nb; ++b) {
      double sq = 0.0, en = 0.0;
      for (std::size_t i = start; i < start + win; ++i) {
        sq += filtered[b][i] * filtered[b][i];
        en += energy[b][i];
      }
      fm.at(w, 3 * b) = std::sqrt(sq / static_cast<double>(win));
      fm.at(w, 3 * b + 1) = total > 0.0 ? band_power[b] / total : 0.0;
      fm.at(w, 3 * b + 2) = en / static_cast<double>(win);
    }

    double edge = 0.0;
    if (total > 0.0) {
      const double target = kEdgeFraction * total;
      double cum = 0.0;
      for (std::size_t k = 0; k < power.size(); ++k) {
        if (!in_wide[k]) continue;
        if (cum + power[k] >= target) {
          const double f = pgram.bin_hz(k, rate);
          edge = f - bin_width + bin_width * (target - cum) / power[k];
          break;
        }
        cum += power[k];
      }
    }
    fm.at(w, 3 * nb) = edge;
    const auto [lo, hi] = std::minmax_element(seg.begin(), seg.end());
    fm.at(w, 3 * nb + 1) = *hi - *lo;
  }
  return fm;
}

}  // namespace neoburst
