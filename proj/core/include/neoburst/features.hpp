#ifndef NEOBURST_FEATURES_HPP_
#define NEOBURST_FEATURES_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "neoburst/dsp.hpp"

namespace neoburst {

struct DetectorConfig {
  std::vector<Band> bands = {{0.5, 3.0}, {3.0, 8.0}, {8.0, 15.0}, {15.0, 30.0}};
  double process_rate_hz = 64.0;
  double window_s = 2.0;
  double overlap_fraction = 0.5;
  double min_interburst_s = 1.0;
  double min_burst_s = 0.5;
  double svm_c = 1.0;
  std::size_t selected_feature_count = 8;
  std::uint64_t seed = 1;

  // Throws Error describing the first violated constraint.
  void validate() const;

  std::size_t window_samples() const;
  std::size_t hop_samples() const;
  Band wideband() const;
};

// Row-major window x feature table.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::vector<std::string> names, std::size_t rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

  double& at(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols(), cols()};
  }
  std::vector<double> column(std::size_t c) const;

  std::vector<double>& window_centers_s() { return centers_; }
  const std::vector<double>& window_centers_s() const { return centers_; }

  // Appends rows of `other`; names must match.
  void append(const FeatureMatrix& other);

 private:
  std::vector<std::string> names_;
  std::size_t rows_ = 0;
  std::vector<double> data_;
  std::vector<double> centers_;
};

// Per band: rms_, relpow_, nleo_ prefixed with the band edges; then sef95
// and p2p. 14 names for the default four bands.
std::vector<std::string> feature_names(const DetectorConfig& cfg);

// Zero-phase band-pass to the detector's wideband range, then resampling to
// cfg.process_rate_hz. Requires rate_hz >= 2 * highest band edge.
std::vector<double> preprocess(std::span<const double> x, double rate_hz,
                               const DetectorConfig& cfg);

// Sliding-window features of a preprocessed signal. Per band: RMS of the
// band-filtered signal, band power relative to the wideband periodogram
// power, and mean Teager energy smoothed over 0.25 s; wideband: 95 %
// spectral edge frequency and peak-to-peak amplitude.
FeatureMatrix extract_features(std::span<const double> x,
                               const DetectorConfig& cfg);

std::size_t window_count(std::size_t samples, const DetectorConfig& cfg);

}  // namespace neoburst

#endif  // NEOBURST_FEATURES_HPP_
