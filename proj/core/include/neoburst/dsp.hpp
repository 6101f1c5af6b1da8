#ifndef NEOBURST_DSP_HPP_
#define NEOBURST_DSP_HPP_

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace neoburst {

struct Band {
  double low_hz = 0.0;
  double high_hz = 0.0;

  friend bool operator==(const Band&, const Band&) = default;
};

// Second-order section, a0 normalised to 1.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

// Digital Butterworth sections (bilinear transform with prewarping).
// `order` must be even and positive.
std::vector<Biquad> butterworth_lowpass(int order, double cutoff_hz,
                                        double rate_hz);
std::vector<Biquad> butterworth_highpass(int order, double cutoff_hz,
                                         double rate_hz);

// Causal cascade, transposed direct form II, initial state chosen as the
// steady state for a constant input equal to x[0].
std::vector<double> sos_filter(std::span<const Biquad> sections,
                               std::span<const double> x);

// Forward-backward (zero-phase) filtering with odd-reflection padding of
// `pad` samples at each end (clamped to x.size() - 1).
std::vector<double> filtfilt(std::span<const Biquad> sections,
                             std::span<const double> x, std::size_t pad);

// Zero-phase 4th-order Butterworth high-pass at band.low_hz cascaded with a
// 4th-order low-pass at band.high_hz. Requires 0 < low < high < rate/2.
std::vector<double> band_filter(std::span<const double> x, Band band,
                                double rate_hz);

// Linear interpolation onto a grid of `to_hz`, decimating by picking when
// from_hz is an integer multiple of to_hz. The input must already be band
// limited below to_hz/2.
std::vector<double> resample(std::span<const double> x, double from_hz,
                             double to_hz);

// Teager-Kaiser nonlinear energy x(n)^2 - x(n-1)x(n+1); the two end samples
// copy their neighbours.
std::vector<double> nleo(std::span<const double> x);

// Centred moving average of `width` samples; shrinks at the edges.
std::vector<double> moving_average(std::span<const double> x,
                                   std::size_t width);

// Hann-windowed power spectrum |X_k|^2, k = 0..n/2, backed by FFTW.
// Instances are not shareable across threads; construction is.
class Periodogram {
 public:
  explicit Periodogram(std::size_t n);
  ~Periodogram();
  Periodogram(const Periodogram&) = delete;
  Periodogram& operator=(const Periodogram&) = delete;

  std::size_t size() const { return n_; }
  std::size_t bins() const { return n_ / 2 + 1; }
  double bin_hz(std::size_t k, double rate_hz) const {
    return static_cast<double>(k) * rate_hz / static_cast<double>(n_);
  }

  // Returned span is valid until the next call.
  std::span<const double> power(std::span<const double> x);

 private:
  struct Impl;
  std::size_t n_;
  std::unique_ptr<Impl> impl_;
};

// Unnormalised inverse of a half spectrum (n/2 + 1 bins) to n real samples.
std::vector<double> inverse_real_fft(std::span<const double> re,
                                     std::span<const double> im,
                                     std::size_t n);

}  // namespace neoburst

#endif  // NEOBURST_DSP_HPP_
