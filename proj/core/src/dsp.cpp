#include "neoburst/dsp.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "neoburst/error.hpp"

namespace neoburst {
namespace {

// FFTW planning and plan destruction are not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void check_cutoff(int order, double cutoff_hz, double rate_hz) {
  if (order <= 0 || order % 2 != 0) {
    throw Error("Butterworth order must be even and positive");
  }
  if (!(rate_hz > 0.0) || !(cutoff_hz > 0.0) || !(cutoff_hz < rate_hz / 2.0)) {
    throw Error("cutoff " + std::to_string(cutoff_hz) +
                " Hz must lie strictly between 0 and Nyquist (" +
                std::to_string(rate_hz / 2.0) + " Hz)");
  }
}

std::vector<Biquad> butterworth(int order, double cutoff_hz, double rate_hz,
                                bool highpass) {
  check_cutoff(order, cutoff_hz, rate_hz);
  const double k = std::tan(std::numbers::pi * cutoff_hz / rate_hz);
  const double k2 = k * k;
  std::vector<Biquad> out;
  for (int i = 0; i < order / 2; ++i) {
    const double theta = std::numbers::pi * (2 * i + 1) / (2.0 * order);
    const double q = 1.0 / (2.0 * std::cos(theta));
    const double norm = 1.0 / (1.0 + k / q + k2);
    Biquad s;
    if (highpass) {
      s.b0 = norm;
      s.b1 = -2.0 * norm;
      s.b2 = norm;
    } else {
      s.b0 = k2 * norm;
      s.b1 = 2.0 * s.b0;
      s.b2 = s.b0;
    }
    s.a1 = 2.0 * (k2 - 1.0) * norm;
    s.a2 = (1.0 - k / q + k2) * norm;
    out.push_back(s);
  }
  return out;
}

}  // namespace

std::vector<Biquad> butterworth_lowpass(int order, double cutoff_hz,
                                        double rate_hz) {
  return butterworth(order, cutoff_hz, rate_hz, false);
}

std::vector<Biquad> butterworth_highpass(int order, double cutoff_hz,
                                         double rate_hz) {
  return butterworth(order, cutoff_hz, rate_hz, true);
}

std::vector<double> sos_filter(std::span<const Biquad> sections,
                               std::span<const double> x) {
  std::vector<double> y(x.begin(), x.end());
  if (y.empty()) return y;
  double u = y.front();
  for (const Biquad& s : sections) {
    const double gain = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
    const double steady = gain * u;
    double z1 = steady - s.b0 * u;
    double z2 = s.b2 * u - s.a2 * steady;
    u = steady;
    for (double& v : y) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
  return y;
}

std::vector<double> filtfilt(std::span<const Biquad> sections,
                             std::span<const double> x, std::size_t pad) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  pad = std::min(pad, n - 1);
  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

  std::vector<double> y = sos_filter(sections, ext);
  std::reverse(y.begin(), y.end());
  y = sos_filter(sections, y);
  std::reverse(y.begin(), y.end());
  return std::vector<double>(y.begin() + static_cast<std::ptrdiff_t>(pad),
                             y.begin() + static_cast<std::ptrdiff_t>(pad + n));
}

std::vector<double> band_filter(std::span<const double> x, Band band,
                                double rate_hz) {
  if (!(band.low_hz > 0.0) || !(band.low_hz < band.high_hz) ||
      !(band.high_hz < rate_hz / 2.0)) {
    throw Error("invalid band (" + std::to_string(band.low_hz) + ", " +
                std::to_string(band.high_hz) + ") Hz at rate " +
                std::to_string(rate_hz) + " Hz");
  }
  std::vector<Biquad> sections = butterworth_highpass(4, band.low_hz, rate_hz);
  for (const Biquad& s : butterworth_lowpass(4, band.high_hz, rate_hz)) {
    sections.push_back(s);
  }
  // Three periods of the lower edge covers the high-pass settling time.
  const auto pad = static_cast<std::size_t>(std::ceil(3.0 * rate_hz / band.low_hz));
  return filtfilt(sections, x, pad);
}

std::vector<double> resample(std::span<const double> x, double from_hz,
                             double to_hz) {
  if (!(from_hz > 0.0) || !(to_hz > 0.0)) throw Error("rates must be positive");
  if (x.empty()) return {};
  if (from_hz == to_hz) return std::vector<double>(x.begin(), x.end());
  const double ratio = from_hz / to_hz;
  const std::size_t m =
      static_cast<std::size_t>(std::floor((x.size() - 1) / ratio + 1e-9)) + 1;
  std::vector<double> y(m);
  const double step = std::round(ratio);
  if (ratio >= 1.0 && std::abs(ratio - step) < 1e-9) {
    const auto k = static_cast<std::size_t>(step);
    for (std::size_t i = 0; i < m; ++i) y[i] = x[i * k];
    return y;
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double pos = static_cast<double>(i) * ratio;
    const auto j = std::min(static_cast<std::size_t>(pos), x.size() - 1);
    const double frac = pos - static_cast<double>(j);
    y[i] = j + 1 < x.size() ? x[j] + frac * (x[j + 1] - x[j]) : x[j];
  }
  return y;
}

std::vector<double> nleo(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> e(n, 0.0);
  if (n < 3) {
    for (std::size_t i = 0; i < n; ++i) e[i] = x[i] * x[i];
    return e;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    e[i] = x[i] * x[i] - x[i - 1] * x[i + 1];
  }
  e[0] = e[1];
  e[n - 1] = e[n - 2];
  return e;
}

std::vector<double> moving_average(std::span<const double> x,
                                   std::size_t width) {
  const std::size_t n = x.size();
  if (width <= 1 || n == 0) return std::vector<double>(x.begin(), x.end());
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i];
  const std::size_t before = (width - 1) / 2;
  const std::size_t after = width - 1 - before;
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= before ? i - before : 0;
    const std::size_t hi = std::min(n, i + after + 1);
    y[i] = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
  }
  return y;
}

struct Periodogram::Impl {
  double* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan plan = nullptr;
  std::vector<double> window;
  std::vector<double> power;
};

Periodogram::Periodogram(std::size_t n) : n_(n), impl_(std::make_unique<Impl>()) {
  if (n < 2) throw Error("periodogram length must be at least 2");
  impl_->window.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    impl_->window[i] =
        0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                             static_cast<double>(n - 1));
  }
  impl_->power.resize(bins());
  std::lock_guard<std::mutex> lock(planner_mutex());
  impl_->in = fftw_alloc_real(n);
  impl_->out = fftw_alloc_complex(bins());
  impl_->plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), impl_->in, impl_->out,
                                     FFTW_ESTIMATE);
}

Periodogram::~Periodogram() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(impl_->plan);
  fftw_free(impl_->in);
  fftw_free(impl_->out);
}

std::span<const double> Periodogram::power(std::span<const double> x) {
  if (x.size() != n_) throw Error("periodogram input has the wrong length");
  for (std::size_t i = 0; i < n_; ++i) impl_->in[i] = x[i] * impl_->window[i];
  fftw_execute(impl_->plan);
  for (std::size_t k = 0; k < bins(); ++k) {
    impl_->power[k] = impl_->out[k][0] * impl_->out[k][0] +
                      impl_->out[k][1] * impl_->out[k][1];
  }
  return impl_->power;
}

std::vector<double> inverse_real_fft(std::span<const double> re,
                                     std::span<const double> im,
                                     std::size_t n) {
  const std::size_t bins = n / 2 + 1;
  if (re.size() != bins || im.size() != bins) {
    throw Error("half spectrum must have n/2 + 1 bins");
  }
  fftw_complex* spec = fftw_alloc_complex(bins);
  double* out = fftw_alloc_real(n);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec, out, FFTW_ESTIMATE);
  }
  for (std::size_t k = 0; k < bins; ++k) {
    spec[k][0] = re[k];
    spec[k][1] = im[k];
  }
  fftw_execute(plan);
  std::vector<double> y(out, out + n);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(spec);
  fftw_free(out);
  return y;
}

}  // namespace neoburst
