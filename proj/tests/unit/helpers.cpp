#include "helpers.hpp"

#include <cmath>
#include <numbers>

namespace neoburst::testing {

std::vector<double> sine(double freq_hz, double rate_hz, std::size_t n, double amplitude,
                         double phase) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = amplitude * std::sin(2.0 * std::numbers::pi * freq_hz * i / rate_hz + phase);
  }
  return x;
}

double tone_amplitude(const std::vector<double>& x, double freq_hz, double rate_hz,
                      std::size_t from, std::size_t to) {
  double s = 0.0, c = 0.0;
  for (std::size_t i = from; i < to; ++i) {
    const double w = 2.0 * std::numbers::pi * freq_hz * i / rate_hz;
    s += x[i] * std::sin(w);
    c += x[i] * std::cos(w);
  }
  return 2.0 * std::hypot(s, c) / static_cast<double>(to - from);
}

namespace {
double warped(double f, double rate) { return std::tan(std::numbers::pi * f / rate); }
}  // namespace

double butter_lp_sq(int order, double cutoff_hz, double f_hz, double rate_hz) {
  return 1.0 / (1.0 + std::pow(warped(f_hz, rate_hz) / warped(cutoff_hz, rate_hz), 2 * order));
}

double butter_hp_sq(int order, double cutoff_hz, double f_hz, double rate_hz) {
  return 1.0 / (1.0 + std::pow(warped(cutoff_hz, rate_hz) / warped(f_hz, rate_hz), 2 * order));
}

std::vector<std::uint8_t> random_labels(std::mt19937_64& rng, std::size_t n, double p_switch) {
  std::bernoulli_distribution flip(p_switch);
  std::vector<std::uint8_t> v(n);
  std::uint8_t cur = rng() % 2;
  for (auto& x : v) {
    if (flip(rng)) cur ^= 1;
    x = cur;
  }
  return v;
}

EegRecording random_recording(std::mt19937_64& rng, double rate_hz, std::size_t n) {
  std::normal_distribution<double> normal(0.0, 20.0);
  std::vector<Channel> channels;
  for (const std::string& e : default_electrodes()) {
    Channel c{e, std::vector<double>(n)};
    for (double& v : c.samples) v = normal(rng);
    channels.push_back(std::move(c));
  }
  return EegRecording(rate_hz, std::move(channels));
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace neoburst::testing
