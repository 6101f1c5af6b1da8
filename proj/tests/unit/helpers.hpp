#ifndef NEOBURST_TESTS_HELPERS_HPP_
#define NEOBURST_TESTS_HELPERS_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "neoburst/signal.hpp"

namespace neoburst::testing {

std::vector<double> sine(double freq_hz, double rate_hz, std::size_t n, double amplitude = 1.0,
                         double phase = 0.0);

// Amplitude of the best-fitting sinusoid at freq_hz over x[from, to).
double tone_amplitude(const std::vector<double>& x, double freq_hz, double rate_hz,
                      std::size_t from, std::size_t to);

// Squared magnitudes of the prewarped bilinear Butterworth filters.
double butter_lp_sq(int order, double cutoff_hz, double f_hz, double rate_hz);
double butter_hp_sq(int order, double cutoff_hz, double f_hz, double rate_hz);

std::vector<std::uint8_t> random_labels(std::mt19937_64& rng, std::size_t n, double p_switch);

// Recording with every default electrode filled with independent noise.
EegRecording random_recording(std::mt19937_64& rng, double rate_hz, std::size_t n);

// Substring check with a readable failure message.
bool contains(const std::string& haystack, const std::string& needle);

}  // namespace neoburst::testing

#endif  // NEOBURST_TESTS_HELPERS_HPP_
