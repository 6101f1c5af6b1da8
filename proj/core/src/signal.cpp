#include "neoburst/signal.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "neoburst/error.hpp"

namespace neoburst {

EegRecording::EegRecording(double sample_rate_hz, std::vector<Channel> channels,
                           double start_offset_s)
    : sample_rate_hz_(sample_rate_hz),
      channels_(std::move(channels)),
      start_offset_s_(start_offset_s) {
  if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_)) {
    throw Error("sample rate must be positive, got " +
                std::to_string(sample_rate_hz_));
  }
  if (!(start_offset_s_ >= 0.0)) {
    throw Error("start offset must be non-negative");
  }
  std::set<std::string> seen;
  for (const Channel& ch : channels_) {
    if (!seen.insert(ch.label).second) {
      throw Error("duplicate channel label '" + ch.label + "'");
    }
    if (ch.samples.size() != channels_.front().samples.size()) {
      throw Error("channel '" + ch.label + "' has " +
                  std::to_string(ch.samples.size()) + " samples, expected " +
                  std::to_string(channels_.front().samples.size()));
    }
  }
}

bool EegRecording::has_channel(const std::string& label) const {
  return std::any_of(channels_.begin(), channels_.end(),
                     [&](const Channel& c) { return c.label == label; });
}

const Channel& EegRecording::channel(const std::string& label) const {
  for (const Channel& c : channels_) {
    if (c.label == label) return c;
  }
  throw Error("recording has no electrode/channel '" + label + "'");
}

const std::vector<std::string>& default_electrodes() {
  static const std::vector<std::string> kElectrodes = {
      "T4", "T3", "O1", "O2", "F4", "F3", "C4", "C3", "Cz"};
  return kElectrodes;
}

MontageSpec default_montage() {
  return MontageSpec{{{"F4", "C4"},
                      {"C4", "O2"},
                      {"F3", "C3"},
                      {"C3", "O1"},
                      {"T4", "C4"},
                      {"C4", "Cz"},
                      {"Cz", "C3"},
                      {"C3", "T3"}}};
}

EegRecording derive_montage(const EegRecording& rec, const MontageSpec& spec) {
  std::vector<Channel> out;
  out.reserve(spec.pairs.size());
  for (const auto& [anode, cathode] : spec.pairs) {
    for (const std::string& label : {anode, cathode}) {
      if (!rec.has_channel(label)) {
        throw Error("montage references unknown electrode '" + label + "'");
      }
    }
    const auto& a = rec.channel(anode).samples;
    const auto& c = rec.channel(cathode).samples;
    Channel ch{anode + "-" + cathode, std::vector<double>(a.size())};
    for (std::size_t i = 0; i < a.size(); ++i) ch.samples[i] = a[i] - c[i];
    out.push_back(std::move(ch));
  }
  return EegRecording(rec.sample_rate_hz(), std::move(out),
                      rec.start_offset_s());
}

BinaryMask::BinaryMask(double rate_hz, std::vector<std::uint8_t> labels)
    : rate_hz_(rate_hz), labels_(std::move(labels)) {
  if (!(rate_hz_ > 0.0) || !std::isfinite(rate_hz_)) {
    throw Error("mask rate must be positive");
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] > 1) {
      throw Error("mask value at sample " + std::to_string(i) +
                  " is not 0 or 1");
    }
  }
}

std::size_t BinaryMask::interburst_count() const {
  return static_cast<std::size_t>(
      std::count(labels_.begin(), labels_.end(), std::uint8_t{1}));
}

IntervalList::IntervalList(double epoch_length_s,
                           std::vector<Interval> intervals)
    : epoch_length_s_(epoch_length_s), intervals_(std::move(intervals)) {
  if (!(epoch_length_s_ > 0.0)) {
    throw Error("epoch length must be positive");
  }
  double prev_end = 0.0;
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    const Interval& iv = intervals_[i];
    if (!(iv.duration_s > 0.0)) {
      throw Error("interval " + std::to_string(i) +
                  " has non-positive duration");
    }
    if (iv.start_s < prev_end || iv.start_s < 0.0) {
      throw Error("interval " + std::to_string(i) +
                  " overlaps its predecessor or is out of order");
    }
    if (iv.end_s() > epoch_length_s_ * (1.0 + 1e-12)) {
      throw Error("interval " + std::to_string(i) + " extends past the epoch");
    }
    prev_end = iv.end_s();
  }
}

IntervalList mask_to_intervals(const BinaryMask& mask) {
  if (mask.empty()) throw Error("cannot extract intervals from an empty mask");
  const auto& labels = mask.labels();
  const double rate = mask.rate_hz();
  std::vector<Interval> out;
  std::size_t i = 0;
  while (i < labels.size()) {
    if (labels[i] == 0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < labels.size() && labels[j] != 0) ++j;
    out.push_back({static_cast<double>(i) / rate,
                   static_cast<double>(j - i) / rate});
    i = j;
  }
  return IntervalList(mask.duration_s(), std::move(out));
}

BinaryMask intervals_to_mask(const IntervalList& intervals, double rate_hz) {
  if (!(rate_hz > 0.0)) throw Error("mask rate must be positive");
  const auto n = static_cast<std::size_t>(
      std::llround(intervals.epoch_length_s() * rate_hz));
  std::vector<std::uint8_t> labels(n, 0);
  for (const Interval& iv : intervals.intervals()) {
    auto lo = static_cast<std::size_t>(std::llround(iv.start_s * rate_hz));
    auto hi = static_cast<std::size_t>(std::llround(iv.end_s() * rate_hz));
    hi = std::min(hi, n);
    for (std::size_t k = lo; k < hi; ++k) labels[k] = 1;
  }
  return BinaryMask(rate_hz, std::move(labels));
}

BinaryMask majority_vote(std::span<const BinaryMask> masks) {
  if (masks.empty()) throw Error("majority vote needs at least one mask");
  const BinaryMask& first = masks.front();
  for (std::size_t m = 1; m < masks.size(); ++m) {
    if (masks[m].size() != first.size() ||
        masks[m].rate_hz() != first.rate_hz()) {
      throw Error("mask " + std::to_string(m) +
                  " differs in length or rate from mask 0");
    }
  }
  std::vector<std::uint8_t> out(first.size(), 0);
  const std::size_t n = masks.size();
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::size_t votes = 0;
    for (const BinaryMask& m : masks) votes += m.labels()[i];
    out[i] = (2 * votes > n) ? 1 : 0;
  }
  return BinaryMask(first.rate_hz(), std::move(out));
}

}  // namespace neoburst
