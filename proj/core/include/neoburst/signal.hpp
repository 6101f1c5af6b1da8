#ifndef NEOBURST_SIGNAL_HPP_
#define NEOBURST_SIGNAL_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace neoburst {

struct Channel {
  std::string label;
  std::vector<double> samples;  // microvolts
};

// Multi-channel recording sampled at a single rate. Construction validates
// that channels have equal length and unique labels.
class EegRecording {
 public:
  EegRecording(double sample_rate_hz, std::vector<Channel> channels,
               double start_offset_s = 0.0);

  double sample_rate_hz() const { return sample_rate_hz_; }
  double start_offset_s() const { return start_offset_s_; }
  const std::vector<Channel>& channels() const { return channels_; }
  std::size_t channel_count() const { return channels_.size(); }
  std::size_t sample_count() const {
    return channels_.empty() ? 0 : channels_.front().samples.size();
  }
  double duration_s() const { return sample_count() / sample_rate_hz_; }

  // Throws Error if no channel carries `label`.
  const Channel& channel(const std::string& label) const;
  bool has_channel(const std::string& label) const;

 private:
  double sample_rate_hz_;
  std::vector<Channel> channels_;
  double start_offset_s_;
};

struct MontageSpec {
  std::vector<std::pair<std::string, std::string>> pairs;  // (anode, cathode)
};

// The nine recording electrodes used by the default montage.
const std::vector<std::string>& default_electrodes();

// F4-C4, C4-O2, F3-C3, C3-O1, T4-C4, C4-Cz, Cz-C3, C3-T3.
MontageSpec default_montage();

// Channel i is anode minus cathode, labelled "A-C".
EegRecording derive_montage(const EegRecording& rec, const MontageSpec& spec);

enum class MaskLabel : std::uint8_t { kBurst = 0, kInterburst = 1 };

class BinaryMask {
 public:
  BinaryMask(double rate_hz, std::vector<std::uint8_t> labels);

  double rate_hz() const { return rate_hz_; }
  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  double duration_s() const { return labels_.size() / rate_hz_; }
  const std::vector<std::uint8_t>& labels() const { return labels_; }
  bool is_interburst(std::size_t i) const { return labels_[i] != 0; }
  std::size_t interburst_count() const;

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  double rate_hz_;
  std::vector<std::uint8_t> labels_;
};

struct Interval {
  double start_s = 0.0;
  double duration_s = 0.0;

  double end_s() const { return start_s + duration_s; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Inter-burst intervals of one epoch. Intervals are sorted, disjoint, have
// positive duration and lie inside [0, epoch_length_s].
class IntervalList {
 public:
  IntervalList(double epoch_length_s, std::vector<Interval> intervals);

  double epoch_length_s() const { return epoch_length_s_; }
  const std::vector<Interval>& intervals() const { return intervals_; }
  std::size_t size() const { return intervals_.size(); }
  bool empty() const { return intervals_.empty(); }

 private:
  double epoch_length_s_;
  std::vector<Interval> intervals_;
};

// One interval per maximal run of inter-burst samples.
IntervalList mask_to_intervals(const BinaryMask& mask);

// Sample i is inter-burst when its index falls inside
// [round(start*rate), round(end*rate)) of some interval.
BinaryMask intervals_to_mask(const IntervalList& intervals, double rate_hz);

// Per-sample strict majority: inter-burst iff more than half the inputs are
// inter-burst. Ties go to burst.
BinaryMask majority_vote(std::span<const BinaryMask> masks);

}  // namespace neoburst

#endif  // NEOBURST_SIGNAL_HPP_
