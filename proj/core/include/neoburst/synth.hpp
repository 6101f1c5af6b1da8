#ifndef NEOBURST_SYNTH_HPP_
#define NEOBURST_SYNTH_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "neoburst/detector.hpp"
#include "neoburst/hie_grade.hpp"
#include "neoburst/signal.hpp"

namespace neoburst {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return v >= lo && v <= hi; }
};

struct GradeProfile {
  HieGrade grade;
  Range ibi_duration_s;
  Range ibi_percent;
  Range burst_rms_uv;
  Range interburst_rms_uv;
  // Probability that a subject of this grade is a flat, all inter-burst trace.
  double flat_probability = 0.0;
};

const std::array<GradeProfile, HieGrade::kCount>& default_profiles();
const GradeProfile& profile_for(HieGrade grade);

// Shortest epoch generate_subject accepts: 600 s or ten times the longest
// inter-burst duration, whichever is smaller.
double minimum_epoch_s(HieGrade grade);

// Throws the precondition failures of generate_subject.
void check_subject_args(HieGrade grade, double duration_s, double fs_hz);

// Rate of the ground-truth masks.
inline constexpr double kTruthRateHz = 64.0;

struct SyntheticSubject {
  std::string subject_id;
  EegRecording recording;                 // referential, default electrodes
  std::vector<std::string> truth_labels;  // bipolar labels, default montage
  std::vector<BinaryMask> truth_masks;    // one per bipolar channel
  HieGrade true_grade;
  std::uint64_t seed = 0;
  bool flat = false;
};

// Alternating burst / inter-burst epoch that starts and ends with a burst.
// Boundaries are shared by all electrodes; the signal content is drawn
// independently per electrode. Requires fs >= 64 and an epoch of at least
// 600 s or ten times the longest inter-burst duration of the profile.
SyntheticSubject generate_subject(HieGrade grade, double duration_s, double fs_hz,
                                  std::uint64_t seed, std::string subject_id = "");

// Bipolar derivation on the default montage paired with the truth masks.
LabeledRecording labeled_recording(const SyntheticSubject& subject);

struct CorpusOptions {
  int n = 54;
  std::array<int, HieGrade::kCount> grade_counts{22, 14, 12, 6};
  double epoch_s = 3600.0;
  double fs_hz = 256.0;
  std::uint64_t seed = 1;
};

struct CorpusEntry {
  std::string subject_id;
  HieGrade grade;
  std::uint64_t seed = 0;
};

// Subject i (0-based, grades in ascending order) uses seed + i and id
// "S01", "S02", ... Throws when the grade counts do not sum to n or a
// requested grade cannot be generated with the epoch and rate given.
std::vector<CorpusEntry> corpus_plan(const CorpusOptions& options);

// Materialises every subject of corpus_plan. A one-hour 256 Hz subject
// takes about 66 MB, so large corpora are better generated one at a time.
std::vector<SyntheticSubject> generate_corpus(const CorpusOptions& options);

}  // namespace neoburst

#endif  // NEOBURST_SYNTH_HPP_
