#pragma once

#include <cmath>
#include <optional>
#include <set>
#include <vector>

#include "pedtrack/features.hpp"
#include "pedtrack/util.hpp"

namespace pedtrack {

/// Parameters of the descriptor-voting matcher.
struct VoteParams {
  double voting_threshold = 50.0;  // percent; a candidate passes when its
                                   // voting percentage reaches this value
  double speed_threshold = 0.0;    // max plausible displacement, pixels/slice
  int max_gap = 3;                 // consecutive missing slices a track survives

  void validate() const {
    if (voting_threshold < 0.0 || voting_threshold > 100.0)
      throw InputError("voting_threshold must be in [0, 100]");
    if (speed_threshold <= 0.0)
      throw InputError("speed_threshold must be positive");
    if (max_gap < 1) throw InputError("max_gap must be >= 1");
  }
};

/// Vote outcome for one candidate object.
struct VoteTally {
  int candidate = 0;             // slice_object_number in the target slice
  int votes = 0;
  int eligible_descriptors = 0;  // descriptors present on both sides
  double percentage = 0.0;       // 100 * votes / eligible, 0 when none eligible
};

inline bool descriptor_missing(double v) { return v == kMissing; }

/// Plurality voting of one source object against all candidates of slice
/// T + gap. Candidates whose centroid lies at least gap * speed_threshold
/// away are treated as fully missing. For each descriptor present on the
/// source, the candidate with the smallest absolute difference wins one
/// vote; equal differences go to the smaller slice_object_number.
inline std::vector<VoteTally> cast_votes(const FeatureRow& source,
                                         const std::vector<FeatureRow>& candidates, int gap,
                                         const VoteParams& params) {
  std::vector<VoteTally> tallies(candidates.size());
  if (candidates.empty()) return tallies;

  std::vector<bool> gated(candidates.size(), false);
  const double radius = static_cast<double>(gap) * params.speed_threshold;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    tallies[i].candidate = candidates[i].slice_object_number;
    double dx = candidates[i].cg_area_x - source.cg_area_x;
    double dy = candidates[i].cg_area_y - source.cg_area_y;
    gated[i] = std::hypot(dx, dy) >= radius;
  }

  for (int k = 0; k < kDescriptorCount; ++k) {
    const double sv = descriptor(source, k);
    if (descriptor_missing(sv)) continue;

    int winner = -1;
    double best = 0.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (gated[i]) continue;
      const double cv = descriptor(candidates[i], k);
      if (descriptor_missing(cv)) continue;
      tallies[i].eligible_descriptors += 1;
      const double diff = std::abs(sv - cv);
      bool wins = winner < 0 || diff < best ||
                  (diff == best && candidates[i].slice_object_number <
                                       candidates[winner].slice_object_number);
      if (wins) {
        winner = static_cast<int>(i);
        best = diff;
      }
    }
    if (winner >= 0) tallies[winner].votes += 1;
  }

  for (auto& t : tallies)
    t.percentage =
        t.eligible_descriptors > 0 ? 100.0 * t.votes / t.eligible_descriptors : 0.0;
  return tallies;
}

/// Picks the winning candidate: the unclaimed one with the most votes whose
/// voting percentage reaches the threshold. Candidates with no eligible
/// descriptors never pass. Vote ties go to the smaller candidate number.
inline std::optional<int> select_match(const std::vector<VoteTally>& tallies,
                                       const std::set<int>& already_claimed,
                                       const VoteParams& params) {
  const VoteTally* best = nullptr;
  for (const auto& t : tallies) {
    if (t.eligible_descriptors == 0) continue;
    // Exact rational compare of 100*votes/eligible >= threshold.
    if (100.0 * t.votes < params.voting_threshold * t.eligible_descriptors) continue;
    if (already_claimed.count(t.candidate)) continue;
    if (!best || t.votes > best->votes ||
        (t.votes == best->votes && t.candidate < best->candidate))
      best = &t;
  }
  if (!best) return std::nullopt;
  return best->candidate;
}

}  // namespace pedtrack
