#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "pedtrack/voting.hpp"

namespace pedtrack {

/// One observation point: pedestrian number, slice time and position.
/// Coordinates are image pixels until a calibration is applied.
struct NtxyRecord {
  int pedestrian_number = 0;
  int time = 0;
  double x = 0.0;
  double y = 0.0;
};

struct TraceResult {
  std::vector<NtxyRecord> records;  // sorted by (pedestrian_number, time)
  std::vector<FeatureRow> rows;     // input rows with pedestrian numbers filled
};

namespace detail {

inline void check_database_order(const std::vector<FeatureRow>& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].slice_object_number < 1 || rows[i].slice_number < 1)
      throw InputError("descriptor database: non-positive slice or object number");
    if (i == 0) continue;
    const auto& a = rows[i - 1];
    const auto& b = rows[i];
    bool ordered = a.slice_number < b.slice_number ||
                   (a.slice_number == b.slice_number &&
                    a.slice_object_number < b.slice_object_number);
    if (!ordered)
      throw InputError("descriptor database: rows not ordered by (slice, object)");
  }
}

}  // namespace detail

/// Assigns pedestrian numbers through the stack and emits the observation
/// database.
///
/// Objects in the first slice are numbered 1..m in object order; any later
/// object still unnumbered when its slice is reached gets max + 1. Each
/// object then searches slices T+1 .. T+max_gap+1 in order and adopts the
/// first passing match, so a track survives up to max_gap consecutive
/// missing slices. A match found n slices ahead fills the n-1 skipped
/// slices with linearly interpolated positions. Candidates that already
/// carry a pedestrian number are never claimed twice.
inline TraceResult trace_stack(std::vector<FeatureRow> rows, const VoteParams& params) {
  params.validate();
  detail::check_database_order(rows);

  TraceResult result;
  if (rows.empty()) return result;

  // Row indices per slice number, object-number order preserved.
  std::map<int, std::vector<std::size_t>> slices;
  for (std::size_t i = 0; i < rows.size(); ++i)
    slices[rows[i].slice_number].push_back(i);
  const int last_slice = slices.rbegin()->first;

  for (auto& row : rows) row.pedestrian_number = -1;

  int max_pedestrian = 0;
  for (auto& [slice, indices] : slices) {
    // Number every object in this slice before matching forward.
    for (auto idx : indices)
      if (rows[idx].pedestrian_number < 0) rows[idx].pedestrian_number = ++max_pedestrian;

    for (auto idx : indices)
      result.records.push_back({rows[idx].pedestrian_number, slice, rows[idx].cg_area_x,
                                rows[idx].cg_area_y});

    for (auto idx : indices) {
      const FeatureRow& source = rows[idx];
      for (int gap = 1; gap <= params.max_gap + 1; ++gap) {
        const int target_slice = slice + gap;
        if (target_slice > last_slice) break;
        auto it = slices.find(target_slice);
        if (it == slices.end()) continue;

        std::vector<FeatureRow> candidates;
        std::set<int> claimed;
        candidates.reserve(it->second.size());
        for (auto cidx : it->second) {
          candidates.push_back(rows[cidx]);
          if (rows[cidx].pedestrian_number >= 0)
            claimed.insert(rows[cidx].slice_object_number);
        }

        auto tallies = cast_votes(source, candidates, gap, params);
        auto match = select_match(tallies, claimed, params);
        if (!match) continue;

        for (auto cidx : it->second) {
          if (rows[cidx].slice_object_number != *match) continue;
          rows[cidx].pedestrian_number = source.pedestrian_number;
          for (int j = 1; j < gap; ++j) {
            double t = static_cast<double>(j) / gap;
            result.records.push_back(
                {source.pedestrian_number, slice + j,
                 source.cg_area_x + (rows[cidx].cg_area_x - source.cg_area_x) * t,
                 source.cg_area_y + (rows[cidx].cg_area_y - source.cg_area_y) * t});
          }
          break;
        }
        break;  // stop at the first slice with a passing match
      }
    }
  }

  std::sort(result.records.begin(), result.records.end(),
            [](const NtxyRecord& a, const NtxyRecord& b) {
              return a.pedestrian_number != b.pedestrian_number
                         ? a.pedestrian_number < b.pedestrian_number
                         : a.time < b.time;
            });
  result.rows = std::move(rows);
  return result;
}

}  // namespace pedtrack
