// Copyright 2026 The DQE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dqe/linalg.hpp"
#include "dqe/pauli.hpp"

namespace dqe {

enum class StopKind { kFirstRunOfZeros, kSecretary, kExpectedRank, kTimeCap };

/// When to halt the outcome stream. Any rule can carry an extra time cap.
struct StoppingRule {
  StopKind kind = StopKind::kFirstRunOfZeros;
  /// Run length, secretary horizon in steps, or expected-rank run budget.
  std::int64_t n = 1;
  /// Hard step cap; 0 means none.
  std::int64_t time_cap = 0;

  static StoppingRule first_run_of_zeros(std::int64_t n);
  static StoppingRule secretary(std::int64_t horizon);
  static StoppingRule expected_rank(std::int64_t max_runs);
  static StoppingRule cap(std::int64_t max_steps);
  StoppingRule with_time_cap(std::int64_t max_steps) const;

  /// "run-of-zeros:6", "secretary:400", "expected-rank:20", "time-cap:100",
  /// optionally followed by ",cap:N".
  static StoppingRule parse(const std::string& text);
  std::string str() const;
};

/// One zero-run: length plus an independent uniform key that orders equal
/// lengths.
struct RunRecord {
  std::int64_t length = 0;
  double key = 0.0;
};

/// Everything a rule may look at. Built only from outcomes seen so far.
struct History {
  std::int64_t step = 0;  ///< outcomes observed
  RunRecord current;      ///< run in progress
  std::int64_t run_index = 1;
  std::vector<RunRecord> completed;
  bool has_best = false;
  RunRecord best;  ///< top-ranked completed run
  bool last_outcome_zero = false;
};

/// True when run a ranks above run b.
bool ranks_above(const RunRecord& a, const RunRecord& b);

enum class Decision { kContinue, kStop, kTruncated };

/// Chow expected-rank thresholds s_1..s_n and values c_0..c_{n-1}.
struct ChowThresholds {
  int n = 0;
  std::vector<int> s;     ///< s[i] for i in 1..n; s[0] unused
  std::vector<double> c;  ///< c[i] for i in 0..n-1

  double expected_rank() const { return c.front(); }
};

ChowThresholds chow_thresholds(int n);
/// Index (1-based) of the candidate the threshold policy accepts for a
/// sequence of distinct absolute ranks (1 = best).
int chow_select(const ChowThresholds& t, const std::vector<int>& ranks);

/// Pure decision function. Expected-rank rules need `thresholds`.
Decision should_stop(const StoppingRule& rule, const History& history,
                     const ChowThresholds* thresholds = nullptr);

/// Rule state owned by one trajectory. Tie-break keys come from `seed`.
class StoppingState {
 public:
  StoppingState(const StoppingRule& rule, std::uint64_t seed);

  Decision observe(int bit);
  const History& history() const { return history_; }

 private:
  StoppingRule rule_;
  Rng rng_;
  History history_;
  ChowThresholds chow_;
};

enum class ScheduleKind { kConstant, kDecaying };

struct EpsilonSchedule {
  ScheduleKind kind = ScheduleKind::kConstant;
  double eps = 0.1;

  static EpsilonSchedule constant(double eps);
  static EpsilonSchedule decaying(double eps);
};

/// eps for step t given the step t1 of the last 1-outcome (0 if none).
double epsilon_at(const EpsilonSchedule& schedule, std::int64_t t,
                  std::int64_t t1);

/// 1/(4m + 4).
double suggest_epsilon(const PauliHamiltonian& h);

}  // namespace dqe
