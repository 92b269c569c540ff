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

#include "dqe/stopping.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "dqe/errors.hpp"

namespace dqe {

StoppingRule StoppingRule::first_run_of_zeros(std::int64_t n) {
  if (n < 1) fail(ErrorKind::kParameter, "run length must be >= 1");
  return {StopKind::kFirstRunOfZeros, n, 0};
}

StoppingRule StoppingRule::secretary(std::int64_t horizon) {
  if (horizon < 1) fail(ErrorKind::kParameter, "secretary horizon must be >= 1");
  return {StopKind::kSecretary, horizon, 0};
}

StoppingRule StoppingRule::expected_rank(std::int64_t max_runs) {
  if (max_runs < 1) fail(ErrorKind::kParameter, "run budget must be >= 1");
  if (max_runs > 1000000) fail(ErrorKind::kParameter, "run budget too large");
  return {StopKind::kExpectedRank, max_runs, 0};
}

StoppingRule StoppingRule::cap(std::int64_t max_steps) {
  if (max_steps < 1) fail(ErrorKind::kParameter, "time cap must be >= 1");
  return {StopKind::kTimeCap, max_steps, max_steps};
}

StoppingRule StoppingRule::with_time_cap(std::int64_t max_steps) const {
  if (max_steps < 1) fail(ErrorKind::kParameter, "time cap must be >= 1");
  StoppingRule r = *this;
  r.time_cap = max_steps;
  return r;
}

namespace {

std::int64_t parse_count(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) {
    fail(ErrorKind::kConfig, "bad " + what + " '" + text + "'");
  }
  return v;
}

}  // namespace

StoppingRule StoppingRule::parse(const std::string& text) {
  std::string main = text;
  std::int64_t cap_steps = 0;
  if (auto comma = text.find(','); comma != std::string::npos) {
    main = text.substr(0, comma);
    std::string tail = text.substr(comma + 1);
    if (tail.rfind("cap:", 0) != 0) {
      fail(ErrorKind::kConfig, "expected ',cap:N' after the stopping rule");
    }
    cap_steps = parse_count(tail.substr(4), "time cap");
  }
  auto colon = main.find(':');
  if (colon == std::string::npos) {
    fail(ErrorKind::kConfig, "stopping rule needs 'kind:value', got '" + text +
                                 "'");
  }
  std::string kind = main.substr(0, colon);
  std::int64_t value = parse_count(main.substr(colon + 1), "stopping value");
  StoppingRule r;
  if (kind == "run-of-zeros") {
    r = first_run_of_zeros(value);
  } else if (kind == "secretary") {
    r = secretary(value);
  } else if (kind == "expected-rank") {
    r = expected_rank(value);
  } else if (kind == "time-cap") {
    r = cap(value);
  } else {
    fail(ErrorKind::kConfig, "unknown stopping rule '" + kind + "'");
  }
  return cap_steps > 0 ? r.with_time_cap(cap_steps) : r;
}

std::string StoppingRule::str() const {
  std::ostringstream os;
  switch (kind) {
    case StopKind::kFirstRunOfZeros:
      os << "run-of-zeros:" << n;
      break;
    case StopKind::kSecretary:
      os << "secretary:" << n;
      break;
    case StopKind::kExpectedRank:
      os << "expected-rank:" << n;
      break;
    case StopKind::kTimeCap:
      os << "time-cap:" << n;
      return os.str();
  }
  if (time_cap > 0) os << ",cap:" << time_cap;
  return os.str();
}

bool ranks_above(const RunRecord& a, const RunRecord& b) {
  if (a.length != b.length) return a.length > b.length;
  return a.key > b.key;
}

Decision should_stop(const StoppingRule& rule, const History& h,
                     const ChowThresholds* thresholds) {
  bool stop = false;
  bool exhausted = false;
  switch (rule.kind) {
    case StopKind::kFirstRunOfZeros:
      stop = h.last_outcome_zero && h.current.length >= rule.n;
      break;
    case StopKind::kSecretary: {
      const auto observe = static_cast<std::int64_t>(
          std::floor(static_cast<double>(rule.n) / std::numbers::e));
      // h.step - 1 is the zero-based index of the latest outcome.
      stop = h.last_outcome_zero && h.step - 1 >= observe &&
             (!h.has_best || ranks_above(h.current, h.best));
      exhausted = h.step >= rule.n;
      break;
    }
    case StopKind::kExpectedRank: {
      if (thresholds == nullptr || thresholds->n != rule.n) {
        fail(ErrorKind::kInternalOrdering,
             "expected-rank rule evaluated without its threshold table");
      }
      if (h.run_index > rule.n) {
        exhausted = true;
        break;
      }
      if (h.last_outcome_zero) {
        std::int64_t rank = 1;
        for (const RunRecord& r : h.completed) {
          if (ranks_above(r, h.current)) ++rank;
        }
        stop = rank <= thresholds->s[static_cast<std::size_t>(h.run_index)];
      }
      break;
    }
    case StopKind::kTimeCap:
      break;
  }
  if (stop) return Decision::kStop;
  if (exhausted) return Decision::kTruncated;
  if (rule.time_cap > 0 && h.step >= rule.time_cap) return Decision::kTruncated;
  return Decision::kContinue;
}

StoppingState::StoppingState(const StoppingRule& rule, std::uint64_t seed)
    : rule_(rule), rng_(seed) {
  history_.current.key = uniform01(rng_);
  if (rule_.kind == StopKind::kExpectedRank) {
    chow_ = chow_thresholds(static_cast<int>(rule_.n));
  }
}

Decision StoppingState::observe(int bit) {
  ++history_.step;
  if (bit == 0) {
    ++history_.current.length;
    history_.last_outcome_zero = true;
  } else {
    const RunRecord done = history_.current;
    if (!history_.has_best || ranks_above(done, history_.best)) {
      history_.best = done;
      history_.has_best = true;
    }
    if (rule_.kind == StopKind::kExpectedRank) history_.completed.push_back(done);
    ++history_.run_index;
    history_.current = {0, uniform01(rng_)};
    history_.last_outcome_zero = false;
  }
  return should_stop(rule_, history_,
                     rule_.kind == StopKind::kExpectedRank ? &chow_ : nullptr);
}

ChowThresholds chow_thresholds(int n) {
  if (n < 1) fail(ErrorKind::kParameter, "Chow recursion needs n >= 1");
  ChowThresholds t;
  t.n = n;
  t.s.assign(static_cast<std::size_t>(n) + 1, 0);
  t.c.assign(static_cast<std::size_t>(n), 0.0);
  const double np1 = n + 1.0;
  t.s[static_cast<std::size_t>(n)] = n;
  t.c[static_cast<std::size_t>(n - 1)] = np1 / 2.0;
  for (int i = n - 1; i >= 1; --i) {
    const double ci = t.c[static_cast<std::size_t>(i)];
    // Small guard keeps exact integers from flooring one below.
    const int si = static_cast<int>(std::floor((i + 1.0) / np1 * ci + 1e-12));
    t.s[static_cast<std::size_t>(i)] = si;
    t.c[static_cast<std::size_t>(i - 1)] =
        (np1 / (i + 1.0) * si * (si + 1.0) / 2.0 + (i - si) * ci) / i;
  }
  return t;
}

int chow_select(const ChowThresholds& t, const std::vector<int>& ranks) {
  for (std::size_t k = 0; k < ranks.size(); ++k) {
    int relative = 1;
    for (std::size_t j = 0; j < k; ++j) {
      if (ranks[j] < ranks[k]) ++relative;
    }
    if (relative <= t.s[k + 1]) return static_cast<int>(k) + 1;
  }
  return static_cast<int>(ranks.size());
}

EpsilonSchedule EpsilonSchedule::constant(double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) {
    fail(ErrorKind::kParameter, "eps must lie in (0, 1]");
  }
  return {ScheduleKind::kConstant, eps};
}

EpsilonSchedule EpsilonSchedule::decaying(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    fail(ErrorKind::kParameter, "decaying base eps must lie in (0, 1)");
  }
  return {ScheduleKind::kDecaying, eps};
}

double epsilon_at(const EpsilonSchedule& schedule, std::int64_t t,
                  std::int64_t t1) {
  if (t <= t1) {
    fail(ErrorKind::kInternalOrdering,
         "step " + std::to_string(t) + " is not after the last failure at " +
             std::to_string(t1));
  }
  if (schedule.kind == ScheduleKind::kConstant) return schedule.eps;
  return schedule.eps / static_cast<double>(t - t1);
}

double suggest_epsilon(const PauliHamiltonian& h) {
  if (h.num_terms() < 1) {
    fail(ErrorKind::kParameter, "suggest_epsilon needs at least one term");
  }
  return 1.0 / (4.0 * static_cast<double>(h.num_terms()) + 4.0);
}

}  // namespace dqe
