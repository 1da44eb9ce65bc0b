/*
 * Copyright 2026 The treecache Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Brute-force reference implementations for tests. They work on raw parent
// arrays and bitmasks and share no code with the library.

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

using Mask = std::uint32_t;

struct Req {
  int node;
  bool positive;
};

inline bool in(Mask m, int v) { return (m >> v) & 1u; }

/// Descendant-closed: a member's ancestors never pull in a non-member below them.
inline bool is_subforest(const std::vector<int>& parent, Mask s) {
  const int n = static_cast<int>(parent.size());
  for (int v = 0; v < n; ++v) {
    if (in(s, v)) continue;
    for (int a = parent[v]; a >= 0; a = parent[a]) {
      if (in(s, a)) return false;
    }
  }
  return true;
}

inline bool valid(const std::vector<int>& parent, Mask cache, Mask x, bool positive) {
  if (x == 0) return false;
  if (positive) return (x & cache) == 0 && is_subforest(parent, cache | x);
  return (x & cache) == x && is_subforest(parent, cache & ~x);
}

inline int popcount(Mask m) { return __builtin_popcount(m); }

struct Step {
  bool charged = false;
  Mask applied = 0;
  bool applied_positive = false;
  bool phase_ended = false;
  Mask overflow = 0;
  int k_p = 0;
};

struct Result {
  long long serve = 0;
  long long move = 0;
  std::vector<Step> steps;
  bool ambiguous = false;
  long long total() const { return serve + move; }
};

/// TC by exhaustive search over every valid changeset (any node set, not only caps):
/// apply the unique saturated changeset with no saturated valid strict superset.
inline Result run_tc(const std::vector<int>& parent, long long alpha, int k,
                     const std::vector<Req>& trace) {
  const int n = static_cast<int>(parent.size());
  if (n > 16) throw std::invalid_argument("oracle limited to 16 nodes");
  const Mask all = n == 32 ? ~Mask{0} : ((Mask{1} << n) - 1);
  Result res;
  Mask cache = 0;
  std::vector<long long> cnt(n, 0);
  for (const Req& r : trace) {
    Step st;
    const bool cached = in(cache, r.node);
    st.charged = r.positive != cached;
    if (st.charged) {
      ++res.serve;
      ++cnt[r.node];
      std::vector<Mask> sat;
      for (Mask x = 1; x <= all; ++x) {
        if (!valid(parent, cache, x, r.positive)) continue;
        long long c = 0;
        for (int v = 0; v < n; ++v) {
          if (in(x, v)) c += cnt[v];
        }
        if (c >= popcount(x) * alpha) sat.push_back(x);
      }
      std::vector<Mask> maximal;
      for (Mask x : sat) {
        bool dominated = false;
        for (Mask y : sat) {
          if (y != x && (y & x) == x) dominated = true;
        }
        if (!dominated) maximal.push_back(x);
      }
      if (maximal.size() > 1) res.ambiguous = true;
      if (!maximal.empty()) {
        const Mask x = maximal.front();
        if (r.positive && popcount(cache | x) > k) {
          st.phase_ended = true;
          st.overflow = x;
          st.k_p = popcount(cache | x);
          res.move += alpha * popcount(cache);
          cache = 0;
          std::fill(cnt.begin(), cnt.end(), 0);
        } else {
          st.applied = x;
          st.applied_positive = r.positive;
          res.move += alpha * popcount(x);
          cache = r.positive ? (cache | x) : (cache & ~x);
          for (int v = 0; v < n; ++v) {
            if (in(x, v)) cnt[v] = 0;
          }
        }
      }
    }
    res.steps.push_back(st);
  }
  return res;
}

/// Offline optimum with arbitrary reorganisation between rounds (including before round 1)
/// over all subforests of size <= k, from an empty cache.
inline long long opt_cost(const std::vector<int>& parent, long long alpha, int k,
                          const std::vector<Req>& trace) {
  const int n = static_cast<int>(parent.size());
  std::vector<Mask> states;
  for (Mask s = 0; s < (Mask{1} << n); ++s) {
    if (popcount(s) <= k && is_subforest(parent, s)) states.push_back(s);
  }
  const long long inf = std::numeric_limits<long long>::max() / 4;
  std::vector<long long> dp(states.size(), inf);
  for (std::size_t i = 0; i < states.size(); ++i) dp[i] = alpha * popcount(states[i]);
  for (const Req& r : trace) {
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (in(states[i], r.node) != r.positive) ++dp[i];
    }
    std::vector<long long> next(states.size(), inf);
    for (std::size_t i = 0; i < states.size(); ++i) {
      for (std::size_t j = 0; j < states.size(); ++j) {
        next[j] = std::min(next[j], dp[i] + alpha * popcount(states[i] ^ states[j]));
      }
    }
    dp = std::move(next);
  }
  return trace.empty() ? 0 : *std::min_element(dp.begin(), dp.end());
}

struct Field {
  int end = 0;  // round of the changeset
  bool positive = false;
  bool artificial = false;
  Mask nodes = 0;
  long long req = 0;
};

/// Fields from an oracle run: each changeset X at round t owns, for v in X, the charged
/// requests at v after v's previous flip (or the phase start) up to t.
inline std::vector<Field> fields(const std::vector<int>& parent, const std::vector<Req>& trace,
                                 const Result& run) {
  const int n = static_cast<int>(parent.size());
  std::vector<int> last(n, 0);
  std::vector<Field> out;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const int t = static_cast<int>(i) + 1;
    const Step& st = run.steps[i];
    const Mask x = st.phase_ended ? st.overflow : st.applied;
    if (x == 0) continue;
    Field f;
    f.end = t;
    f.positive = st.phase_ended || st.applied_positive;
    f.artificial = st.phase_ended;
    f.nodes = x;
    for (std::size_t j = 0; j < i + 1; ++j) {
      const int v = trace[j].node;
      if (in(x, v) && run.steps[j].charged && static_cast<int>(j) + 1 > last[v]) ++f.req;
    }
    out.push_back(f);
    if (st.phase_ended) {
      std::fill(last.begin(), last.end(), t);
    } else {
      for (int v = 0; v < n; ++v) {
        if (in(x, v)) last[v] = t;
      }
    }
  }
  return out;
}

inline std::vector<int> random_parents(int n, std::mt19937_64& rng) {
  std::vector<int> p(n, -1);
  for (int i = 1; i < n; ++i) p[i] = static_cast<int>(rng() % static_cast<unsigned>(i));
  return p;
}

}  // namespace oracle
