// Copyright 2026 The osnsim Authors.
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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "osnsim/ingest.hpp"

namespace osnsim {

/// Plug-in transfer entropy (nats) from `src` to `dst` over the binary joint
/// histogram of (dst_t, dst_{t-lag}, src_{t-lag}). Throws LengthMismatch or
/// SeriesTooShort (length < lag + 2).
double transfer_entropy(std::span<const std::uint8_t> src,
                        std::span<const std::uint8_t> dst, std::size_t lag = 1);

/// Transfer entropy divided by H(dst_t | dst_{t-lag}); 0 when that entropy
/// is 0. Always in [0, 1].
double normalized_te(std::span<const std::uint8_t> src,
                     std::span<const std::uint8_t> dst, std::size_t lag = 1);

struct TransferEntropy {
  double te = 0.0;
  double nte = 0.0;
};

/// Both quantities from a single histogram pass.
TransferEntropy transfer_entropy_pair(std::span<const std::uint8_t> src,
                                      std::span<const std::uint8_t> dst,
                                      std::size_t lag = 1);

struct InfluenceEdge {
  std::string source;
  std::string target;
  double te = 0.0;
  double nte = 0.0;

  friend bool operator==(const InfluenceEdge&, const InfluenceEdge&) = default;
};

/// Directed influence graph. Node values are activity totals; edges are kept
/// sorted by (source, target) and never contain self-loops.
struct InfluenceNetwork {
  std::map<std::string, std::uint64_t> nodes;
  std::vector<InfluenceEdge> edges;

  bool has_edge(const std::string& source, const std::string& target) const;
  std::vector<std::string> successors(const std::string& node) const;
};

struct InfluenceConfig {
  std::size_t lag = 1;
  double nte_threshold = 0.2;
  std::int64_t tick_len = 3600;
  std::uint32_t binarize_threshold = 1;
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// Scores every ordered (source, target) pair and keeps edges with
/// nte >= threshold. Pairs with identical owners are skipped. Pair scoring
/// runs on worker threads; the result does not depend on the thread count.
InfluenceNetwork build_network_from_series(std::span<const BinarySeries> sources,
                                           std::span<const BinarySeries> targets,
                                           std::size_t lag, double nte_threshold,
                                           unsigned threads = 0);

/// Endogenous user -> user network. Throws EmptyLog.
InfluenceNetwork build_influence_network(const EventLog& log,
                                         const InfluenceConfig& config = {});

/// Each wave adds every in- and out-neighbour of the current set.
/// Throws UnknownSeed.
std::set<std::string> snowball_sample(const InfluenceNetwork& network,
                                      const std::set<std::string>& seeds,
                                      std::size_t waves);

/// Seeds are the `seed_count` nodes with the largest outgoing nte mass (ties
/// by id); returns their snowball sample.
std::set<std::string> influential_users(const InfluenceNetwork& network,
                                        std::size_t seed_count, std::size_t waves);

struct UserSplit {
  std::set<ActorId> active;
  std::set<ActorId> less_active;
};

/// Linear-interpolation quantile (the numpy default) of `values`.
double quantile(std::vector<double> values, double q);

/// Users whose event count reaches the `q`-quantile of per-user counts are
/// active; ties at the quantile go to active. Throws EmptyLog / BadConfig.
UserSplit split_users(const EventLog& log, double q);

/// Least-active users whose events together make up at most `share` of the
/// log become less-active. Users with equal counts always land on the same
/// side.
UserSplit split_by_interaction_share(const EventLog& log, double share);

/// `source,target,te,nte` with 9 significant digits.
void write_network_csv(std::ostream& out, const InfluenceNetwork& network);
InfluenceNetwork read_network_csv(std::istream& in);

}  // namespace osnsim
