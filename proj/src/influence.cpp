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

#include "osnsim/influence.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <thread>
#include <unordered_map>

#include "csv.hpp"
#include "osnsim/error.hpp"

namespace osnsim {

using detail::csv_field;
using detail::split_csv_line;

namespace {

// Entropy (nats) of a Bernoulli variable observed `ones` times in `total`.
double binary_entropy(std::uint64_t ones, std::uint64_t total) {
  if (ones == 0 || ones == total) return 0.0;
  const double p = static_cast<double>(ones) / static_cast<double>(total);
  return -p * std::log(p) - (1.0 - p) * std::log1p(-p);
}

void check_series(std::span<const std::uint8_t> src,
                  std::span<const std::uint8_t> dst, std::size_t lag) {
  if (src.size() != dst.size()) {
    throw Error(Errc::LengthMismatch, "source and target series differ in length");
  }
  if (lag < 1) throw Error(Errc::BadConfig, "lag must be >= 1");
  if (dst.size() < lag + 2) {
    throw Error(Errc::SeriesTooShort, "series shorter than lag + 2");
  }
}

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

}  // namespace

TransferEntropy transfer_entropy_pair(std::span<const std::uint8_t> src,
                                      std::span<const std::uint8_t> dst,
                                      std::size_t lag) {
  check_series(src, dst, lag);
  // counts[x][y][z] with x = dst_t, y = dst_{t-lag}, z = src_{t-lag}
  std::array<std::array<std::array<std::uint64_t, 2>, 2>, 2> counts{};
  for (std::size_t t = lag; t < dst.size(); ++t) {
    ++counts[dst[t] != 0][dst[t - lag] != 0][src[t - lag] != 0];
  }
  const auto samples = static_cast<double>(dst.size() - lag);

  double h_given_past = 0.0;       // H(X | Y)
  double h_given_past_src = 0.0;   // H(X | Y, Z)
  for (int y = 0; y < 2; ++y) {
    std::uint64_t ones_y = 0;
    std::uint64_t total_y = 0;
    for (int z = 0; z < 2; ++z) {
      const auto ones = counts[1][y][z];
      const auto total = counts[0][y][z] + ones;
      ones_y += ones;
      total_y += total;
      h_given_past_src += static_cast<double>(total) / samples *
                          binary_entropy(ones, total);
    }
    h_given_past += static_cast<double>(total_y) / samples *
                    binary_entropy(ones_y, total_y);
  }

  TransferEntropy result;
  // Equal conditional entropies may differ in the last ulp; TE is >= 0.
  result.te = std::max(0.0, h_given_past - h_given_past_src);
  result.nte = h_given_past > 0.0 ? result.te / h_given_past : 0.0;
  return result;
}

double transfer_entropy(std::span<const std::uint8_t> src,
                        std::span<const std::uint8_t> dst, std::size_t lag) {
  return transfer_entropy_pair(src, dst, lag).te;
}

double normalized_te(std::span<const std::uint8_t> src,
                     std::span<const std::uint8_t> dst, std::size_t lag) {
  return transfer_entropy_pair(src, dst, lag).nte;
}

bool InfluenceNetwork::has_edge(const std::string& source,
                                const std::string& target) const {
  auto it = std::lower_bound(edges.begin(), edges.end(), std::tie(source, target),
                             [](const InfluenceEdge& e, const auto& key) {
                               return std::tie(e.source, e.target) < key;
                             });
  return it != edges.end() && it->source == source && it->target == target;
}

std::vector<std::string> InfluenceNetwork::successors(const std::string& node) const {
  std::vector<std::string> out;
  for (const auto& e : edges) {
    if (e.source == node) out.push_back(e.target);
  }
  return out;
}

InfluenceNetwork build_network_from_series(std::span<const BinarySeries> sources,
                                           std::span<const BinarySeries> targets,
                                           std::size_t lag, double nte_threshold,
                                           unsigned threads) {
  InfluenceNetwork network;
  for (const auto* group : {&sources, &targets}) {
    for (const auto& s : *group) {
      std::uint64_t total = 0;
      for (auto b : s.bits) total += b;
      network.nodes[s.owner] = total;
    }
  }
  const std::size_t n_src = sources.size();
  const std::size_t n_dst = targets.size();
  if (n_src == 0 || n_dst == 0) return network;

  std::vector<TransferEntropy> scores(n_src * n_dst);
  std::vector<char> skipped(n_src * n_dst, 0);
  auto score_rows = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = 0; j < n_dst; ++j) {
        const auto idx = i * n_dst + j;
        if (sources[i].owner == targets[j].owner) {
          skipped[idx] = 1;
          continue;
        }
        scores[idx] = transfer_entropy_pair(sources[i].bits, targets[j].bits, lag);
      }
    }
  };

  // Validate lengths up front so workers never throw.
  for (const auto& s : sources) check_series(s.bits, targets.front().bits, lag);
  for (const auto& t : targets) check_series(sources.front().bits, t.bits, lag);

  unsigned workers = threads != 0 ? threads : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n_src)));
  if (workers == 1) {
    score_rows(0, n_src);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n_src + workers - 1) / workers;
    for (std::size_t begin = 0; begin < n_src; begin += chunk) {
      pool.emplace_back(score_rows, begin, std::min(n_src, begin + chunk));
    }
  }

  for (std::size_t i = 0; i < n_src; ++i) {
    for (std::size_t j = 0; j < n_dst; ++j) {
      const auto idx = i * n_dst + j;
      if (skipped[idx] || scores[idx].nte < nte_threshold) continue;
      network.edges.push_back(
          {sources[i].owner, targets[j].owner, scores[idx].te, scores[idx].nte});
    }
  }
  std::sort(network.edges.begin(), network.edges.end(),
            [](const InfluenceEdge& a, const InfluenceEdge& b) {
              return std::tie(a.source, a.target) < std::tie(b.source, b.target);
            });
  return network;
}

InfluenceNetwork build_influence_network(const EventLog& log,
                                         const InfluenceConfig& config) {
  if (log.empty()) throw Error(Errc::EmptyLog, "event log is empty");
  const auto table = bin_activity(log, config.tick_len);
  std::vector<BinarySeries> series;
  series.reserve(table.size());
  for (const auto& [actor, activity] : table) {
    series.push_back(binarize(activity, config.binarize_threshold));
  }
  InfluenceNetwork network;
  if (series.front().bits.size() >= config.lag + 2) {
    network = build_network_from_series(series, series, config.lag,
                                        config.nte_threshold, config.threads);
  }
  // Too-short logs still list every user as a node, just without edges.
  for (const auto& [actor, activity] : table) {
    std::uint64_t total = 0;
    for (auto c : activity.counts) total += c;
    network.nodes[actor] = total;
  }
  return network;
}

std::set<std::string> snowball_sample(const InfluenceNetwork& network,
                                      const std::set<std::string>& seeds,
                                      std::size_t waves) {
  for (const auto& s : seeds) {
    if (!network.nodes.contains(s)) {
      throw Error(Errc::UnknownSeed, "seed '" + s + "' is not a network node");
    }
  }
  std::unordered_map<std::string, std::vector<const std::string*>> neighbours;
  for (const auto& e : network.edges) {
    neighbours[e.source].push_back(&e.target);
    neighbours[e.target].push_back(&e.source);
  }
  std::set<std::string> sample = seeds;
  std::vector<std::string> frontier(seeds.begin(), seeds.end());
  for (std::size_t wave = 0; wave < waves && !frontier.empty(); ++wave) {
    std::vector<std::string> next;
    for (const auto& node : frontier) {
      auto it = neighbours.find(node);
      if (it == neighbours.end()) continue;
      for (const auto* n : it->second) {
        if (sample.insert(*n).second) next.push_back(*n);
      }
    }
    frontier = std::move(next);
  }
  return sample;
}

std::set<std::string> influential_users(const InfluenceNetwork& network,
                                        std::size_t seed_count, std::size_t waves) {
  std::map<std::string, double> strength;
  for (const auto& e : network.edges) strength[e.source] += e.nte;
  std::vector<std::pair<std::string, double>> ranked(strength.begin(), strength.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::set<std::string> seeds;
  for (std::size_t i = 0; i < ranked.size() && i < seed_count; ++i) {
    seeds.insert(ranked[i].first);
  }
  return snowball_sample(network, seeds, waves);
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(Errc::EmptySample, "quantile of empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

namespace {

std::map<ActorId, std::uint64_t> counts_per_user(const EventLog& log) {
  std::map<ActorId, std::uint64_t> counts;
  for (const auto& e : log) ++counts[e.actor];
  return counts;
}

}  // namespace

UserSplit split_users(const EventLog& log, double q) {
  if (log.empty()) throw Error(Errc::EmptyLog, "event log is empty");
  if (!(q > 0.0 && q < 1.0)) throw Error(Errc::BadConfig, "quantile must be in (0, 1)");
  const auto counts = counts_per_user(log);
  std::vector<double> values;
  values.reserve(counts.size());
  for (const auto& [user, c] : counts) values.push_back(static_cast<double>(c));
  const double cut = quantile(values, q);
  // Interpolation can land an ulp above an integer count; that is a tie.
  const double tolerance = 1e-9 * std::max(1.0, std::abs(cut));
  UserSplit split;
  for (const auto& [user, c] : counts) {
    if (static_cast<double>(c) >= cut - tolerance) {
      split.active.insert(user);
    } else {
      split.less_active.insert(user);
    }
  }
  return split;
}

UserSplit split_by_interaction_share(const EventLog& log, double share) {
  if (!(share >= 0.0 && share <= 1.0)) {
    throw Error(Errc::BadConfig, "interaction share must be in [0, 1]");
  }
  UserSplit split;
  if (log.empty()) return split;
  const auto counts = counts_per_user(log);
  std::map<std::uint64_t, std::vector<ActorId>> by_count;
  for (const auto& [user, c] : counts) by_count[c].push_back(user);

  const double budget = share * static_cast<double>(log.size()) + 1e-9;
  double used = 0.0;
  bool open = true;
  for (const auto& [c, users] : by_count) {
    const double group = static_cast<double>(c * users.size());
    if (open && used + group <= budget) {
      used += group;
      split.less_active.insert(users.begin(), users.end());
    } else {
      open = false;
      split.active.insert(users.begin(), users.end());
    }
  }
  return split;
}

void write_network_csv(std::ostream& out, const InfluenceNetwork& network) {
  out << "source,target,te,nte\n";
  for (const auto& e : network.edges) {
    out << csv_field(e.source) << ',' << csv_field(e.target) << ','
        << format_real(e.te) << ',' << format_real(e.nte) << '\n';
  }
}

InfluenceNetwork read_network_csv(std::istream& in) {
  InfluenceNetwork network;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) return network;
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "source,target,te,nte") {
    throw Error(Errc::Format, "expected header 'source,target,te,nte'", line_no);
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 4) {
      throw Error(Errc::Format, "expected 4 fields", line_no);
    }
    InfluenceEdge edge{fields[0], fields[1], 0.0, 0.0};
    try {
      edge.te = std::stod(fields[2]);
      edge.nte = std::stod(fields[3]);
    } catch (const std::exception&) {
      throw Error(Errc::Format, "non-numeric te/nte", line_no);
    }
    if (edge.source == edge.target || edge.te < 0.0 || edge.nte < 0.0 ||
        edge.nte > 1.0) {
      throw Error(Errc::Format, "edge violates network invariants", line_no);
    }
    network.nodes.try_emplace(edge.source, 0);
    network.nodes.try_emplace(edge.target, 0);
    network.edges.push_back(std::move(edge));
  }
  std::sort(network.edges.begin(), network.edges.end(),
            [](const InfluenceEdge& a, const InfluenceEdge& b) {
              return std::tie(a.source, a.target) < std::tie(b.source, b.target);
            });
  return network;
}

}  // namespace osnsim
