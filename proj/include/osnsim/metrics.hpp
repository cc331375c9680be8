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
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "osnsim/event.hpp"
#include "osnsim/ingest.hpp"

namespace osnsim::metrics {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// sum_i (2i - n - 1) x_(i) / (n sum x) over ascending x; 0 when every value
/// is 0. Throws EmptySample or NegativeValue.
double gini(std::span<const double> values);

/// Share held by the top 10% over the share held by the bottom 40%, with
/// fractional elements at the cut points. kInfinity when the bottom share is
/// 0 and the top share is not; 0 for an all-zero sample. Throws EmptySample or
/// NegativeValue.
double palma(std::span<const double> values);

/// (sigma - mu) / (sigma + mu) with the population sigma; 0 when every gap is
/// 0. Throws TooFewEvents for fewer than two gaps.
double burstiness(std::span<const double> gaps);

/// sup |ECDF_a - ECDF_b|. Throws EmptySample.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// Jensen-Shannon divergence in nats of two histograms over the same
/// support, each normalized to sum 1. Throws SupportMismatch for different
/// lengths, EmptySample for an all-zero histogram, NegativeValue.
double js_divergence(std::span<const double> a, std::span<const double> b);

/// Extrapolated rank-biased overlap for rankings of possibly different
/// length; exactly 1 for identical rankings. Throws BadPersistence unless
/// 0 < persistence < 1.
double rbo(std::span<const std::string> a, std::span<const std::string> b,
           double persistence = 0.9);

/// |sim - truth| / max(|truth|, 1e-9).
double ape(double sim, double truth);

/// Undirected simple graph over dense node indices.
struct Graph {
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> adjacency;  // sorted, no self loops

  std::size_t add_node(const std::string& name);
  void add_edge(std::size_t a, std::size_t b);
  std::size_t edge_count() const;
};

/// Actor-target interaction graph: one node per actor ("u:" prefix) and per
/// content ("c:" prefix), one edge per distinct (actor, content) pair.
Graph interaction_graph(const EventLog& log);

struct NetworkStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double mean_degree = 0.0;
  std::size_t max_degree = 0;
  std::vector<double> degrees;
  double density = 0.0;
  double assortativity = 0.0;  // 0 when every edge joins equal degrees
  double clustering = 0.0;
  std::size_t components = 0;
  double mean_shortest_path = 0.0;  // over the largest component
  double modularity = 0.0;
};

/// Mean shortest paths use every source in components up to
/// `max_path_sources` nodes and an evenly spaced sample of that many sources
/// beyond.
NetworkStats summarize(const Graph& graph, std::size_t max_path_sources = 500);
/// Throws EmptyLog.
NetworkStats network_summary(const EventLog& log);

/// Greedy modularity maximisation by agglomeration (Clauset-Newman-Moore).
struct Communities {
  std::vector<std::vector<std::size_t>> groups;  // largest first
  double modularity = 0.0;
};
Communities greedy_modularity(const Graph& graph);

enum class Level : std::uint8_t { Community, Content, Population, User };
std::string_view to_string(Level level);

/// Error metric attached to a row.
enum class ErrorMetric : std::uint8_t { Ape, AbsoluteDifference, Ks, Jsd, Rbo };
std::string_view to_string(ErrorMetric metric);

struct MetricSuite {
  std::set<std::string> rows;  // "level/Metric name"; empty selects every row
  std::size_t top_k = 100;
  double rbo_persistence = 0.9;
  std::int64_t tick_len = 3600;
  std::size_t max_communities = 20;
};

/// Every row as "level/Metric name", in table order.
std::vector<std::string> all_rows();

struct ReportEntry {
  Level level = Level::Population;
  std::string metric;
  Platform platform = Platform::GitHub;
  std::string model;
  ErrorMetric error_metric = ErrorMetric::Ape;
  std::optional<double> sim_value;
  std::optional<double> truth_value;
  std::optional<double> error;       // unset for skipped rows
  std::optional<double> normalized;  // in [0, 1] whenever error is set
  std::string note;                  // skip reason
};

struct MetricReport {
  std::vector<ReportEntry> entries;
  std::vector<std::string> models;
  /// "across-models" or, for one model, "across-metrics".
  std::string normalization;
};

/// One model against the truth. Normalized errors are min-max scaled across
/// the metrics of each (level, platform) group. Throws EmptyLog,
/// DisjointTimeRanges or BadConfig (unknown row).
MetricReport evaluate(const EventLog& sim, const EventLog& truth, const MetricSuite& suite = {},
                      const std::string& model = "model");

/// Several models against the truth. Normalized errors are min-max scaled
/// across the models of each (level, metric, platform) group.
MetricReport evaluate_models(const std::vector<std::pair<std::string, EventLog>>& sims,
                             const EventLog& truth, const MetricSuite& suite = {});

/// `# normalization: ...` header, then
/// level,metric,platform,error_metric,error,normalized,model,note
void write_report_csv(std::ostream& out, const MetricReport& report);
/// level -> metric -> model -> platform -> {error, error_metric, normalized}.
void write_report_json(std::ostream& out, const MetricReport& report);
MetricReport read_report_csv(std::istream& in);
/// Horizontal bars of normalized error, one panel per level.
void write_report_svg(std::ostream& out, const MetricReport& report);

}  // namespace osnsim::metrics
