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

#include "osnsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <tuple>
#include <unordered_map>

#include "csv.hpp"
#include "json.hpp"
#include "osnsim/error.hpp"

namespace osnsim::metrics {
namespace {

void require_sample(std::span<const double> values) {
  if (values.empty()) throw Error(Errc::EmptySample, "sample is empty");
  for (double v : values) {
    if (v < 0.0) throw Error(Errc::NegativeValue, "sample holds a negative value");
  }
}

// Sum of the smallest `fraction` of the sorted sample, counting the element
// at the cut point fractionally.
double lower_share(const std::vector<double>& sorted, double fraction) {
  const double amount = fraction * static_cast<double>(sorted.size());
  const auto whole = static_cast<std::size_t>(std::floor(amount));
  double sum = 0.0;
  for (std::size_t i = 0; i < whole && i < sorted.size(); ++i) sum += sorted[i];
  if (whole < sorted.size()) sum += (amount - static_cast<double>(whole)) * sorted[whole];
  return sum;
}

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace

double gini(std::span<const double> values) {
  require_sample(values);
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());
  const double total = std::accumulate(x.begin(), x.end(), 0.0);
  if (total == 0.0) return 0.0;
  const double n = static_cast<double>(x.size());
  double weighted = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    weighted += (2.0 * static_cast<double>(i + 1) - n - 1.0) * x[i];
  }
  return weighted / (n * total);
}

double palma(std::span<const double> values) {
  require_sample(values);
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());
  const double total = std::accumulate(x.begin(), x.end(), 0.0);
  if (total == 0.0) return 0.0;
  const double bottom = lower_share(x, 0.4);
  const double top = total - lower_share(x, 0.9);
  if (bottom == 0.0) return top > 0.0 ? kInfinity : 0.0;
  return top / bottom;
}

double burstiness(std::span<const double> gaps) {
  if (gaps.size() < 2) throw Error(Errc::TooFewEvents, "burstiness needs at least two gaps");
  const double n = static_cast<double>(gaps.size());
  const double mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) / n;
  double var = 0.0;
  for (double g : gaps) var += (g - mean) * (g - mean);
  const double sd = std::sqrt(var / n);
  if (sd + mean == 0.0) return 0.0;
  return (sd - mean) / (sd + mean);
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(Errc::EmptySample, "KS needs two non-empty samples");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() || j < y.size()) {
    double v;
    if (j == y.size() || (i < x.size() && x[i] <= y[j])) {
      v = x[i];
    } else {
      v = y[j];
    }
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

double js_divergence(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(Errc::SupportMismatch, "histograms differ in support");
  double sa = 0.0, sb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0.0 || b[i] < 0.0) throw Error(Errc::NegativeValue, "negative histogram mass");
    sa += a[i];
    sb += b[i];
  }
  if (!(sa > 0.0) || !(sb > 0.0)) throw Error(Errc::EmptySample, "histogram has no mass");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double p = a[i] / sa, q = b[i] / sb;
    const double m = 0.5 * (p + q);
    if (p > 0.0) d += 0.5 * p * std::log(p / m);
    if (q > 0.0) d += 0.5 * q * std::log(q / m);
  }
  return std::max(0.0, d);
}

double rbo(std::span<const std::string> a, std::span<const std::string> b, double persistence) {
  const double p = persistence;
  if (!(p > 0.0 && p < 1.0)) throw Error(Errc::BadPersistence, "persistence must be in (0, 1)");
  if (std::equal(a.begin(), a.end(), b.begin(), b.end())) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  const auto& s = a.size() <= b.size() ? a : b;
  const auto& l = a.size() <= b.size() ? b : a;
  const std::size_t sl = s.size(), ll = l.size();
  std::set<std::string> seen_s, seen_l;
  double overlap = 0.0, x_s = 0.0, sum = 0.0, weight = 1.0;
  for (std::size_t d = 1; d <= ll; ++d) {
    weight *= p;
    const auto& from_l = l[d - 1];
    if (d <= sl) {
      const auto& from_s = s[d - 1];
      if (from_s == from_l) {
        if (!seen_s.count(from_s) && !seen_l.count(from_l)) overlap += 1.0;
      } else {
        if (!seen_s.count(from_s) && seen_l.count(from_s)) overlap += 1.0;
        if (!seen_l.count(from_l) && seen_s.count(from_l)) overlap += 1.0;
      }
      seen_s.insert(from_s);
      seen_l.insert(from_l);
      if (d == sl) x_s = overlap;
    } else {
      if (!seen_l.count(from_l) && seen_s.count(from_l)) overlap += 1.0;
      seen_l.insert(from_l);
      sum += x_s * static_cast<double>(d - sl) / (static_cast<double>(sl) * d) * weight;
    }
    sum += overlap / static_cast<double>(d) * weight;
  }
  const double x_l = overlap;
  return (1.0 - p) / p * sum +
         ((x_l - x_s) / static_cast<double>(ll) + x_s / static_cast<double>(sl)) * weight;
}

double ape(double sim, double truth) {
  return std::abs(sim - truth) / std::max(std::abs(truth), 1e-9);
}

std::size_t Graph::add_node(const std::string& name) {
  names.push_back(name);
  adjacency.emplace_back();
  return names.size() - 1;
}

void Graph::add_edge(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (auto [u, v] : {std::pair{a, b}, std::pair{b, a}}) {
    auto& adj = adjacency.at(u);
    auto it = std::lower_bound(adj.begin(), adj.end(), v);
    if (it == adj.end() || *it != v) adj.insert(it, v);
  }
}

std::size_t Graph::edge_count() const {
  std::size_t degree_sum = 0;
  for (const auto& adj : adjacency) degree_sum += adj.size();
  return degree_sum / 2;
}

Graph interaction_graph(const EventLog& log) {
  Graph g;
  std::unordered_map<std::string, std::size_t> index;
  auto node = [&](const std::string& name) {
    auto [it, inserted] = index.try_emplace(name, 0);
    if (inserted) it->second = g.add_node(name);
    return it->second;
  };
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& e : log) edges.emplace_back(node("u:" + e.actor), node("c:" + e.content));
  // Bulk insert keeps add_edge out of the quadratic path for hubs.
  for (auto& adj : g.adjacency) adj.clear();
  for (auto [a, b] : edges) {
    g.adjacency[a].push_back(b);
    g.adjacency[b].push_back(a);
  }
  for (auto& adj : g.adjacency) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
  return g;
}

Communities greedy_modularity(const Graph& graph) {
  const std::size_t n = graph.adjacency.size();
  const double m = static_cast<double>(graph.edge_count());
  Communities out;
  std::vector<std::size_t> group(n);
  std::iota(group.begin(), group.end(), 0);
  if (m > 0.0) {
    // e[i][j]: fraction of edge ends joining i and j (each direction); a[i]:
    // fraction of edge ends in i.
    std::vector<std::map<std::size_t, double>> e(n);
    std::vector<double> a(n, 0.0);
    for (std::size_t u = 0; u < n; ++u) {
      a[u] = static_cast<double>(graph.adjacency[u].size()) / (2.0 * m);
      for (auto v : graph.adjacency[u]) e[u][v] = 1.0 / (2.0 * m);
    }
    std::vector<std::uint64_t> version(n, 0);
    std::vector<bool> alive(n, true);
    std::vector<std::vector<std::size_t>> members(n);
    for (std::size_t u = 0; u < n; ++u) members[u] = {u};
    // (dq, -i, -j) so ties favour the smallest ids.
    using Entry = std::tuple<double, std::int64_t, std::int64_t, std::uint64_t, std::uint64_t>;
    std::priority_queue<Entry> heap;
    auto push = [&](std::size_t i, std::size_t j) {
      const auto lo = std::min(i, j), hi = std::max(i, j);
      const double dq = 2.0 * (e[lo].at(hi) - a[lo] * a[hi]);
      heap.emplace(dq, -static_cast<std::int64_t>(lo), -static_cast<std::int64_t>(hi),
                   version[lo], version[hi]);
    };
    for (std::size_t u = 0; u < n; ++u) {
      for (const auto& [v, w] : e[u]) {
        if (u < v) push(u, v);
      }
    }
    while (!heap.empty()) {
      const auto [dq, ni, nj, vi, vj] = heap.top();
      heap.pop();
      const auto i = static_cast<std::size_t>(-ni), j = static_cast<std::size_t>(-nj);
      if (!alive[i] || !alive[j] || version[i] != vi || version[j] != vj) continue;
      if (!(dq > 0.0)) break;
      // merge j into i
      for (const auto& [k, w] : e[j]) {
        if (k == i) continue;
        e[i][k] += w;
        e[k][i] += w;
        e[k].erase(j);
      }
      e[i].erase(j);
      e[j].clear();
      a[i] += a[j];
      alive[j] = false;
      members[i].insert(members[i].end(), members[j].begin(), members[j].end());
      members[j].clear();
      ++version[i];
      for (const auto& [k, w] : e[i]) {
        ++version[k];
        for (const auto& [k2, w2] : e[k]) push(k, k2);
      }
    }
    for (std::size_t u = 0; u < n; ++u) {
      if (!alive[u]) continue;
      for (auto v : members[u]) group[v] = u;
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> by_group;
  for (std::size_t u = 0; u < n; ++u) by_group[group[u]].push_back(u);
  for (auto& [g, nodes] : by_group) out.groups.push_back(std::move(nodes));
  std::stable_sort(out.groups.begin(), out.groups.end(),
                   [](const auto& x, const auto& y) { return x.size() > y.size(); });
  if (m > 0.0) {
    double q = 0.0;
    for (const auto& nodes : out.groups) {
      double inside = 0.0, degree = 0.0;
      for (auto u : nodes) {
        degree += static_cast<double>(graph.adjacency[u].size());
        for (auto v : graph.adjacency[u]) inside += group[v] == group[u] ? 0.5 : 0.0;
      }
      q += inside / m - (degree / (2.0 * m)) * (degree / (2.0 * m));
    }
    out.modularity = q;
  }
  return out;
}

NetworkStats summarize(const Graph& graph, std::size_t max_path_sources) {
  NetworkStats s;
  const auto& adj = graph.adjacency;
  const std::size_t n = adj.size();
  s.nodes = n;
  s.edges = graph.edge_count();
  if (n == 0) return s;
  for (const auto& nbrs : adj) {
    s.degrees.push_back(static_cast<double>(nbrs.size()));
    s.max_degree = std::max(s.max_degree, nbrs.size());
  }
  s.mean_degree = 2.0 * static_cast<double>(s.edges) / static_cast<double>(n);
  if (n > 1) {
    s.density = 2.0 * static_cast<double>(s.edges) / (static_cast<double>(n) * (n - 1.0));
  }

  if (s.edges > 0) {
    double jk = 0.0, mean = 0.0, sq = 0.0, count = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      const double du = static_cast<double>(adj[u].size());
      for (auto v : adj[u]) {
        const double dv = static_cast<double>(adj[v].size());
        jk += du * dv;
        mean += du;
        sq += du * du;
        count += 1.0;
      }
    }
    jk /= count;
    mean /= count;
    sq /= count;
    const double var = sq - mean * mean;
    s.assortativity = var > 1e-12 * sq ? (jk - mean * mean) / var : 0.0;
  }

  std::vector<char> mark(n, 0);
  double clustering = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    const auto k = adj[v].size();
    if (k < 2) continue;
    for (auto u : adj[v]) mark[u] = 1;
    double links = 0.0;
    for (auto u : adj[v]) {
      for (auto w : adj[u]) {
        if (w > u && mark[w]) links += 1.0;
      }
    }
    for (auto u : adj[v]) mark[u] = 0;
    clustering += 2.0 * links / (static_cast<double>(k) * (k - 1.0));
  }
  s.clustering = clustering / static_cast<double>(n);

  std::vector<std::int64_t> component(n, -1);
  std::vector<std::vector<std::size_t>> comps;
  for (std::size_t root = 0; root < n; ++root) {
    if (component[root] >= 0) continue;
    comps.emplace_back();
    std::queue<std::size_t> q;
    q.push(root);
    component[root] = static_cast<std::int64_t>(comps.size() - 1);
    while (!q.empty()) {
      auto u = q.front();
      q.pop();
      comps.back().push_back(u);
      for (auto v : adj[u]) {
        if (component[v] < 0) {
          component[v] = component[root];
          q.push(v);
        }
      }
    }
  }
  s.components = comps.size();
  const auto& largest = *std::max_element(comps.begin(), comps.end(), [](const auto& x, const auto& y) {
    return x.size() < y.size();
  });
  if (largest.size() > 1) {
    std::vector<std::size_t> sources(largest.begin(), largest.end());
    std::sort(sources.begin(), sources.end());
    if (max_path_sources > 0 && sources.size() > max_path_sources) {
      std::vector<std::size_t> sample;
      for (std::size_t k = 0; k < max_path_sources; ++k) {
        sample.push_back(sources[k * sources.size() / max_path_sources]);
      }
      sources = std::move(sample);
    }
    std::vector<std::int64_t> dist(n, -1);
    double total = 0.0, pairs = 0.0;
    for (auto src : sources) {
      std::fill(dist.begin(), dist.end(), -1);
      std::queue<std::size_t> q;
      q.push(src);
      dist[src] = 0;
      while (!q.empty()) {
        auto u = q.front();
        q.pop();
        for (auto v : adj[u]) {
          if (dist[v] < 0) {
            dist[v] = dist[u] + 1;
            total += static_cast<double>(dist[v]);
            pairs += 1.0;
            q.push(v);
          }
        }
      }
    }
    s.mean_shortest_path = total / pairs;
  }
  s.modularity = greedy_modularity(graph).modularity;
  return s;
}

NetworkStats network_summary(const EventLog& log) {
  if (log.empty()) throw Error(Errc::EmptyLog, "event log is empty");
  return summarize(interaction_graph(log));
}

std::string_view to_string(Level level) {
  switch (level) {
    case Level::Community: return "community";
    case Level::Content: return "content";
    case Level::Population: return "population";
    case Level::User: return "user";
  }
  return "population";
}

std::string_view to_string(ErrorMetric metric) {
  switch (metric) {
    case ErrorMetric::Ape: return "ape";
    case ErrorMetric::AbsoluteDifference: return "absolute_difference";
    case ErrorMetric::Ks: return "ks";
    case ErrorMetric::Jsd: return "jsd";
    case ErrorMetric::Rbo: return "rbo";
  }
  return "ape";
}

namespace {

constexpr std::int64_t kDay = 86400;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  auto q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Everything the rows read from one log slice.
struct Profile {
  std::size_t events = 0;
  std::vector<std::int64_t> times;
  std::map<ActorId, double> user_events;
  std::map<ContentId, double> content_events;
  std::map<ContentId, std::set<ActorId>> contributors;
  std::map<ActorId, std::set<ContentId>> user_contents;
  std::map<ContentId, std::int64_t> content_first_tick, content_last_tick;
  std::map<ActorId, std::vector<std::int64_t>> user_times;
  std::map<std::string, double> action_hist;
  std::map<std::int64_t, double> day_hist, dow_hist, tick_hist, growth_hist;
  std::vector<double> delays;
  std::map<ActorId, std::vector<double>> user_delays;
  std::map<ActorId, std::pair<double, double>> trust;  // (out, in)
  std::map<ActorId, double> popularity;
  std::optional<double> continue_proportion;
  std::optional<NetworkStats> network;
};

Profile profile_of(const std::vector<const Event*>& events, std::int64_t tick_len,
                   bool with_network) {
  Profile p;
  p.events = events.size();
  for (std::int64_t d = 0; d < 7; ++d) p.dow_hist[d] = 0.0;
  std::map<ContentId, std::int64_t> created;
  std::map<ContentId, ActorId> owner;
  std::set<std::pair<ActorId, ContentId>> pairs;
  std::map<std::pair<ActorId, ContentId>, int> pair_counts;
  for (const Event* e : events) {
    const auto tick = floor_div(e->ts, tick_len);
    const auto day = floor_div(e->ts, kDay);
    p.times.push_back(e->ts);
    p.user_events[e->actor] += 1.0;
    p.content_events[e->content] += 1.0;
    p.contributors[e->content].insert(e->actor);
    p.user_contents[e->actor].insert(e->content);
    p.content_first_tick.try_emplace(e->content, tick);
    p.content_last_tick[e->content] = tick;
    p.user_times[e->actor].push_back(e->ts);
    p.action_hist[std::string(to_string(e->action))] += 1.0;
    p.day_hist[day] += 1.0;
    p.dow_hist[((day + 3) % 7 + 7) % 7] += 1.0;  // 0 = Monday
    p.tick_hist[tick] += 1.0;
    if (pairs.emplace(e->actor, e->content).second) p.growth_hist[tick] += 1.0;
    ++pair_counts[{e->actor, e->content}];
    auto [cit, first] = created.try_emplace(e->content, e->ts);
    owner.try_emplace(e->content, e->actor);
    const double delay = static_cast<double>(e->ts - cit->second);
    if (!first) {
      p.delays.push_back(delay);
      p.user_delays[e->actor].push_back(delay);
    }
    const auto& own = owner.at(e->content);
    if (own != e->actor) {
      p.trust[e->actor].first += 1.0;
      p.trust[own].second += 1.0;
    }
  }
  std::map<ActorId, std::set<ActorId>> audience;
  for (const auto& [content, users] : p.contributors) {
    const auto& own = owner.at(content);
    for (const auto& u : users) {
      if (u != own) audience[own].insert(u);
    }
  }
  for (const auto& [user, _] : p.user_events) {
    auto it = audience.find(user);
    p.popularity[user] = it == audience.end() ? 0.0 : static_cast<double>(it->second.size());
  }
  if (!pair_counts.empty()) {
    double repeat = 0.0;
    for (const auto& [pair, c] : pair_counts) repeat += c >= 2;
    p.continue_proportion = repeat / static_cast<double>(pair_counts.size());
  }
  if (with_network && !events.empty()) {
    EventLog copy;
    for (const Event* e : events) copy.push_back(*e);
    p.network = summarize(interaction_graph(copy));
  }
  return p;
}

struct Outcome {
  std::optional<double> sim, truth, error;
  std::string note;
};

std::vector<double> values_of(const std::map<std::string, double>& m) {
  std::vector<double> v;
  for (const auto& [k, x] : m) v.push_back(x);
  return v;
}

template <class T>
std::vector<double> sizes_of(const std::map<std::string, std::set<T>>& m) {
  std::vector<double> v;
  for (const auto& [k, x] : m) v.push_back(static_cast<double>(x.size()));
  return v;
}

constexpr double kSentinel = 1e9;

Outcome scalar(std::optional<double> sim, std::optional<double> truth, ErrorMetric metric) {
  Outcome o{sim, truth, std::nullopt, ""};
  if (!truth) {
    o.note = "undefined on the ground truth";
    return o;
  }
  if (!sim) {
    o.error = 1.0;
    o.note = "undefined on the simulation";
    return o;
  }
  if (std::isinf(*sim) || std::isinf(*truth)) {
    o.error = *sim == *truth ? 0.0 : kSentinel;
    return o;
  }
  o.error = metric == ErrorMetric::Ape ? ape(*sim, *truth) : std::abs(*sim - *truth);
  return o;
}

Outcome distribution(const std::vector<double>& sim, const std::vector<double>& truth) {
  Outcome o;
  if (truth.empty()) {
    o.note = "no ground-truth observations";
  } else if (sim.empty()) {
    o.error = 1.0;
    o.note = "no simulated observations";
  } else {
    o.error = ks_statistic(sim, truth);
  }
  return o;
}

template <class K>
Outcome histogram(const std::map<K, double>& sim, const std::map<K, double>& truth) {
  Outcome o;
  std::map<K, std::pair<double, double>> joint;
  double ts = 0.0, ss = 0.0;
  for (const auto& [k, v] : sim) {
    joint[k].first = v;
    ss += v;
  }
  for (const auto& [k, v] : truth) {
    joint[k].second = v;
    ts += v;
  }
  if (!(ts > 0.0)) {
    o.note = "no ground-truth observations";
    return o;
  }
  if (!(ss > 0.0)) {
    o.error = std::log(2.0);
    o.note = "no simulated observations";
    return o;
  }
  std::vector<double> a, b;
  for (const auto& [k, v] : joint) {
    a.push_back(v.first);
    b.push_back(v.second);
  }
  o.error = js_divergence(a, b);
  return o;
}

std::vector<std::string> top_k(const std::map<std::string, double>& scores, std::size_t k) {
  std::vector<std::pair<std::string, double>> v(scores.begin(), scores.end());
  std::stable_sort(v.begin(), v.end(),
                   [](const auto& x, const auto& y) { return x.second > y.second; });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size() && i < k; ++i) out.push_back(v[i].first);
  return out;
}

Outcome ranking(const std::map<std::string, double>& sim,
                const std::map<std::string, double>& truth, const MetricSuite& suite) {
  Outcome o;
  if (truth.empty()) {
    o.note = "no ground-truth observations";
    return o;
  }
  const double r = rbo(top_k(sim, suite.top_k), top_k(truth, suite.top_k), suite.rbo_persistence);
  o.sim = r;
  o.error = 1.0 - r;
  return o;
}

template <class F>
std::optional<double> maybe(F&& f) {
  try {
    return f();
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::map<std::string, double> liveliness(const Profile& p) {
  std::map<std::string, double> out;
  for (const auto& [c, n] : p.content_events) {
    const auto span = p.content_last_tick.at(c) - p.content_first_tick.at(c) + 1;
    out[c] = n / static_cast<double>(span);
  }
  return out;
}

std::vector<double> gaps_of(std::vector<std::int64_t> times) {
  std::sort(times.begin(), times.end());
  std::vector<double> gaps;
  for (std::size_t i = 1; i < times.size(); ++i) gaps.push_back(static_cast<double>(times[i] - times[i - 1]));
  return gaps;
}

std::vector<double> user_burstiness(const Profile& p) {
  std::vector<double> out;
  for (const auto& [u, times] : p.user_times) {
    if (times.size() < 3) continue;
    out.push_back(burstiness(gaps_of(times)));
  }
  return out;
}

std::vector<double> mean_user_delay(const Profile& p) {
  std::vector<double> out;
  for (const auto& [u, d] : p.user_delays) {
    out.push_back(std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size()));
  }
  return out;
}

std::vector<double> trustingness(const Profile& p) {
  std::vector<double> out;
  for (const auto& [u, io] : p.trust) out.push_back(io.first / (io.first + io.second));
  return out;
}

std::vector<double> top_values(const std::map<std::string, double>& m, std::size_t k) {
  auto v = values_of(m);
  std::sort(v.begin(), v.end(), std::greater<>());
  if (v.size() > k) v.resize(k);
  return v;
}

struct Context {
  const MetricSuite& suite;
  Platform platform;
};

using RowFn = std::function<Outcome(const Profile&, const Profile&, const Context&)>;

struct RowDef {
  Level level;
  std::string name;
  ErrorMetric metric;
  RowFn fn;         // unset: always skipped with `skip_note`
  std::string skip_note;
};

template <class F>
Outcome scalar_of(const Profile& s, const Profile& t, ErrorMetric m, F&& f) {
  return scalar(maybe([&] { return f(s); }), maybe([&] { return f(t); }), m);
}

std::optional<double> net_value(const Profile& p, double NetworkStats::*field) {
  if (!p.network) return std::nullopt;
  return (*p.network).*field;
}

RowDef network_row(std::string name, ErrorMetric metric, double NetworkStats::*field) {
  return {Level::Population, std::move(name), metric,
          [field, metric](const Profile& s, const Profile& t, const Context&) {
            return scalar(net_value(s, field), net_value(t, field), metric);
          },
          ""};
}

template <class G>
RowDef count_row(std::string name, G getter) {
  return {Level::Population, std::move(name), ErrorMetric::Ape,
          [getter](const Profile& s, const Profile& t, const Context&) {
            auto get = [&](const Profile& p) -> std::optional<double> {
              if (!p.network) return std::nullopt;
              return static_cast<double>(getter(*p.network));
            };
            return scalar(get(s), get(t), ErrorMetric::Ape);
          },
          ""};
}

const std::vector<RowDef>& row_table() {
  using E = ErrorMetric;
  static const std::vector<RowDef> rows = [] {
    std::vector<RowDef> r;
    const auto C = Level::Community, T = Level::Content, U = Level::User;
    // community rows run on each detected community's slice
    r.push_back({C, "Burstiness", E::Ape,
                 [](const Profile& s, const Profile& t, const Context&) {
                   return scalar_of(s, t, E::Ape, [](const Profile& p) { return burstiness(gaps_of(p.times)); });
                 }, ""});
    r.push_back({C, "Contributing users", E::Ape,
                 [](const Profile& s, const Profile& t, const Context&) {
                   return scalar(static_cast<double>(s.user_events.size()),
                                 static_cast<double>(t.user_events.size()), E::Ape);
                 }, ""});
    r.push_back({C, "Event proportions", E::Jsd,
                 [](const Profile& s, const Profile& t, const Context&) {
                   return histogram(s.action_hist, t.action_hist);
                 }, ""});
    r.push_back({C, "Geo locations", E::Jsd, nullptr, "event schema carries no location field"});
    r.push_back({C, "Gini coefficient", E::AbsoluteDifference,
                 [](const Profile& s, const Profile& t, const Context&) {
                   return scalar_of(s, t, E::AbsoluteDifference, [](const Profile& p) { return gini(values_of(p.user_events)); });
                 }, ""});
    r.push_back({C, "Issue types", E::Jsd, nullptr, "event schema carries no issue type field"});
    r.push_back({C, "User action counts", E::Ks,
                 [](const Profile& s, const Profile& t, const Context&) {
                   return distribution(values_of(s.user_events), values_of(t.user_events));
                 }, ""});
    r.push_back({C, "Palma coefficient", E::AbsoluteDifference,
                 [](const Profile& s, const Profile& t, const Context&) {
                   return scalar_of(s, t, E::AbsoluteDifference, [](const Profile& p) { return palma(values_of(p.user_events)); });
                 }, ""});
    r.push_back({C, "User account ages", E::Ks, nullptr, "event schema carries no account creation time"});
    r.push_back({C, "User burstiness", E::Ks,
                 [](const Profile& s, const Profile& t, const Context&) {
                   return distribution(user_burstiness(s), user_burstiness(t));
                 }, ""});

    r.push_back({T, "Activity disparity Gini coefficient", E::AbsoluteDifference,
                 [](const Profile& s, const Profile& t, const Context&) {
                   return scalar_of(s, t, E::AbsoluteDifference, [](const Profile& p) { return gini(values_of(p.content_events)); });
                 }, ""});
    r.push_back({T, "Activity disparity Palma coefficient", E::AbsoluteDifference,
                 [](const Profile& s, const Profile& t, const Context&) {
                   return scalar_of(s, t, E::AbsoluteDifference, [](const Profile& p) { return palma(values_of(p.content_events)); });
                 }, ""});
    r.push_back({T, "Contributors", E::Ks,
                 [](const Profile& s, const Profile& t, const Context&) {
                   return distribution(sizes_of(s.contributors), sizes_of(t.contributors));
                 }, ""});
    r.push_back({T, "Diffusion delay", E::Ks,
                 [](const Profile& s, const Profile& t, const Context&) { return distribution(s.delays, t.delays); }, ""});
    r.push_back({T, "Event counts", E::Ks,
                 [](const Profile& s, const Profile& t, const Context&) {
                   return distribution(values_of(s.content_events), values_of(t.content_events));
                 }, ""});
    r.push_back({T, "Daily event distribution", E::Jsd,
                 [](const Profile& s, const Profile& t, const Context&) { return histogram(s.day_hist, t.day_hist); }, ""});
    r.push_back({T, "Day of week event distribution", E::Jsd,
                 [](const Profile& s, const Profile& t, const Context&) { return histogram(s.dow_hist, t.dow_hist); }, ""});
    r.push_back({T, "Growth", E::Jsd,
                 [](const Profile& s, const Profile& t, const Context&) { return histogram(s.growth_hist, t.growth_hist); }, ""});
    r.push_back({T, "Liveliness distribution", E::Ks,
                 [](const Profile& s, const Profile& t, const Context&) {
                   return distribution(values_of(liveliness(s)), values_of(liveliness(t)));
                 }, ""});
    r.push_back({T, "Liveliness top K", E::Rbo,
                 [](const Profile& s, const Profile& t, const Context& c) {
                   return ranking(liveliness(s), liveliness(t), c.suite);
                 }, ""});
    r.push_back({T, "Popularity distribution top K", E::Ks,
                 [](const Profile& s, const Profile& t, const Context& c) {
                   return distribution(top_values(s.content_events, c.suite.top_k),
                                       top_values(t.content_events, c.suite.top_k));
                 }, ""});
    r.push_back({T, "Popularity top K", E::Rbo,
                 [](const Profile& s, const Profile& t, const Context& c) {
                   return ranking(s.content_events, t.content_events, c.suite);
                 }, ""});
    r.push_back({T, "User unique content", E::Ks,
                 [](const Profile& s, const Profile& t, const Context&) {
                   return distribution(sizes_of(s.user_contents), sizes_of(t.user_contents));
                 }, ""});

    r.push_back(network_row("Assortativity coefficient", E::AbsoluteDifference, &NetworkStats::assortativity));
    r.push_back(network_row("Average clustering coefficient", E::AbsoluteDifference, &NetworkStats::clustering));
    r.push_back(network_row("Community modularity", E::AbsoluteDifference, &NetworkStats::modularity));
    r.push_back({Level::Population, "Degree distribution", E::Ks,
                 [](const Profile& s, const Profile& t, const Context&) {
                   return distribution(s.network ? s.network->degrees : std::vector<double>{},
                                       t.network ? t.network->degrees : std::vector<double>{});
                 }, ""});
    r.push_back(network_row("Density", E::Ape, &NetworkStats::density));
    r.push_back(count_row("Max node degree", [](const NetworkStats& n) { return n.max_degree; }));
    r.push_back(network_row("Mean node degree", E::Ape, &NetworkStats::mean_degree));
    r.push_back(network_row("Mean shortest path length", E::Ape, &NetworkStats::mean_shortest_path));
    r.push_back(count_row("Number of connected components", [](const NetworkStats& n) { return n.components; }));
    r.push_back(count_row("Number of edges", [](const NetworkStats& n) { return n.edges; }));
    r.push_back(count_row("Number of nodes", [](const NetworkStats& n) { return n.nodes; }));

    r.push_back({U, "Most active users", E::Rbo,
                 [](const Profile& s, const Profile& t, const Context& c) {
                   return ranking(s.user_events, t.user_events, c.suite);
                 }, ""});
    auto continue_row = [](Platform only) {
      return [only](const Profile& s, const Profile& t, const Context& c) {
        if (c.platform != only) {
          Outcome o;
          o.note = "applies to " + std::string(to_string(only)) + " only";
          return o;
        }
        return scalar(s.continue_proportion, t.continue_proportion, E::Ape);
      };
    };
    r.push_back({U, "Repository user continue proportion", E::Ape, continue_row(Platform::GitHub), ""});
    r.push_back({U, "Subreddit user continue proportion", E::Ape, continue_row(Platform::Reddit), ""});
    r.push_back({U, "Activity distribution", E::Ks,
                 [](const Profile& s, const Profile& t, const Context&) {
                   return distribution(values_of(s.user_events), values_of(t.user_events));
                 }, ""});
    r.push_back({U, "Activity timeline", E::Jsd,
                 [](const Profile& s, const Profile& t, const Context&) { return histogram(s.tick_hist, t.tick_hist); }, ""});
    r.push_back({U, "Diffusion delay", E::Ks,
                 [](const Profile& s, const Profile& t, const Context&) {
                   return distribution(mean_user_delay(s), mean_user_delay(t));
                 }, ""});
    r.push_back({U, "Gini coefficient", E::Ape,
                 [](const Profile& s, const Profile& t, const Context&) {
                   return scalar_of(s, t, E::Ape, [](const Profile& p) { return gini(values_of(p.user_events)); });
                 }, ""});
    r.push_back({U, "Palma coefficient", E::Ape,
                 [](const Profile& s, const Profile& t, const Context&) {
                   return scalar_of(s, t, E::Ape, [](const Profile& p) { return palma(values_of(p.user_events)); });
                 }, ""});
    r.push_back({U, "Popularity", E::Rbo,
                 [](const Profile& s, const Profile& t, const Context& c) {
                   return ranking(s.popularity, t.popularity, c.suite);
                 }, ""});
    r.push_back({U, "Trustingness", E::Ks,
                 [](const Profile& s, const Profile& t, const Context&) {
                   return distribution(trustingness(s), trustingness(t));
                 }, ""});
    r.push_back({U, "User unique content", E::Ks,
                 [](const Profile& s, const Profile& t, const Context&) {
                   return distribution(sizes_of(s.user_contents), sizes_of(t.user_contents));
                 }, ""});
    return r;
  }();
  return rows;
}

std::string row_key(const RowDef& r) { return std::string(to_string(r.level)) + "/" + r.name; }

std::vector<const RowDef*> selected_rows(const MetricSuite& suite) {
  std::set<std::string> known;
  std::vector<const RowDef*> out;
  for (const auto& r : row_table()) {
    known.insert(row_key(r));
    if (suite.rows.empty() || suite.rows.count(row_key(r))) out.push_back(&r);
  }
  for (const auto& name : suite.rows) {
    if (!known.count(name)) throw Error(Errc::BadConfig, "unknown metric row '" + name + "'");
  }
  return out;
}

void check_ranges(const EventLog& sim, const EventLog& truth) {
  if (truth.empty()) throw Error(Errc::EmptyLog, "ground-truth log is empty");
  if (sim.empty()) return;
  auto range = [](const EventLog& log) {
    auto [lo, hi] = std::minmax_element(log.begin(), log.end(),
                                        [](const Event& a, const Event& b) { return a.ts < b.ts; });
    return std::pair{lo->ts, hi->ts};
  };
  const auto [s0, s1] = range(sim);
  const auto [t0, t1] = range(truth);
  if (s1 < t0 || s0 > t1) {
    throw Error(Errc::DisjointTimeRanges, "simulation and ground truth do not overlap in time");
  }
}

std::vector<const Event*> slice(const EventLog& log, Platform platform) {
  std::vector<const Event*> out;
  for (const auto& e : log) {
    if (e.platform == platform) out.push_back(&e);
  }
  return out;
}

// Per platform: the truth's communities as user sets, largest first.
std::vector<std::set<ActorId>> truth_communities(const std::vector<const Event*>& truth,
                                                 std::size_t limit) {
  EventLog copy;
  for (const Event* e : truth) copy.push_back(*e);
  const auto graph = interaction_graph(copy);
  const auto found = greedy_modularity(graph);
  std::vector<std::set<ActorId>> out;
  for (const auto& group : found.groups) {
    std::set<ActorId> users;
    for (auto v : group) {
      const auto& name = graph.names[v];
      if (name.starts_with("u:")) users.insert(name.substr(2));
    }
    if (users.empty()) continue;
    out.push_back(std::move(users));
    if (out.size() == limit) break;
  }
  return out;
}

std::vector<const Event*> by_users(const std::vector<const Event*>& events,
                                   const std::set<ActorId>& users) {
  std::vector<const Event*> out;
  for (const Event* e : events) {
    if (users.count(e->actor)) out.push_back(e);
  }
  return out;
}

struct PlatformData {
  Platform platform;
  Profile truth;
  std::vector<Profile> truth_communities;
  std::vector<std::set<ActorId>> communities;
};

std::vector<ReportEntry> evaluate_one(const EventLog& sim, const std::vector<PlatformData>& data,
                                      const std::vector<const RowDef*>& rows,
                                      const MetricSuite& suite, const std::string& model) {
  std::vector<ReportEntry> out;
  for (const auto& pd : data) {
    const auto sim_events = slice(sim, pd.platform);
    const Profile sim_profile = profile_of(sim_events, suite.tick_len, true);
    std::vector<Profile> sim_communities;
    bool need_communities = false;
    for (const auto* r : rows) need_communities |= r->level == Level::Community && r->fn;
    if (need_communities) {
      for (const auto& users : pd.communities) {
        sim_communities.push_back(profile_of(by_users(sim_events, users), suite.tick_len, false));
      }
    }
    const Context ctx{suite, pd.platform};
    for (const auto* r : rows) {
      ReportEntry entry;
      entry.level = r->level;
      entry.metric = r->name;
      entry.platform = pd.platform;
      entry.model = model;
      entry.error_metric = r->metric;
      if (!r->fn) {
        entry.note = r->skip_note;
      } else if (r->level == Level::Community) {
        double sum = 0.0;
        std::size_t used = 0;
        std::string note;
        for (std::size_t k = 0; k < pd.truth_communities.size(); ++k) {
          const auto o = r->fn(sim_communities[k], pd.truth_communities[k], ctx);
          if (!o.error) continue;
          sum += *o.error;
          ++used;
        }
        if (used > 0) {
          entry.error = sum / static_cast<double>(used);
        } else {
          entry.note = "no community defines this metric";
        }
      } else {
        const auto o = r->fn(sim_profile, pd.truth, ctx);
        entry.sim_value = o.sim;
        entry.truth_value = o.truth;
        entry.error = o.error;
        entry.note = o.note;
      }
      if (entry.error && !std::isfinite(*entry.error)) entry.error = kSentinel;
      out.push_back(std::move(entry));
    }
  }
  return out;
}

std::vector<PlatformData> prepare(const EventLog& truth, const std::vector<const RowDef*>& rows,
                                  const MetricSuite& suite) {
  if (suite.tick_len <= 0) throw Error(Errc::BadConfig, "tick_len must be positive");
  if (!(suite.rbo_persistence > 0.0 && suite.rbo_persistence < 1.0)) {
    throw Error(Errc::BadPersistence, "rbo persistence must be in (0, 1)");
  }
  bool need_communities = false;
  for (const auto* r : rows) need_communities |= r->level == Level::Community && r->fn;
  std::vector<PlatformData> out;
  for (Platform p : kAllPlatforms) {
    const auto events = slice(truth, p);
    if (events.empty()) continue;
    PlatformData pd{p, profile_of(events, suite.tick_len, true), {}, {}};
    if (need_communities) {
      pd.communities = truth_communities(events, suite.max_communities);
      for (const auto& users : pd.communities) {
        pd.truth_communities.push_back(profile_of(by_users(events, users), suite.tick_len, false));
      }
    }
    out.push_back(std::move(pd));
  }
  return out;
}

void normalize(std::vector<ReportEntry>& entries, bool across_models) {
  using Key = std::tuple<Level, std::string, Platform>;
  std::map<Key, std::pair<double, double>> bounds;
  auto key_of = [&](const ReportEntry& e) {
    return across_models ? Key{e.level, e.metric, e.platform} : Key{e.level, "", e.platform};
  };
  for (const auto& e : entries) {
    if (!e.error) continue;
    auto [it, inserted] = bounds.try_emplace(key_of(e), *e.error, *e.error);
    it->second.first = std::min(it->second.first, *e.error);
    it->second.second = std::max(it->second.second, *e.error);
  }
  for (auto& e : entries) {
    if (!e.error) continue;
    const auto [lo, hi] = bounds.at(key_of(e));
    e.normalized = hi > lo ? (*e.error - lo) / (hi - lo) : 0.0;
  }
}

}  // namespace

std::vector<std::string> all_rows() {
  std::vector<std::string> out;
  for (const auto& r : row_table()) out.push_back(row_key(r));
  return out;
}

MetricReport evaluate(const EventLog& sim, const EventLog& truth, const MetricSuite& suite,
                      const std::string& model) {
  check_ranges(sim, truth);
  const auto rows = selected_rows(suite);
  const auto data = prepare(truth, rows, suite);
  MetricReport report;
  report.models = {model};
  report.normalization = "across-metrics";
  report.entries = evaluate_one(sim, data, rows, suite, model);
  normalize(report.entries, false);
  return report;
}

MetricReport evaluate_models(const std::vector<std::pair<std::string, EventLog>>& sims,
                             const EventLog& truth, const MetricSuite& suite) {
  if (sims.size() == 1) return evaluate(sims[0].second, truth, suite, sims[0].first);
  for (const auto& [name, sim] : sims) check_ranges(sim, truth);
  const auto rows = selected_rows(suite);
  const auto data = prepare(truth, rows, suite);
  MetricReport report;
  report.normalization = "across-models";
  std::vector<std::vector<ReportEntry>> per_model;
  for (const auto& [name, sim] : sims) {
    report.models.push_back(name);
    per_model.push_back(evaluate_one(sim, data, rows, suite, name));
  }
  // interleave so each row's models sit together
  const std::size_t n = per_model.empty() ? 0 : per_model.front().size();
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& entries : per_model) report.entries.push_back(std::move(entries[i]));
  }
  normalize(report.entries, true);
  return report;
}

void write_report_csv(std::ostream& out, const MetricReport& report) {
  out << "# normalization: " << report.normalization << "\n";
  out << "level,metric,platform,error_metric,error,normalized,model,note\n";
  for (const auto& e : report.entries) {
    out << to_string(e.level) << ',' << detail::csv_field(e.metric) << ',' << to_string(e.platform)
        << ',' << to_string(e.error_metric) << ',' << (e.error ? format_real(*e.error) : "") << ','
        << (e.normalized ? format_real(*e.normalized) : "") << ',' << detail::csv_field(e.model)
        << ',' << detail::csv_field(e.note) << '\n';
  }
}

MetricReport read_report_csv(std::istream& in) {
  MetricReport report;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  std::set<std::string> models;
  auto level_of = [&](const std::string& s) {
    for (auto l : {Level::Community, Level::Content, Level::Population, Level::User}) {
      if (to_string(l) == s) return l;
    }
    throw Error(Errc::Format, "unknown level '" + s + "'", line_no);
  };
  auto metric_of = [&](const std::string& s) {
    for (auto m : {ErrorMetric::Ape, ErrorMetric::AbsoluteDifference, ErrorMetric::Ks,
                   ErrorMetric::Jsd, ErrorMetric::Rbo}) {
      if (to_string(m) == s) return m;
    }
    throw Error(Errc::Format, "unknown error metric '" + s + "'", line_no);
  };
  auto real_of = [&](const std::string& s) -> std::optional<double> {
    if (s.empty()) return std::nullopt;
    try {
      std::size_t used = 0;
      double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw Error(Errc::Format, "bad number '" + s + "'", line_no);
    }
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.starts_with("# normalization: ")) {
      report.normalization = line.substr(17);
      continue;
    }
    if (line.starts_with("#")) continue;
    if (!header) {
      if (line != "level,metric,platform,error_metric,error,normalized,model,note") {
        throw Error(Errc::Format, "unexpected report header", line_no);
      }
      header = true;
      continue;
    }
    const auto f = detail::split_csv_line(line);
    if (f.size() != 8) throw Error(Errc::Format, "report row needs 8 fields", line_no);
    ReportEntry e;
    e.level = level_of(f[0]);
    e.metric = f[1];
    const auto platform = parse_platform(f[2]);
    if (!platform) throw Error(Errc::Format, "unknown platform '" + f[2] + "'", line_no);
    e.platform = *platform;
    e.error_metric = metric_of(f[3]);
    e.error = real_of(f[4]);
    e.normalized = real_of(f[5]);
    e.model = f[6];
    e.note = f[7];
    if (models.insert(e.model).second) report.models.push_back(e.model);
    report.entries.push_back(std::move(e));
  }
  return report;
}

void write_report_json(std::ostream& out, const MetricReport& report) {
  nlohmann::ordered_json doc;
  doc["normalization"] = report.normalization;
  doc["models"] = report.models;
  auto& levels = doc["levels"];
  for (auto l : {Level::Community, Level::Content, Level::Population, Level::User}) {
    levels[std::string(to_string(l))] = nlohmann::ordered_json::object();
  }
  auto number = [](const std::optional<double>& v) -> nlohmann::ordered_json {
    if (!v || !std::isfinite(*v)) return nullptr;
    return *v;
  };
  for (const auto& e : report.entries) {
    auto& cell = levels[std::string(to_string(e.level))][e.metric][e.model]
                       [std::string(to_string(e.platform))];
    cell["error_metric"] = to_string(e.error_metric);
    cell["error"] = number(e.error);
    cell["normalized"] = number(e.normalized);
    if (!e.note.empty()) cell["note"] = e.note;
  }
  out << doc.dump(2) << '\n';
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_report_svg(std::ostream& out, const MetricReport& report) {
  constexpr int kRow = 16, kLabel = 420, kBar = 300, kTitle = 28;
  int rows = 0;
  for (auto l : {Level::Community, Level::Content, Level::Population, Level::User}) {
    rows += 2;
    for (const auto& e : report.entries) rows += e.level == l;
  }
  const int height = kTitle + rows * kRow + 10;
  const int width = kLabel + kBar + 80;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<text x=\"4\" y=\"18\" font-size=\"14\">Normalized error (" << xml_escape(report.normalization)
      << ")</text>\n";
  int y = kTitle;
  for (auto l : {Level::Community, Level::Content, Level::Population, Level::User}) {
    y += kRow;
    out << "<text x=\"4\" y=\"" << y << "\" font-weight=\"bold\">" << to_string(l) << "</text>\n";
    for (const auto& e : report.entries) {
      if (e.level != l) continue;
      y += kRow;
      const std::string label = e.metric + " [" + std::string(to_string(e.platform)) + ", " + e.model + "]";
      out << "<text x=\"12\" y=\"" << y << "\">" << xml_escape(label) << "</text>\n";
      if (e.normalized) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", *e.normalized);
        const int w = static_cast<int>(std::lround(*e.normalized * kBar));
        out << "<rect x=\"" << kLabel << "\" y=\"" << y - 10 << "\" width=\"" << w
            << "\" height=\"11\" fill=\"" << (*e.normalized < 0.2 ? "#3a7d44" : "#b5523b") << "\"/>\n";
        out << "<text x=\"" << kLabel + w + 4 << "\" y=\"" << y << "\">" << buf << "</text>\n";
      } else {
        out << "<text x=\"" << kLabel << "\" y=\"" << y << "\" fill=\"#777\">skipped: "
            << xml_escape(e.note) << "</text>\n";
      }
    }
    y += kRow;
  }
  out << "</svg>\n";
}

}  // namespace osnsim::metrics
