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

// Straight-line reference implementations used only by tests. None of these
// share code with the library.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace oracle {

// Transfer entropy by enumerating every (dst_t, dst_{t-lag}, src_{t-lag})
// triple: sum p(x,y,z) ln[p(x,y,z) p(y) / (p(y,z) p(x,y))].
inline double transfer_entropy(const std::vector<std::uint8_t>& src,
                               const std::vector<std::uint8_t>& dst, int lag) {
  std::map<std::tuple<int, int, int>, double> pxyz;
  std::map<std::pair<int, int>, double> pxy, pyz;
  std::map<int, double> py;
  const int n = static_cast<int>(dst.size());
  const double w = 1.0 / (n - lag);
  for (int t = lag; t < n; ++t) {
    const int x = dst[t], y = dst[t - lag], z = src[t - lag];
    pxyz[{x, y, z}] += w;
    pxy[{x, y}] += w;
    pyz[{y, z}] += w;
    py[y] += w;
  }
  double te = 0.0;
  for (const auto& [key, p] : pxyz) {
    const auto [x, y, z] = key;
    te += p * std::log(p * py[y] / (pyz[{y, z}] * pxy[{x, y}]));
  }
  return te;
}

// Same enumeration over fixed count tables; cheap enough to sweep every pair
// of short series.
inline double transfer_entropy_table(const std::uint8_t* src, const std::uint8_t* dst, int n,
                                     int lag) {
  double cxyz[2][2][2] = {}, cxy[2][2] = {}, cyz[2][2] = {}, cy[2] = {};
  for (int t = lag; t < n; ++t) {
    const int x = dst[t], y = dst[t - lag], z = src[t - lag];
    cxyz[x][y][z] += 1;
    cxy[x][y] += 1;
    cyz[y][z] += 1;
    cy[y] += 1;
  }
  const double total = n - lag;
  double te = 0.0;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int z = 0; z < 2; ++z) {
        if (cxyz[x][y][z] == 0) continue;
        const double p = cxyz[x][y][z] / total;
        te += p * std::log((cxyz[x][y][z] / total) * (cy[y] / total) /
                           ((cyz[y][z] / total) * (cxy[x][y] / total)));
      }
    }
  }
  return te;
}

// H(dst_t | dst_{t-lag}) from the joint distribution.
inline double conditional_entropy(const std::vector<std::uint8_t>& dst, int lag) {
  std::map<std::pair<int, int>, double> pxy;
  std::map<int, double> py;
  const int n = static_cast<int>(dst.size());
  const double w = 1.0 / (n - lag);
  for (int t = lag; t < n; ++t) {
    pxy[{dst[t], dst[t - lag]}] += w;
    py[dst[t - lag]] += w;
  }
  double h = 0.0;
  for (const auto& [key, p] : pxy) h -= p * std::log(p / py[key.second]);
  return h;
}

// Rank-biased overlap (extrapolated, uneven-length form) by explicit prefix
// set intersection at every depth.
inline double rbo(const std::vector<std::string>& a, const std::vector<std::string>& b,
                  double p) {
  const auto& s = a.size() <= b.size() ? a : b;
  const auto& l = a.size() <= b.size() ? b : a;
  const std::size_t sl = s.size(), ll = l.size();
  if (ll == 0) return 1.0;
  auto overlap = [&](std::size_t d) {
    std::set<std::string> sp(s.begin(), s.begin() + std::min(d, sl));
    std::set<std::string> lp(l.begin(), l.begin() + std::min(d, ll));
    std::size_t x = 0;
    for (const auto& v : sp) x += lp.count(v);
    return static_cast<double>(x);
  };
  double sum = 0.0;
  for (std::size_t d = 1; d <= ll; ++d) sum += overlap(d) / d * std::pow(p, d);
  const double xs = overlap(sl);
  for (std::size_t d = sl + 1; d <= ll; ++d) {
    sum += xs * (d - sl) / (static_cast<double>(sl) * d) * std::pow(p, d);
  }
  const double xl = overlap(ll);
  return (1 - p) / p * sum + ((xl - xs) / ll + (sl > 0 ? xs / sl : 0.0)) * std::pow(p, ll);
}

// Union of independent events by summing the probability of every outcome in
// the 2^n sample space where at least one event occurs.
inline double union_by_enumeration(const std::vector<double>& probs) {
  const std::size_t n = probs.size();
  double total = 0.0;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    double outcome = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      outcome *= (mask >> k) & 1 ? probs[k] : 1.0 - probs[k];
    }
    total += outcome;
  }
  return total;
}

// Cascade probability updates written out term by term.
inline double cascade_q(double prev, double te, double noise) {
  double v = prev + noise / (1.0 + te);
  if (v < 0.0) v = 0.0;
  if (v > 1.0) v = 1.0;
  return v;
}

inline double cascade_p(const std::vector<double>& prev, const std::vector<double>& te,
                        const std::vector<double>& noise) {
  double none = 1.0;
  for (std::size_t k = 0; k < prev.size(); ++k) {
    none *= 1.0 - cascade_q(prev[k], te[k], noise[k]);
  }
  return 1.0 - none;
}

inline double cascade_union(double q, double p) { return q + p - q * p; }

// Node age and fitness as literally written: acted nodes use
//   a <- a + (1 - (t_c - t_p) * F)
// idle nodes use
//   a <- a + (1 - (t_c - t_p) * (t_c + 1))
// and F = |A| / a, with a floored at `floor`.
struct AgeFitness {
  double age;
  double fitness;
  double actions;
};

inline AgeFitness age_and_fitness(double actions, double age, double fitness, double t_c,
                                  double t_p, double new_actions, double floor) {
  double a;
  if (new_actions > 0) {
    a = age + (1 - (t_c - t_p) * fitness);
  } else {
    a = age + (1 - (t_c - t_p) * (t_c + 1));
  }
  if (a < floor) a = floor;
  const double count = actions + new_actions;
  return {a, count / a, count};
}

// Gini through the mean absolute difference: sum_ij |x_i - x_j| / (2 n^2 mu).
inline double gini_mad(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  double total = 0.0, diff = 0.0;
  for (double a : x) {
    total += a;
    for (double b : x) diff += std::abs(a - b);
  }
  if (total == 0.0) return 0.0;
  return diff / (2.0 * n * total);
}

// KS distance by evaluating both ECDFs at every observed point.
inline double ks(const std::vector<double>& a, const std::vector<double>& b) {
  auto ecdf = [](const std::vector<double>& s, double v) {
    double c = 0.0;
    for (double x : s) c += x <= v;
    return c / static_cast<double>(s.size());
  };
  double d = 0.0;
  for (const auto* s : {&a, &b}) {
    for (double v : *s) d = std::max(d, std::abs(ecdf(a, v) - ecdf(b, v)));
  }
  return d;
}

// JSD as H(M) - (H(A) + H(B)) / 2.
inline double jsd(std::vector<double> a, std::vector<double> b) {
  double sa = 0.0, sb = 0.0;
  for (double v : a) sa += v;
  for (double v : b) sb += v;
  auto h = [](double p) { return p > 0.0 ? -p * std::log(p) : 0.0; };
  double hm = 0.0, ha = 0.0, hb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double pa = a[i] / sa, pb = b[i] / sb;
    hm += h(0.5 * (pa + pb));
    ha += h(pa);
    hb += h(pb);
  }
  return hm - 0.5 * (ha + hb);
}

// Newman modularity of a partition of an undirected simple graph given as an
// edge list: sum_c [ L_c / m - (d_c / 2m)^2 ].
inline double modularity(const std::vector<std::pair<int, int>>& edges,
                         const std::map<int, int>& group_of) {
  const double m = static_cast<double>(edges.size());
  std::map<int, double> inside, degree;
  for (const auto& [a, b] : edges) {
    degree[group_of.at(a)] += 1.0;
    degree[group_of.at(b)] += 1.0;
    if (group_of.at(a) == group_of.at(b)) inside[group_of.at(a)] += 1.0;
  }
  double q = 0.0;
  for (const auto& [g, d] : degree) q += inside[g] / m - (d / (2 * m)) * (d / (2 * m));
  return q;
}

// Average local clustering by testing every neighbour pair.
inline double average_clustering(const std::vector<std::set<int>>& adj) {
  double sum = 0.0;
  for (const auto& nbrs : adj) {
    const double k = static_cast<double>(nbrs.size());
    if (k < 2) continue;
    double links = 0.0;
    for (int a : nbrs) {
      for (int b : nbrs) {
        if (a < b && adj[a].count(b)) links += 1.0;
      }
    }
    sum += 2.0 * links / (k * (k - 1));
  }
  return sum / static_cast<double>(adj.size());
}

}  // namespace oracle
