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

#include <set>
#include <string>
#include <utility>

#include "osnsim/influence.hpp"
#include "osnsim/synth.hpp"

namespace fixtures {

struct Recovery {
  double precision = 0.0;
  double recall = 0.0;
};

// Planted-edge recovery of the endogenous network built at `threshold`.
inline Recovery recovery(const osnsim::synth::Scenario& s, double threshold) {
  osnsim::InfluenceConfig cfg;
  cfg.nte_threshold = threshold;
  cfg.tick_len = 3600;
  const auto net = osnsim::build_influence_network(s.log, cfg);
  std::set<std::pair<std::string, std::string>> planted, found;
  for (const auto& e : s.annotations.planted_edges) planted.emplace(e.source, e.target);
  for (const auto& e : net.edges) found.emplace(e.source, e.target);
  std::size_t hit = 0;
  for (const auto& p : found) hit += planted.count(p);
  return {found.empty() ? 0.0 : static_cast<double>(hit) / static_cast<double>(found.size()),
          planted.empty() ? 1.0 : static_cast<double>(hit) / static_cast<double>(planted.size())};
}

}  // namespace fixtures
