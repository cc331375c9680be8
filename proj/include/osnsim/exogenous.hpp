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
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "osnsim/influence.hpp"
#include "osnsim/ingest.hpp"

namespace osnsim {

enum class FilterKind { LowPass, HighPass };

/// Analytic squared magnitude |H(f)|^2 of an order-`order` Butterworth
/// filter; frequencies are fractions of the sampling rate.
/// Throws BadConfig unless 0 < freq_frac <= 0.5, 0 < cutoff_frac <= 0.5 and
/// order >= 1.
double butterworth_response(double freq_frac, double cutoff_frac, int order,
                            FilterKind kind);

/// How the series is extended before the transform. Symmetric mirrors the
/// series so the two ends meet without a jump.
enum class Boundary { Periodic, Symmetric };

/// Zero-phase filtering: forward FFT, multiply every bin by |H(f)|, inverse
/// FFT.
std::vector<double> butterworth_filter(std::span<const double> signal,
                                       double cutoff_frac, int order,
                                       FilterKind kind,
                                       Boundary boundary = Boundary::Symmetric);

/// z-score of each sample against the `window` samples centred on it
/// (shrinking at the edges). Constant windows score 0.
std::vector<double> rolling_zscore(std::span<const double> values,
                                   std::size_t window);

struct ShockConfig {
  int order = 2;
  double cutoff_frac = 0.1;
  std::size_t window = 24;
  double z_threshold = 3.0;
  /// Filtered magnitudes below this fraction of the largest one are treated
  /// as zero so numerical ringing never scores as an anomaly.
  double magnitude_floor = 1e-3;
};

/// An exogenous series sampled on the run's tick frame.
struct ShockSeries {
  std::string source;
  std::int64_t t0 = 0;
  std::int64_t tick_len = 3600;
  std::vector<double> values;
};

/// High-pass Butterworth, then rolling z-score of the magnitude, then
/// thresholding. Throws SeriesTooShort (< 8 samples) or BadConfig.
BinarySeries detect_shocks(const ShockSeries& series, const ShockConfig& config = {});

/// Shock -> user network; every edge starts at a shock source.
InfluenceNetwork build_exogenous_network(std::span<const BinarySeries> masks,
                                         std::span<const BinarySeries> users,
                                         std::size_t lag, double nte_threshold);

/// Reads `ts,value` rows (header optional) and resamples them onto `frame`:
/// values inside one tick are averaged, empty ticks carry the previous value
/// forward. Throws Io / Format.
ShockSeries read_shock_csv(std::istream& in, const std::string& source,
                           const TickFrame& frame);
ShockSeries load_shock_csv(const std::filesystem::path& path,
                           const TickFrame& frame);
void write_shock_csv(std::ostream& out, const ShockSeries& series);

/// Sparse JSON-lines `{"bit":1,"source":...,"tick":...}`, 1-bits only.
void write_masks(std::ostream& out, std::span<const BinarySeries> masks);
/// Rebuilds dense masks of `frame.ticks` length, one per source seen.
std::vector<BinarySeries> read_masks(std::istream& in, const TickFrame& frame);

}  // namespace osnsim
