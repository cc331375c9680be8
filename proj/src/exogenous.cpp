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

#include "osnsim/exogenous.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "osnsim/error.hpp"

namespace osnsim {
namespace {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <class T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

class FftwPlan {
 public:
  explicit FftwPlan(fftw_plan plan) : plan_(plan) {}
  ~FftwPlan() {
    if (plan_ != nullptr) fftw_destroy_plan(plan_);
  }
  FftwPlan(const FftwPlan&) = delete;
  FftwPlan& operator=(const FftwPlan&) = delete;

  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

void check_filter_config(double cutoff_frac, int order) {
  if (!(cutoff_frac > 0.0 && cutoff_frac <= 0.5)) {
    throw Error(Errc::BadConfig, "cutoff_frac must be in (0, 0.5]");
  }
  if (order < 1) throw Error(Errc::BadConfig, "filter order must be >= 1");
}

// Squared gain including the DC bin, which the public response excludes.
double squared_gain(double f, double cutoff_frac, int order, FilterKind kind) {
  if (f == 0.0) return kind == FilterKind::LowPass ? 1.0 : 0.0;
  const double ratio =
      kind == FilterKind::LowPass ? f / cutoff_frac : cutoff_frac / f;
  return 1.0 / (1.0 + std::pow(ratio, 2.0 * order));
}

}  // namespace

double butterworth_response(double freq_frac, double cutoff_frac, int order,
                            FilterKind kind) {
  check_filter_config(cutoff_frac, order);
  if (!(freq_frac > 0.0 && freq_frac <= 0.5)) {
    throw Error(Errc::BadConfig, "freq_frac must be in (0, 0.5]");
  }
  return squared_gain(freq_frac, cutoff_frac, order, kind);
}

std::vector<double> butterworth_filter(std::span<const double> signal,
                                       double cutoff_frac, int order,
                                       FilterKind kind, Boundary boundary) {
  check_filter_config(cutoff_frac, order);
  const std::size_t n = signal.size();
  if (n == 0) return {};
  const std::size_t m = boundary == Boundary::Symmetric ? 2 * n : n;
  const std::size_t bins = m / 2 + 1;

  auto time = fftw_buffer<double>(m);
  auto freq = fftw_buffer<fftw_complex>(bins);
  std::copy(signal.begin(), signal.end(), time.get());
  if (boundary == Boundary::Symmetric) {
    std::reverse_copy(signal.begin(), signal.end(), time.get() + n);
  }

  const int len = static_cast<int>(m);
  FftwPlan forward(fftw_plan_dft_r2c_1d(len, time.get(), freq.get(), FFTW_ESTIMATE));
  FftwPlan inverse(fftw_plan_dft_c2r_1d(len, freq.get(), time.get(), FFTW_ESTIMATE));
  forward.execute();
  for (std::size_t k = 0; k < bins; ++k) {
    const double f = static_cast<double>(k) / static_cast<double>(m);
    const double gain = std::sqrt(squared_gain(f, cutoff_frac, order, kind));
    freq[k][0] *= gain;
    freq[k][1] *= gain;
  }
  inverse.execute();

  std::vector<double> out(n);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < n; ++i) out[i] = time[i] * scale;
  return out;
}

std::vector<double> rolling_zscore(std::span<const double> values,
                                   std::size_t window) {
  if (window < 1) throw Error(Errc::BadConfig, "window must be >= 1");
  const std::size_t n = values.size();
  std::vector<double> z(n, 0.0);
  const std::size_t half = window / 2;
  for (std::size_t t = 0; t < n; ++t) {
    const auto start = static_cast<std::ptrdiff_t>(t) - static_cast<std::ptrdiff_t>(half);
    const auto lo = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, start));
    const auto hi = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
        static_cast<std::ptrdiff_t>(n), start + static_cast<std::ptrdiff_t>(window)));
    const auto count = static_cast<double>(hi - lo);
    double mean = 0.0;
    for (std::size_t i = lo; i < hi; ++i) mean += values[i];
    mean /= count;
    double var = 0.0;
    for (std::size_t i = lo; i < hi; ++i) var += (values[i] - mean) * (values[i] - mean);
    const double sd = std::sqrt(var / count);
    z[t] = sd > 0.0 ? (values[t] - mean) / sd : 0.0;
  }
  return z;
}

BinarySeries detect_shocks(const ShockSeries& series, const ShockConfig& config) {
  check_filter_config(config.cutoff_frac, config.order);
  if (config.window < 1) throw Error(Errc::BadConfig, "window must be >= 1");
  if (!(config.z_threshold > 0.0)) throw Error(Errc::BadConfig, "z_threshold must be > 0");
  if (!(config.magnitude_floor >= 0.0 && config.magnitude_floor < 1.0)) {
    throw Error(Errc::BadConfig, "magnitude_floor must be in [0, 1)");
  }
  if (series.values.size() < 8) {
    throw Error(Errc::SeriesTooShort, "shock series needs at least 8 samples");
  }
  double input_scale = 0.0;
  for (double v : series.values) {
    if (!std::isfinite(v)) throw Error(Errc::BadConfig, "shock series has non-finite values");
    input_scale = std::max(input_scale, std::abs(v));
  }

  auto magnitude = butterworth_filter(series.values, config.cutoff_frac, config.order,
                                      FilterKind::HighPass, Boundary::Symmetric);
  double peak = 0.0;
  for (auto& v : magnitude) {
    v = std::abs(v);
    peak = std::max(peak, v);
  }
  // Round-off from the transforms sits near 1e-16 of the input scale.
  const double floor =
      std::max(config.magnitude_floor * peak, 1e-9 * input_scale);
  for (auto& v : magnitude) {
    if (v < floor) v = 0.0;
  }

  const auto z = rolling_zscore(magnitude, config.window);
  BinarySeries mask{series.source, series.t0, series.tick_len, {}};
  mask.bits.reserve(z.size());
  for (double score : z) mask.bits.push_back(score >= config.z_threshold ? 1 : 0);
  return mask;
}

InfluenceNetwork build_exogenous_network(std::span<const BinarySeries> masks,
                                         std::span<const BinarySeries> users,
                                         std::size_t lag, double nte_threshold) {
  return build_network_from_series(masks, users, lag, nte_threshold);
}

ShockSeries read_shock_csv(std::istream& in, const std::string& source,
                           const TickFrame& frame) {
  if (frame.tick_len <= 0) throw Error(Errc::BadConfig, "tick_len must be positive");
  std::vector<double> sums(frame.ticks, 0.0);
  std::vector<std::size_t> hits(frame.ticks, 0);
  std::string line;
  std::size_t line_no = 0;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line == "ts,value") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(Errc::Format, "expected 'ts,value'", line_no);
    std::int64_t ts = 0;
    double value = 0.0;
    try {
      std::size_t used = 0;
      ts = std::stoll(line.substr(0, comma), &used);
      if (used != comma) throw std::invalid_argument("ts");
      value = std::stod(line.substr(comma + 1));
    } catch (const std::exception&) {
      throw Error(Errc::Format, "unparseable row '" + line + "'", line_no);
    }
    if (!std::isfinite(value)) throw Error(Errc::Format, "non-finite value", line_no);
    ++rows;
    const auto tick = frame.tick_of(ts);
    if (tick < 0 || tick >= static_cast<std::int64_t>(frame.ticks)) continue;
    sums[static_cast<std::size_t>(tick)] += value;
    ++hits[static_cast<std::size_t>(tick)];
  }
  if (rows == 0) throw Error(Errc::Format, "exogenous series '" + source + "' is empty");

  ShockSeries series{source, frame.t0, frame.tick_len, std::vector<double>(frame.ticks)};
  auto first = std::find_if(hits.begin(), hits.end(), [](std::size_t h) { return h > 0; });
  if (first == hits.end()) {
    throw Error(Errc::Format, "exogenous series '" + source + "' has no samples in frame");
  }
  double carry = sums[first - hits.begin()] / static_cast<double>(*first);
  for (std::size_t t = 0; t < frame.ticks; ++t) {
    if (hits[t] > 0) carry = sums[t] / static_cast<double>(hits[t]);
    series.values[t] = carry;
  }
  return series;
}

ShockSeries load_shock_csv(const std::filesystem::path& path, const TickFrame& frame) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  return read_shock_csv(in, path.stem().string(), frame);
}

void write_shock_csv(std::ostream& out, const ShockSeries& series) {
  out << "ts,value\n";
  char buf[64];
  for (std::size_t t = 0; t < series.values.size(); ++t) {
    std::snprintf(buf, sizeof buf, "%.17g", series.values[t]);
    out << series.t0 + static_cast<std::int64_t>(t) * series.tick_len << ',' << buf
        << '\n';
  }
}

void write_masks(std::ostream& out, std::span<const BinarySeries> masks) {
  for (const auto& mask : masks) {
    for (std::size_t t = 0; t < mask.bits.size(); ++t) {
      if (mask.bits[t] == 0) continue;
      nlohmann::json row = {{"bit", 1}, {"source", mask.owner}, {"tick", t}};
      out << row.dump() << '\n';
    }
  }
}

std::vector<BinarySeries> read_masks(std::istream& in, const TickFrame& frame) {
  std::map<std::string, BinarySeries> masks;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json row;
    try {
      row = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      throw Error(Errc::Format, "invalid JSON in mask file", line_no);
    }
    if (!row.is_object() || !row.contains("source") || !row["source"].is_string() ||
        !row.contains("tick") || !row["tick"].is_number_integer()) {
      throw Error(Errc::Format, "mask rows need string 'source' and integer 'tick'",
                  line_no);
    }
    const auto source = row["source"].get<std::string>();
    const auto tick = row["tick"].get<std::int64_t>();
    const int bit = row.value("bit", 1);
    auto [it, inserted] = masks.try_emplace(source);
    if (inserted) {
      it->second = BinarySeries{source, frame.t0, frame.tick_len,
                                std::vector<std::uint8_t>(frame.ticks, 0)};
    }
    if (tick < 0 || tick >= static_cast<std::int64_t>(frame.ticks)) continue;
    it->second.bits[static_cast<std::size_t>(tick)] = bit != 0 ? 1 : 0;
  }
  std::vector<BinarySeries> out;
  for (auto& [source, mask] : masks) out.push_back(std::move(mask));
  return out;
}

}  // namespace osnsim
