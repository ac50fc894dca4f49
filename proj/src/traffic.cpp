#include "poscad/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "poscad/errors.hpp"

namespace poscad {

std::string to_string(ArrivalProcessKind kind) {
  switch (kind) {
    case ArrivalProcessKind::poisson: return "poisson";
    case ArrivalProcessKind::pareto: return "pareto";
    case ArrivalProcessKind::empirical: return "empirical";
  }
  return "unknown";
}

std::optional<ArrivalProcessKind> parse_arrival_process(const std::string& name) {
  if (name == "poisson") return ArrivalProcessKind::poisson;
  if (name == "pareto") return ArrivalProcessKind::pareto;
  if (name == "empirical") return ArrivalProcessKind::empirical;
  return std::nullopt;
}

std::vector<InterArrivalBin> parse_inter_arrival_distribution(std::istream& in) {
  std::vector<InterArrivalBin> bins;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream row(line);
    InterArrivalBin bin;
    char comma = 0;
    if (!(row >> bin.inter_arrival_ms >> comma >> bin.probability) || comma != ',') {
      throw TrafficError(fmt::format("distribution line {}: expected 'inter_arrival_ms,probability'", lineno));
    }
    if (!(bin.inter_arrival_ms > 0.0) || bin.probability < 0.0) {
      throw TrafficError(fmt::format("distribution line {}: need inter-arrival > 0 and probability >= 0", lineno));
    }
    bins.push_back(bin);
  }
  if (bins.empty()) throw TrafficError("distribution has no rows");
  const double total = std::accumulate(bins.begin(), bins.end(), 0.0,
                                       [](double acc, const InterArrivalBin& b) { return acc + b.probability; });
  if (std::abs(total - 1.0) > 1e-6) {
    throw TrafficError(fmt::format("distribution probabilities sum to {:.9f}, expected 1", total));
  }
  return bins;
}

std::vector<InterArrivalBin> load_inter_arrival_distribution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TrafficError(fmt::format("cannot open distribution file '{}'", path));
  return parse_inter_arrival_distribution(in);
}

namespace {

double standard_normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace

double sigma_from_error_rate(double r) {
  if (!(r >= 0.0) || r >= 1.0) {
    throw TrafficError(fmt::format("prediction error rate must lie in [0, 1), got {}", r));
  }
  if (r == 0.0) return 0.0;
  // 0.5 / sigma is the upper r/2 quantile of the standard normal.
  const double target = r / 2.0;
  double lo = 0.0;
  double hi = 40.0;
  for (int iter = 0; iter < 200 && hi - lo > 0.0; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (standard_normal_upper_tail(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 / (0.5 * (lo + hi));
}

double error_rate_from_sigma(double sigma) {
  if (sigma <= 0.0) return 0.0;
  return 2.0 * standard_normal_upper_tail(0.5 / sigma);
}

long prediction_error(double sigma, double standard_normal) { return std::lround(sigma * standard_normal); }

std::size_t predicted_count(std::size_t actual, double sigma, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const long e = prediction_error(sigma, normal(rng));
  const long value = static_cast<long>(actual) + e;
  return value > 0 ? static_cast<std::size_t>(value) : 0;
}

ArrivalProcess::ArrivalProcess(const ArrivalSpec& spec, double rate, std::uint64_t seed)
    : kind_(spec.process), rate_(rate), slot_ms_(spec.slot_ms), a_max_(spec.a_max), rng_(seed) {
  if (rate < 0.0) throw TrafficError(fmt::format("arrival rate must be >= 0, got {}", rate));
  if (rate == 0.0) return;
  const double mean_gap = slot_ms_ / rate;
  switch (kind_) {
    case ArrivalProcessKind::poisson:
      poisson_ = std::poisson_distribution<long>(rate);
      break;
    case ArrivalProcessKind::pareto:
      if (!(spec.pareto_shape > 1.0)) throw TrafficError("pareto shape must exceed 1 for a finite mean");
      pareto_shape_ = spec.pareto_shape;
      pareto_scale_ = mean_gap * (pareto_shape_ - 1.0) / pareto_shape_;
      break;
    case ArrivalProcessKind::empirical: {
      if (spec.empirical.empty()) throw TrafficError("empirical arrivals need a distribution");
      std::vector<double> weights;
      double file_mean = 0.0;
      for (const auto& bin : spec.empirical) {
        weights.push_back(bin.probability);
        file_mean += bin.inter_arrival_ms * bin.probability;
      }
      // Rescale the shape so the mean gap matches the requested rate.
      const double scale = mean_gap / file_mean;
      for (const auto& bin : spec.empirical) empirical_values_.push_back(bin.inter_arrival_ms * scale);
      empirical_pick_ = std::discrete_distribution<std::size_t>(weights.begin(), weights.end());
      break;
    }
  }
  if (kind_ != ArrivalProcessKind::poisson) residual_ms_ = draw_inter_arrival();
}

double ArrivalProcess::draw_inter_arrival() {
  if (kind_ == ArrivalProcessKind::pareto) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double u = 1.0 - unit(rng_);  // (0, 1]
    return pareto_scale_ / std::pow(u, 1.0 / pareto_shape_);
  }
  return empirical_values_[empirical_pick_(rng_)];
}

std::size_t ArrivalProcess::next() {
  if (rate_ == 0.0) return 0;
  std::size_t count = 0;
  if (kind_ == ArrivalProcessKind::poisson) {
    count = static_cast<std::size_t>(poisson_(rng_));
  } else {
    while (residual_ms_ < slot_ms_) {
      ++count;
      residual_ms_ += draw_inter_arrival();
    }
    residual_ms_ -= slot_ms_;
  }
  if (count > a_max_) {
    ++truncations_;
    count = a_max_;
  }
  return count;
}

double switch_rate(const ArrivalSpec& spec, const std::optional<HotSpotSpec>& hotspot,
                   const Topology& topo, std::size_t sw) {
  if (hotspot && hotspot->pod_index < topo.pods.size()) {
    const auto& pod = topo.pods[hotspot->pod_index];
    if (std::find(pod.begin(), pod.end(), sw) != pod.end()) return hotspot->rate;
  }
  return spec.mean_rate;
}

std::vector<int> sample_windows(const PredictionSpec& spec, std::size_t num_switches, std::uint64_t master_seed) {
  if (spec.mean_window < 0) throw TrafficError("mean prediction window must be >= 0");
  std::vector<int> windows(num_switches, 0);
  if (spec.mean_window == 0) return windows;
  Rng rng = make_rng(master_seed, StreamTag::window_size);
  std::uniform_int_distribution<int> pick(0, 2 * spec.mean_window);
  for (auto& w : windows) w = pick(rng);
  return windows;
}

StochasticTraffic::StochasticTraffic(const ArrivalSpec& spec, const std::optional<HotSpotSpec>& hotspot,
                                     const Topology& topo, double sigma, std::uint64_t master_seed)
    : sigma_(sigma) {
  streams_.reserve(topo.num_switches);
  for (std::size_t sw = 0; sw < topo.num_switches; ++sw) {
    const double rate = switch_rate(spec, hotspot, topo, sw);
    streams_.push_back(Stream{rate, ArrivalProcess(spec, rate, derive_seed(master_seed, StreamTag::arrivals, sw)),
                              make_rng(master_seed, StreamTag::prediction_error, sw), {}, 0, {}});
  }
}

const StochasticTraffic::Entry& StochasticTraffic::entry(std::size_t sw, std::int64_t slot) {
  auto& s = streams_[sw];
  if (slot < s.base) {
    throw ContractViolation(fmt::format("traffic for switch {} slot {} already released", sw, slot));
  }
  while (static_cast<std::int64_t>(s.cache.size()) <= slot - s.base) {
    const std::size_t a = s.arrivals.next();
    // One normal draw per slot regardless of sigma, so error-rate sweeps
    // share the same underlying deviations.
    const long e = prediction_error(sigma_, s.normal(s.errors));
    const long p = static_cast<long>(a) + e;
    s.cache.push_back(Entry{a, p > 0 ? static_cast<std::size_t>(p) : 0});
  }
  return s.cache[static_cast<std::size_t>(slot - s.base)];
}

std::size_t StochasticTraffic::actual(std::size_t sw, std::int64_t slot) { return entry(sw, slot).actual; }

std::size_t StochasticTraffic::predicted(std::size_t sw, std::int64_t slot) { return entry(sw, slot).predicted; }

void StochasticTraffic::release_before(std::int64_t slot) {
  for (auto& s : streams_) {
    while (s.base < slot && !s.cache.empty()) {
      s.cache.pop_front();
      ++s.base;
    }
  }
}

std::size_t StochasticTraffic::truncations() const {
  std::size_t total = 0;
  for (const auto& s : streams_) total += s.arrivals.truncations();
  return total;
}

ScriptedTraffic::ScriptedTraffic(std::vector<std::vector<std::size_t>> arrivals)
    : arrivals_(std::move(arrivals)), predictions_(arrivals_.size()) {}

void ScriptedTraffic::set_prediction(std::size_t sw, std::int64_t slot, std::size_t value) {
  auto& row = predictions_.at(sw);
  const auto idx = static_cast<std::size_t>(slot);
  if (row.size() <= idx) row.resize(idx + 1);
  row[idx] = value;
}

std::size_t ScriptedTraffic::actual(std::size_t sw, std::int64_t slot) {
  const auto& row = arrivals_.at(sw);
  const auto idx = static_cast<std::size_t>(slot);
  return idx < row.size() ? row[idx] : 0;
}

std::size_t ScriptedTraffic::predicted(std::size_t sw, std::int64_t slot) {
  const auto& row = predictions_.at(sw);
  const auto idx = static_cast<std::size_t>(slot);
  if (idx < row.size() && row[idx]) return *row[idx];
  return actual(sw, slot);
}

}  // namespace poscad
