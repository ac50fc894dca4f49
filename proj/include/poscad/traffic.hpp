#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <istream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "poscad/rng.hpp"
#include "poscad/topology.hpp"

namespace poscad {

enum class ArrivalProcessKind { poisson, pareto, empirical };

std::string to_string(ArrivalProcessKind kind);
std::optional<ArrivalProcessKind> parse_arrival_process(const std::string& name);

/// One row of an empirical inter-arrival distribution file.
struct InterArrivalBin {
  double inter_arrival_ms = 0.0;
  double probability = 0.0;
};

/// Parses `inter_arrival_ms,probability` rows. Blank lines and lines starting
/// with '#' are skipped; probabilities must sum to 1 within 1e-6.
std::vector<InterArrivalBin> parse_inter_arrival_distribution(std::istream& in);
std::vector<InterArrivalBin> load_inter_arrival_distribution(const std::string& path);

struct ArrivalSpec {
  ArrivalProcessKind process = ArrivalProcessKind::poisson;
  double mean_rate = 5.88;  // requests per slot
  double slot_ms = 10.0;
  double pareto_shape = 2.5;
  std::vector<InterArrivalBin> empirical;
  std::size_t a_max = 1000;
};

struct HotSpotSpec {
  std::size_t pod_index = 0;
  double rate = 200.0;
};

struct PredictionSpec {
  int mean_window = 0;      // D; per-switch windows are uniform on [0, 2D]
  double error_rate = 0.0;  // r
};

/// Solves r = 2[1 - Phi(0.5 / sigma)] for sigma. r = 0 gives sigma = 0.
double sigma_from_error_rate(double r);

/// Inverse of sigma_from_error_rate.
double error_rate_from_sigma(double sigma);

/// Deviation e = Round(sigma * z) for a standard normal draw z.
long prediction_error(double sigma, double standard_normal);

/// max(0, actual + Round(x)) with x ~ N(0, sigma^2) drawn from `rng`.
std::size_t predicted_count(std::size_t actual, double sigma, Rng& rng);

/// Per-slot counts of a renewal (or Poisson) arrival process for one switch.
/// Counts are i.i.d. for Poisson; Pareto and empirical count renewals that
/// fall inside each slot.
class ArrivalProcess {
 public:
  ArrivalProcess(const ArrivalSpec& spec, double rate, std::uint64_t seed);

  std::size_t next();
  std::size_t truncations() const { return truncations_; }

 private:
  double draw_inter_arrival();

  ArrivalProcessKind kind_;
  double rate_;
  double slot_ms_;
  std::size_t a_max_;
  Rng rng_;
  std::poisson_distribution<long> poisson_;
  double pareto_shape_ = 0.0;
  double pareto_scale_ = 0.0;
  std::discrete_distribution<std::size_t> empirical_pick_;
  std::vector<double> empirical_values_;
  double residual_ms_ = 0.0;
  std::size_t truncations_ = 0;
};

/// Arrival rate of a switch: the hot-spot rate inside the hot pod, else the
/// base rate.
double switch_rate(const ArrivalSpec& spec, const std::optional<HotSpotSpec>& hotspot,
                   const Topology& topo, std::size_t sw);

/// Per-switch window sizes D_i, uniform on the integers [0, 2D].
std::vector<int> sample_windows(const PredictionSpec& spec, std::size_t num_switches, std::uint64_t master_seed);

/// Ground truth and predictions the engine consumes. Both values for a
/// (switch, slot) are fixed the first time either is requested.
class TrafficSource {
 public:
  virtual ~TrafficSource() = default;
  virtual std::size_t actual(std::size_t sw, std::int64_t slot) = 0;
  virtual std::size_t predicted(std::size_t sw, std::int64_t slot) = 0;
  /// Slots before `slot` will not be requested again.
  virtual void release_before(std::int64_t /*slot*/) {}
};

/// Stochastic traffic: one arrival stream and one error stream per switch,
/// each derived from the master seed, generated lazily in slot order.
class StochasticTraffic : public TrafficSource {
 public:
  StochasticTraffic(const ArrivalSpec& spec, const std::optional<HotSpotSpec>& hotspot,
                    const Topology& topo, double sigma, std::uint64_t master_seed);

  std::size_t actual(std::size_t sw, std::int64_t slot) override;
  std::size_t predicted(std::size_t sw, std::int64_t slot) override;
  void release_before(std::int64_t slot) override;

  std::size_t truncations() const;
  double rate(std::size_t sw) const { return streams_[sw].rate; }

 private:
  struct Entry {
    std::size_t actual;
    std::size_t predicted;
  };
  struct Stream {
    double rate;
    ArrivalProcess arrivals;
    Rng errors;
    // Kept per stream: the distribution caches half of each generated pair.
    std::normal_distribution<double> normal{0.0, 1.0};
    std::int64_t base = 0;
    std::deque<Entry> cache;
  };
  const Entry& entry(std::size_t sw, std::int64_t slot);

  double sigma_;
  std::vector<Stream> streams_;
};

/// Fixed arrival table, perfect predictions unless overridden. For tests and
/// hand-built scenarios.
class ScriptedTraffic : public TrafficSource {
 public:
  explicit ScriptedTraffic(std::vector<std::vector<std::size_t>> arrivals);

  void set_prediction(std::size_t sw, std::int64_t slot, std::size_t value);
  std::size_t actual(std::size_t sw, std::int64_t slot) override;
  std::size_t predicted(std::size_t sw, std::int64_t slot) override;

 private:
  std::vector<std::vector<std::size_t>> arrivals_;
  std::vector<std::vector<std::optional<std::size_t>>> predictions_;
};

}  // namespace poscad
