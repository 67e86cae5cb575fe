#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "rcgap/graph.hpp"
#include "rcgap/measures.hpp"

namespace rcgap {

/// Deterministic 64-bit generator used by all samplers. mt19937_64 is fully
/// specified by the standard, and the uniform mappings below avoid the
/// implementation-defined std distributions, so a fixed seed reproduces the
/// same trajectory on every platform.
class Rng {
 public:
  static constexpr const char* kName = "mt19937_64";
  static constexpr int kVersion = 1;

  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform double in [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 eng_;
};

enum class Dynamics { sw, sw_potts, hb, sb };

Dynamics dynamics_from_string(const std::string& s);
std::string to_string(Dynamics d);

/// Mutable chain state: RC chains use the edge bit array, the Potts-side SW
/// chain uses the spin array.
struct ChainState {
  std::vector<std::uint8_t> edge_in;
  std::vector<int> spins;  // 1..q
  long step = 0;
};

ChainState initial_state(const Graph& g, Dynamics d);

/// One Swendsen-Wang step on the RC state: color components uniformly, keep
/// each monochromatic edge independently with probability p.
void sw_step(const Graph& g, const ModelParams& params, ChainState& state, Rng& rng);

/// SW for the Potts model: sample A from the monochromatic edges, recolor
/// components uniformly.
void sw_potts_step(const Graph& g, const ModelParams& params, ChainState& state, Rng& rng);

/// Lazy heat-bath single-edge update (connectivity in A\e).
void hb_step(const Graph& g, const ModelParams& params, ChainState& state, Rng& rng);

/// Non-lazy single-bond update (connectivity in A).
void sb_step(const Graph& g, const ModelParams& params, ChainState& state, Rng& rng);

struct RunSpec {
  std::string graph_spec;
  ModelParams params;
  Dynamics dynamics = Dynamics::sw;
  long steps = 1;
  long burnin = 0;
  std::uint64_t seed = 0;
  long thin = 1;
};

struct ObservableRecord {
  long step;
  int edges;       // |A|, or |E(sigma)| for the Potts-side chain
  int components;  // c(A)
  int largest;     // largest component size
  double magnetization;  // Potts-side only
};

struct ChainTrace {
  std::vector<ObservableRecord> records;
  bool potts_side = false;
};

ChainTrace run_chain(const Graph& g, const RunSpec& spec);

/// CSV emission with the reproducibility header:
///   # generator=<name> version=<v> seed=<s>
///   step,edges,components,largest[,magnetization]
/// Floats are printed with 17 significant digits.
std::string chain_trace_csv(const ChainTrace& trace, const RunSpec& spec);

struct AutocorrResult {
  double tau_int = 0.5;
  int window = 0;
  bool zero_variance = false;
};

/// Integrated autocorrelation time with the self-consistent window
/// (smallest W >= 5 * tau_int(W)). Requires at least 100 samples.
AutocorrResult autocorrelation(std::span<const double> series);

/// Empirical one-step distribution from a fixed start state: `samples`
/// single-step draws, returned as frequencies over the 2^m (RC) or q^n
/// (Potts-side) state space. Exact-space sizes must be small.
std::vector<double> empirical_row(const Graph& g, const ModelParams& params, Dynamics d,
                                  std::uint64_t start_state, long samples, std::uint64_t seed);

/// Occupation frequencies over the exact state space after running the chain.
std::vector<double> occupation_histogram(const Graph& g, const ModelParams& params, Dynamics d,
                                         long steps, std::uint64_t seed);

/// Total variation distance between two distributions of equal length.
double total_variation(std::span<const double> a, std::span<const double> b);

}  // namespace rcgap
