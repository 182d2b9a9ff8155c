#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dek/rng.hpp"

namespace dek::de {

enum class Mutation {
  rand1,  // v = x_r1 + F (x_r2 - x_r3)
  best1,  // v = x_best + F (x_r2 - x_r3)
};

struct Bounds {
  double low = 0.0;
  double high = 1.0;
};

/// Defaults are the DEK control parameters: Np = 60, F = 0.7, Cr = 0.8, 1500 generations.
struct DEConfig {
  std::size_t population = 60;
  double scale = 0.7;      // F
  double crossover = 0.8;  // Cr
  std::size_t max_generations = 1500;
  /// One interval per dimension, or a single interval applied to every dimension.
  std::vector<Bounds> bounds{Bounds{0.0, 1.0}};
  std::uint64_t seed = 0;
  Mutation mutation = Mutation::rand1;
  /// Threads used to evaluate the trial vectors of one generation.
  std::size_t eval_jobs = 1;
};

using Objective = std::function<double(std::span<const double>)>;

struct DEState {
  std::vector<std::vector<double>> population;
  std::vector<double> values;
  std::size_t generation = 0;
  std::vector<double> best;
  double best_value = 0.0;
  std::vector<Bounds> bounds;  // expanded to one entry per dimension
  Rng rng{0};

  std::size_t dimension() const noexcept { return bounds.size(); }
};

/// Draws recorded by crossover() when a trace sink is supplied.
struct CrossoverTrace {
  std::size_t j_rand = 0;
  std::vector<double> draws;  // rand_j for every coordinate, in order
};

/// Validates the configuration against a dimension and expands the bounds.
std::vector<Bounds> resolve_bounds(const DEConfig& cfg, std::size_t dim);

/// Samples Np vectors uniformly inside the bounds and evaluates them.
/// Generation starts at 1. Throws InvalidConfig or ObjectiveNonFinite.
DEState initialize(const DEConfig& cfg, std::size_t dim, const Objective& objective);

/// base + F (a - b), clamped per coordinate into the bounds.
std::vector<double> mutant_vector(std::span<const double> base, std::span<const double> a, std::span<const double> b,
                                  double scale, std::span<const Bounds> bounds);

/// Draws r1, r2, r3 (mutually distinct and distinct from i) from the state's
/// generator and forms the mutant for slot i.
std::vector<double> mutate(DEState& state, std::size_t i, double scale, Mutation strategy = Mutation::rand1);

/// Binomial crossover. Draw order: j_rand first, then one uniform per coordinate.
std::vector<double> crossover(std::span<const double> target, std::span<const double> mutant, double cr, Rng& rng,
                              CrossoverTrace* trace = nullptr);

/// One synchronous generation: build every trial from the current population,
/// evaluate them, then let each trial replace its target iff f(trial) <= f(target).
void select_and_step(DEState& state, const DEConfig& cfg, const Objective& objective);

struct DEResult {
  std::vector<double> best;
  double best_value = 0.0;
  std::vector<double> history;  // best-so-far after each generation
};

/// Runs exactly cfg.max_generations generations. The optional observer sees
/// the state after each generation.
DEResult run(const DEConfig& cfg, std::size_t dim, const Objective& objective,
             const std::function<void(const DEState&)>& observer = {});

}  // namespace dek::de
