#include "dek/de_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dek/error.hpp"
#include "dek/parallel.hpp"

namespace dek::de {
namespace {

double checked(double value) {
  if (!std::isfinite(value)) throw Error(ErrorCode::ObjectiveNonFinite, "objective returned " + std::to_string(value));
  return value;
}

void update_best(DEState& state) {
  for (std::size_t i = 0; i < state.values.size(); ++i)
    if (state.values[i] < state.best_value) {
      state.best_value = state.values[i];
      state.best = state.population[i];
    }
}

}  // namespace

std::vector<Bounds> resolve_bounds(const DEConfig& cfg, std::size_t dim) {
  if (dim == 0) throw Error(ErrorCode::InvalidConfig, "dimension must be at least 1");
  if (cfg.population < 4)
    throw Error(ErrorCode::InvalidConfig, "population must be at least 4, got " + std::to_string(cfg.population));
  if (cfg.max_generations < 1) throw Error(ErrorCode::InvalidConfig, "max_generations must be at least 1");
  if (!(cfg.scale >= 0.0 && cfg.scale <= 1.0)) throw Error(ErrorCode::InvalidConfig, "F must lie in [0, 1]");
  if (!(cfg.crossover >= 0.0 && cfg.crossover <= 1.0)) throw Error(ErrorCode::InvalidConfig, "Cr must lie in [0, 1]");
  std::vector<Bounds> out;
  if (cfg.bounds.size() == 1)
    out.assign(dim, cfg.bounds.front());
  else if (cfg.bounds.size() == dim)
    out = cfg.bounds;
  else
    throw Error(ErrorCode::InvalidConfig, "expected 1 or " + std::to_string(dim) + " bounds, got " +
                                              std::to_string(cfg.bounds.size()));
  for (const Bounds& b : out)
    if (!(std::isfinite(b.low) && std::isfinite(b.high) && b.low <= b.high))
      throw Error(ErrorCode::InvalidConfig, "each bound needs finite low <= high");
  return out;
}

DEState initialize(const DEConfig& cfg, std::size_t dim, const Objective& objective) {
  DEState state;
  state.bounds = resolve_bounds(cfg, dim);
  state.rng = Rng(cfg.seed);
  state.population.assign(cfg.population, std::vector<double>(dim));
  for (auto& x : state.population)
    for (std::size_t j = 0; j < dim; ++j) x[j] = state.rng.uniform(state.bounds[j].low, state.bounds[j].high);

  state.values.resize(cfg.population);
  parallel_for(cfg.population, cfg.eval_jobs,
               [&](std::size_t i) { state.values[i] = checked(objective(state.population[i])); });

  state.generation = 1;
  state.best = state.population.front();
  state.best_value = state.values.front();
  update_best(state);
  return state;
}

std::vector<double> mutant_vector(std::span<const double> base, std::span<const double> a, std::span<const double> b,
                                  double scale, std::span<const Bounds> bounds) {
  std::vector<double> v(base.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::clamp(base[j] + scale * (a[j] - b[j]), bounds[j].low, bounds[j].high);
  return v;
}

std::vector<double> mutate(DEState& state, std::size_t i, double scale, Mutation strategy) {
  const std::size_t np = state.population.size();
  std::size_t r1 = 0, r2 = 0, r3 = 0;
  do r1 = state.rng.index(np); while (r1 == i);
  do r2 = state.rng.index(np); while (r2 == i || r2 == r1);
  do r3 = state.rng.index(np); while (r3 == i || r3 == r1 || r3 == r2);
  const auto& base = strategy == Mutation::best1 ? state.best : state.population[r1];
  return mutant_vector(base, state.population[r2], state.population[r3], scale, state.bounds);
}

std::vector<double> crossover(std::span<const double> target, std::span<const double> mutant, double cr, Rng& rng,
                              CrossoverTrace* trace) {
  const std::size_t dim = target.size();
  std::vector<double> u(target.begin(), target.end());
  const std::size_t j_rand = rng.index(dim);
  if (trace) {
    trace->j_rand = j_rand;
    trace->draws.clear();
  }
  for (std::size_t j = 0; j < dim; ++j) {
    const double r = rng.uniform01();
    if (trace) trace->draws.push_back(r);
    if (r <= cr || j == j_rand) u[j] = mutant[j];
  }
  return u;
}

void select_and_step(DEState& state, const DEConfig& cfg, const Objective& objective) {
  const std::size_t np = state.population.size();
  std::vector<std::vector<double>> trials(np);
  for (std::size_t i = 0; i < np; ++i) {
    const auto mutant = mutate(state, i, cfg.scale, cfg.mutation);
    trials[i] = crossover(state.population[i], mutant, cfg.crossover, state.rng);
  }

  std::vector<double> trial_values(np);
  parallel_for(np, cfg.eval_jobs, [&](std::size_t i) { trial_values[i] = checked(objective(trials[i])); });

  for (std::size_t i = 0; i < np; ++i)
    if (trial_values[i] <= state.values[i]) {
      state.population[i] = std::move(trials[i]);
      state.values[i] = trial_values[i];
    }
  update_best(state);
  ++state.generation;
}

DEResult run(const DEConfig& cfg, std::size_t dim, const Objective& objective,
             const std::function<void(const DEState&)>& observer) {
  DEState state = initialize(cfg, dim, objective);
  DEResult result;
  result.history.reserve(cfg.max_generations);
  for (std::size_t g = 0; g < cfg.max_generations; ++g) {
    select_and_step(state, cfg, objective);
    result.history.push_back(state.best_value);
    if (observer) observer(state);
  }
  result.best = std::move(state.best);
  result.best_value = state.best_value;
  return result;
}

}  // namespace dek::de
