#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lspec/metric.hpp"

namespace lspec {

// Interior phase point with compactified bookkeeping.
struct ScPhasePoint {
  Vec x, xi;           // xi is stored with unit Euclidean norm
  double fiber_scale;  // ⟨ξ⟩^{-1} of the covector as given

  ScPhasePoint(const Vec& x, const Vec& xi_raw);
  double rho() const;  // ⟨x⟩^{-1}
  const Vec& fiber_direction() const { return xi; }
};

enum class FlowClass { ReachedLPlus, ReachedLMinus, Escaped, BudgetExhausted };
std::string to_string(FlowClass c);

struct FlowSample {
  double tau = 0.0, rho = 0.0, dist_plus = 0.0, dist_minus = 0.0;
  Vec x, xi;
};

struct FlowOptions {
  double capture = 1e-3;
  double tau_budget = 1e4;
  long max_steps = 100000;
  double tol = 1e-10;
  bool keep_samples = true;
};

struct FlowResult {
  std::vector<FlowSample> samples;
  FlowClass cls = FlowClass::BudgetExhausted;
  double closest_plus = 0.0, closest_minus = 0.0;
  double max_char_defect = 0.0;  // max |p(x, ξ̂)| along the trajectory
  double tau = 0.0;
  long steps = 0;
  Vec x_end, xi_end;
};

// p(x, ξ) = −ξ·g^{-1}ξ
double principal_symbol(const MetricField& m, const Vec& x, const Vec& xi);
// distances of (x, ξ̂) to the Minkowski radial sets L_±
void radial_distances(const Vec& x, const Vec& xi, double& d_plus, double& d_minus);

// Rescaled Hamilton flow ⟨x⟩|ξ|^{-1} H_p, direction = +1 or −1.
FlowResult hamilton_step(const MetricField& m, const ScPhasePoint& p, int direction,
                         const FlowOptions& opt = {});

// random characteristic covector over x
ScPhasePoint random_characteristic(const MetricField& m, const Vec& x, std::uint64_t seed);

struct TrajectoryRecord {
  Vec x, xi;
  FlowClass forward = FlowClass::BudgetExhausted, backward = FlowClass::BudgetExhausted;
  double closest_forward = 0.0, closest_backward = 0.0;
  double char_defect = 0.0;
  std::string error;  // per-trajectory failure, empty if none
};

struct NontrappingReport {
  int samples = 0;
  int classified = 0;  // L_− → L_+ or L_+ → L_−
  int minus_to_plus = 0, plus_to_minus = 0, escaped = 0, exhausted = 0, failed = 0;
  double worst_closest = 0.0;
  bool reversal_swaps = true;
  bool pass = true;
  std::vector<TrajectoryRecord> trajectories;
  double fraction() const { return samples ? double(classified) / samples : 1.0; }
};

// Samples x uniformly in [−region, region]^n with random null covectors.
NontrappingReport nontrapping_certificate(const MetricField& m, int count, std::uint64_t seed = 12,
                                          double region = 2.0, const FlowOptions& opt = {});

}  // namespace lspec
