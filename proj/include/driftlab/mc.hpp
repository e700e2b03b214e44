#pragma once

// Finite-N Monte Carlo training runs: winner-takes-all prototype updates on
// the drifting mixture, and stochastic gradient descent on the student
// network under teacher drift. Runs are independent streams of a shared
// counter-based generator; aggregation is ordered by run index, so results
// are bit-identical for a given config regardless of thread scheduling.

#include <cstdint>
#include <string>
#include <vector>

#include "driftlab/lvq.hpp"
#include "driftlab/rng.hpp"
#include "driftlab/scm.hpp"
#include "driftlab/state.hpp"

namespace driftlab {

struct SimConfig {
  enum class System { Lvq, Scm };

  System system = System::Lvq;
  int n = 100;          // input dimension
  double eta = 1.0;
  double gamma = 0.0;

  // mixture geometry and prior schedule (Lvq)
  double lambda = 1.0;
  double v1 = 0.4;
  double v2 = 0.4;
  PriorSchedule schedule = PriorSchedule::constant(0.5);

  // teacher drift (Scm); per-step strength, overlap factor 1 - delta/n
  Activation activation = Activation::Erf;
  double delta = 0.0;

  int runs = 10;
  long steps = 0;
  std::uint64_t seed = 1;
  int sample_every = 1;

  OrderParameterState init;

  void validate() const;
};

/// Adaptive vectors (prototypes or student weights) plus characteristic
/// vectors (cluster centers or teachers), kept exactly orthonormal.
struct VectorState {
  int n = 0;
  std::vector<double> w1, w2, b1, b2;
};

/// Builds vectors that realize the target order parameters exactly, using a
/// seeded random orthonormal frame {B1, B2, e3, e4}.
VectorState init_vectors(SimConfig::System system, int n, const OrderParameterState& target,
                         std::uint64_t seed, std::uint64_t stream = 0);

struct Sample {
  std::vector<double> xi;
  int label = 0;      // cluster index 1/2 (Lvq)
  double target = 0;  // teacher output (Scm)
};

/// Draws one training example: a mixture sample with its cluster label, or an
/// isotropic input with its teacher output.
Sample sample_input(SimConfig::System system, Activation activation, double p1,
                    double lambda, double v1, double v2, const VectorState& state,
                    Philox& rng);

/// One training update at learning rate eta with decay gamma. Distance ties in
/// the winner rule resolve to prototype 1.
void train_step(SimConfig::System system, Activation activation, VectorState& state,
                const Sample& sample, double eta, double gamma);

/// Diffusive displacement of both teachers with per-step overlap 1 - delta/n,
/// followed by symmetric re-orthonormalization.
void drift_teachers(VectorState& state, double delta, Philox& rng);

/// The seven inner products of the current vectors.
OrderParameterState measure(const VectorState& state);

struct McResult {
  std::vector<double> times;          // alpha (Lvq) or rescaled time (Scm)
  std::vector<std::string> columns;   // R11..Q22 then observables
  std::vector<std::vector<double>> mean;  // [sample][column]
  std::vector<std::vector<double>> sem;

  /// Mean order parameters at the sample closest to t.
  OrderParameterState state_at(double t) const;
};

/// Runs `runs` independent simulations and returns mean and standard error of
/// every column on the shared sample grid.
McResult run(const SimConfig& config);

}  // namespace driftlab
