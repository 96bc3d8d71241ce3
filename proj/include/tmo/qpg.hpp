#pragma once

#include <cstddef>
#include <vector>

#include "tmo/pdc.hpp"

namespace tmo {

/// F(w_in, w_out) = alpha(w_out - w_in) * phi; rows are input, columns output.
/// Throws PreconditionError for non-SFG processes.
JointAmplitude build_transfer(const Process& process, const Phasematching& pm, const PumpSpec& pump,
                              const FrequencyGrid& grid);

/// Input modes A_k in modes_a, output modes C_k in modes_b.
SchmidtData operation_schmidt(const JointAmplitude& transfer);

/// eta_k = sin^2(sqrt(lambda_k) theta).
std::vector<double> low_gain_efficiencies(const RVector& weights, double theta);
std::vector<double> low_gain_efficiencies(const std::vector<double>& weights, double theta);

/// S = eta_0^2 / sum eta_k; 0 when every eta vanishes.
double selectivity(const std::vector<double>& eta);
/// sigma_j = eta_j / sum_{k=0}^{d} eta_k. Throws PreconditionError unless j < d < size.
double separability(const std::vector<double>& eta, std::size_t j, std::size_t d);

struct ExtinctionRatio {
  double db = 0.0;
  bool infinite = false;  // every other mode has zero efficiency
};
ExtinctionRatio extinction_ratio(const std::vector<double>& eta, std::size_t j);

/// Input (a) and converted (c) field operators after the crystal:
///   a_out = G_aa a + G_ac c,  c_out = G_ca a + G_cc c.
/// Matrices act on grid samples; the block operator is unitary.
struct GreensFunctions {
  enum class Gauge { kFrequency, kTime };
  CMatrix aa;
  CMatrix ac;  // empty when only input columns were propagated
  CMatrix ca;
  CMatrix cc;  // empty when only input columns were propagated
  FrequencyGrid grid;
  Gauge gauge = Gauge::kFrequency;
  double theta = 0.0;
  double kappa = 0.0;  // coupling per unit |pump| per metre

  bool complete() const { return ac.size() > 0 && cc.size() > 0; }
  CMatrix block() const;
  /// ||G^dagger G - I||_F over the propagated columns.
  double unitarity_error() const;
  /// eta_k from the singular values of G_ca, descending.
  std::vector<double> efficiencies() const;
  /// Unitary DFT to the time domain.
  GreensFunctions to_time_gauge() const;
};

struct HeisenbergOptions {
  std::size_t z_steps = 200;
  bool inputs_only = false;           // propagate only a-impulses (G_aa, G_ca)
  double unitarity_tolerance = 1e-4;  // ConvergenceError above this
  double max_step_angle = 0.5;        // rad of rotation per step before ConvergenceError
};

/// Coupling profile implied by the phasematching model: uniform over [0, L] for sinc,
/// Gaussian with rms L sqrt(gamma / 2) over +-4 rms for the Gaussian model.
struct CouplingProfile {
  double z0 = 0.0;
  double z1 = 0.0;
  double rms = 0.0;  // 0 for uniform
  double weight(double z) const;
  static CouplingProfile for_model(const Process& process, const Phasematching& pm);
};

/// First-order G_ca of the discretised propagation for coupling `kappa`.
CMatrix first_order_transfer(const Process& process, const Phasematching& pm, const PumpSpec& pump,
                             const FrequencyGrid& grid, std::size_t z_steps, double kappa);

/// Split-step solution of the undepleted-pump coupled-mode equations in the pump frame.
/// theta is set by scaling kappa so that ||first-order G_ca||_F = theta; a separable
/// process then converts sin^2(theta).
GreensFunctions solve_heisenberg(const Process& process, const Phasematching& pm, const PumpSpec& pump,
                                 double theta, const FrequencyGrid& grid,
                                 const HeisenbergOptions& options = {});

struct SweepSample {
  double theta = 0.0;
  double pump_energy_rel = 0.0;  // theta^2 / (pi/2)^2
  double eta0 = 0.0;
  double selectivity = 0.0;
  double separability0 = 0.0;
  std::vector<double> eta;
};

std::vector<SweepSample> saturation_sweep(const Process& process, const Phasematching& pm,
                                          const PumpSpec& pump, const std::vector<double>& thetas,
                                          const FrequencyGrid& grid, const HeisenbergOptions& options = {});

/// theta at which the dominant mode converts `target` (secant search on propagated solutions).
double theta_for_efficiency(const Process& process, const Phasematching& pm, const PumpSpec& pump,
                            const FrequencyGrid& grid, double target,
                            const HeisenbergOptions& options = {});

/// stage . diag(I, e^{i phase} I) . stage. Throws PreconditionError unless the stage is
/// complete and its eta_0 lies in [0.45, 0.55].
GreensFunctions tmi_compose(const GreensFunctions& stage, double phase);

struct TmiScan {
  double best_phase = 0.0;
  double best_selectivity = 0.0;
  double best_eta0 = 0.0;
  double destructive_phase = 0.0;
  double destructive_eta0 = 0.0;
  std::vector<double> phases;
  std::vector<double> eta0;
  std::vector<double> selectivity;
};

/// Scans the interstage phase over [0, 2 pi) and refines the selectivity maximum.
TmiScan optimize_tmi(const GreensFunctions& stage, std::size_t samples = 72);

}  // namespace tmo
