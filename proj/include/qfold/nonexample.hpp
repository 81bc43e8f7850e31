#pragma once

#include <string>
#include <vector>

namespace qfold::nonexample {

// The flat field: h(x) = exp(-1/x^2) for x != 0, h(0) = 0. Smooth, flat at
// 0, positive elsewhere; generates a complete flow.
double flat_field(double x);

// Displacement of the time-t flow of h: delta with psi_t(x) = x + delta.
// Computed directly as a displacement so the flat zone keeps full relative
// precision. Adaptive embedded Runge-Kutta (Fehlberg 4(5)).
double flow_displacement(double x, double t, double accuracy);

// Time-one flow psi and its inverse (time minus-one flow).
double flow_psi(double x, double accuracy);
double flow_psi_inverse(double x, double accuracy);

// Hybrid map: psi on x >= 0, psi^{-1} on x < 0.
double psi_hat(double x, double accuracy);

// k-th iterate of psi (negative k iterates the inverse).
double psi_pow(double x, int k, double accuracy);
double psi_hat_pow(double x, int k, double accuracy);

// Independent oracle: fixed-step classical RK4 displacement with `steps`
// subdivisions, for cross-checking the adaptive integrator.
double flow_displacement_rk4(double x, double t, int steps);

struct JetCheck {
  int order;
  double estimate;
  double tolerance;
  bool pass;
};

struct JetReport {
  std::vector<JetCheck> checks;
  // Direct flat bound |psi(x) - x| <= exp(-1/x^2) verified at sample points.
  bool envelope_pass;
  double envelope_worst_ratio;
  bool pass;
};

// Central finite-difference jets of psi - id at 0; all must vanish within a
// tolerance combining integrator accuracy and the flat envelope on the
// stencil.
JetReport jet_flatness_check(int order, double scale, double accuracy);

struct OrbitCoincidenceReport {
  double max_discrepancy;
  bool pass;
  double tolerance;
};

// The Z-actions generated by psi and psi-hat have the same orbits; verify
// {psi-hat^k(x)} against {psi^{sign(x) |k|}(x)} for |k| <= k_range.
OrbitCoincidenceReport orbit_coincidence(const std::vector<double>& samples, int k_range,
                                         double accuracy, double tolerance = 1e-9);

struct CandidateResidual {
  int k;
  double residual_total;     // max-norm over the whole interval
  double residual_positive;  // over x >= 0 samples
  double residual_negative;  // over x < 0 samples
};

struct RecoveryFailureReport {
  std::vector<CandidateResidual> candidates;
  int best_k;
  double best_residual;
  bool matched;          // expected false: no single psi^k fits psi-hat
  double one_sided_best;  // best candidate's residual on its good side
  std::vector<double> jet_spread;  // per order: max spread of psi^k jets at 0
  std::string summary;
};

// Why this flow quotient escapes the affine recovery machinery: psi-hat agrees
// with psi^1 on the right and psi^{-1} on the left of 0 but with no single
// candidate on the whole connected interval, while all candidates share the
// jet of the identity at 0. Evidence, not proof; labeled as such.
RecoveryFailureReport recovery_failure_demo(double a, double b, int k_bound, double accuracy,
                                            double match_tolerance = 1e-3, int grid = 41);

}  // namespace qfold::nonexample
