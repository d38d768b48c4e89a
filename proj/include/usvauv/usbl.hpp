#pragma once

// USBL measurement model: phase differences across a two-axis hydrophone
// array plus a slant range from two-way travel time.

#include <random>
#include <vector>

namespace usvauv::usbl {

struct UsblConfig {
  double freq = 12000.0;       // carrier (Hz), one per AUV
  double spacing_d = 0.033;    // hydrophone element spacing (m)
  double sound_speed_c = 1500.0;
  double sigma_phase = 0.05;   // rad
  double sigma_range = 0.3;    // m
  // Optional sea-state coupling: sigma_phase * (1 + kappa * |wave velocity|).
  double kappa = 0.0;

  // 2 pi f d / c: phase per unit direction cosine, and the bound on |dphi|.
  double phase_gain() const;
  void validate() const;
};

// Default carriers for AUVs 1..4 (12/14/16/18 kHz); beyond four the ladder
// continues in 2 kHz steps.
double default_frequency(int auv_index);
// AUV k gets base.freq + 2 kHz * k.
std::vector<UsblConfig> per_auv_configs(const UsblConfig& base, int n_auv);

struct UsvState {
  double x = 0.0;
  double y = 0.0;
  double eta = 0.0;  // surface displacement the USV rides on (m)
};

struct AuvTruth {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;  // depth below mean surface, positive down
};

struct UsblMeasurement {
  double dphi_x = 0.0;
  double dphi_y = 0.0;
  double slant = 0.0;
};

struct PositionEstimate {
  double x_hat = 0.0;
  double y_hat = 0.0;
  double error = 0.0;
  // Set when a phase exceeds the 2 pi f d / c bound (noise-driven).
  bool inconsistent = false;
};

// Vertical separation used by the measurement geometry: z + USV heave.
inline double effective_depth(const UsvState& usv, const AuvTruth& auv) { return auv.z + usv.eta; }

// Noise-free (dphi_x, dphi_y, slant). Throws DegenerateGeometry when S = 0.
UsblMeasurement true_phases(const UsvState& usv, const AuvTruth& auv, const UsblConfig& cfg);

// true_phases plus N(0, sigma_phase^2) per phase and N(0, sigma_range^2) on
// the slant. `wave_speed` scales sigma_phase when cfg.kappa > 0.
UsblMeasurement measure(const UsvState& usv, const AuvTruth& auv, const UsblConfig& cfg,
                        std::mt19937_64& rng, double wave_speed = 0.0);

// Inverts the phase model for the AUV's horizontal position.
PositionEstimate localize(const UsblMeasurement& meas, const UsvState& usv,
                          const UsblConfig& cfg);

// Horizontal Euclidean distance.
double positioning_error(const PositionEstimate& est, const AuvTruth& truth);

}  // namespace usvauv::usbl
