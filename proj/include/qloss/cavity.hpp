#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>

#include "qloss/core.hpp"

namespace qloss {

/// Dimensionless inputs of the dispersive QND feasibility estimate. The
/// resonant optical density D0 enters either directly or through the
/// geometric-overlap convention D0 = C(w/w0) * sigma0 / (pi w0^2) with the
/// mode waist w0 supplied explicitly; no value is assumed when both are
/// absent, since the cross-section bookkeeping is a modeling choice.
struct CavityParams {
  double finesse = 0;          // f
  double detuning_ratio = 0;   // delta / Gamma
  double wavelength = 0;       // lambda [m]; used only when deriving D0
  double waist_ratio = 1;      // w / w0
  double photon_number = 0;    // N, mean photons in the cavity

  std::optional<double> optical_density;  // D0 given directly
  std::optional<double> mode_waist;       // w0 [m]; sigma = pi w0^2

  double shot_noise_coefficient = 1.0;  // k in delta_phi = k / sqrt(N)

  void validate() const {
    if (!(finesse > 0)) throw ValidationError("finesse must be positive");
    if (detuning_ratio == 0)
      throw SingularityError("resonant drive (detuning 0) is outside the model");
    if (!(photon_number >= 0))
      throw ValidationError("photon number must be nonnegative");
    if (!(waist_ratio > 0))
      throw ValidationError("waist ratio must be positive");
  }
};

/// Gaussian-beam / atom-cylinder overlap C = (pi/4) erf((w/w0)/sqrt(2));
/// strictly increasing in the waist ratio and bounded by pi/4.
inline double geometricFactor(double waist_ratio) {
  if (!(waist_ratio > 0))
    throw DomainError("waist ratio must be positive");
  return (std::numbers::pi / 4.0) * std::erf(waist_ratio / std::numbers::sqrt2);
}

/// Resonant cross section sigma0 = lambda^2 / (2 pi).
inline double resonantCrossSection(double wavelength) {
  if (!(wavelength > 0)) throw DomainError("wavelength must be positive");
  return wavelength * wavelength / (2.0 * std::numbers::pi);
}

/// Resolves D0 from the parameter set; see CavityParams.
inline double opticalDensity(const CavityParams& params) {
  if (params.optical_density) return *params.optical_density;
  if (params.mode_waist) {
    const double sigma =
        std::numbers::pi * (*params.mode_waist) * (*params.mode_waist);
    return geometricFactor(params.waist_ratio) *
           resonantCrossSection(params.wavelength) / sigma;
  }
  throw ValidationError(
      "optical density is underdetermined: give D0 or the mode waist");
}

/// Single-pass phase shift phi_1 = D0 / (4 delta/Gamma).
inline double singlePassPhase(double optical_density, double detuning_ratio) {
  if (detuning_ratio == 0)
    throw SingularityError("resonant drive (detuning 0) is outside the model");
  return optical_density / (4.0 * detuning_ratio);
}

/// Total phase shift phi = f * phi_1 accumulated over the cavity finesse.
inline double totalPhase(const CavityParams& params) {
  params.validate();
  return params.finesse *
         singlePassPhase(opticalDensity(params), params.detuning_ratio);
}

/// Photons scattered by the measured atom, N_sc = N (Gamma/delta)^2 f.
inline double scatteredPhotons(const CavityParams& params) {
  params.validate();
  return params.photon_number * params.finesse /
         (params.detuning_ratio * params.detuning_ratio);
}

/// Shot-noise phase uncertainty delta_phi = k / sqrt(N).
inline double phaseUncertainty(double photon_number, double calibration = 1.0) {
  if (!(photon_number > 0))
    throw DomainError("phase uncertainty needs a positive photon number");
  return calibration / std::sqrt(photon_number);
}

/// The photon-number window (N_min, N_max) implied by 1/f < N_sc < 1, i.e.
/// N in ((delta/Gamma)^2 / f^2, (delta/Gamma)^2 / f). Empty when f <= 1.
inline std::optional<std::pair<double, double>> photonWindow(
    double finesse, double detuning_ratio) {
  if (!(finesse > 0)) throw ValidationError("finesse must be positive");
  if (detuning_ratio == 0)
    throw SingularityError("resonant drive (detuning 0) is outside the model");
  if (finesse <= 1.0) return std::nullopt;
  const double dr2 = detuning_ratio * detuning_ratio;
  return std::make_pair(dr2 / (finesse * finesse), dr2 / finesse);
}

/// Feasibility verdict for one parameter point. condition_i is the
/// simplified shot-noise bound N > (delta/Gamma)^2 / f^2, equivalent to
/// N_sc > 1/f; condition_ii is N_sc < 1. phase_resolvable is the raw
/// comparison phi > delta_phi using the explicit D0 chain; the two
/// detectability predicates coincide only up to the D0 normalization, so
/// both are reported. phi carries no dipole-orientation geometry, i.e. it is
/// defined up to an unmodeled O(1) multiplier.
struct FeasibilityReport {
  double phi = 0;
  double delta_phi = 0;
  double n_sc = 0;
  bool condition_i = false;
  bool condition_ii = false;
  bool phase_resolvable = false;
  std::optional<std::pair<double, double>> photon_window;
};

inline FeasibilityReport feasibility(const CavityParams& params) {
  params.validate();
  FeasibilityReport report;
  report.phi = totalPhase(params);
  report.delta_phi =
      params.photon_number > 0
          ? phaseUncertainty(params.photon_number, params.shot_noise_coefficient)
          : std::numeric_limits<double>::infinity();
  report.n_sc = scatteredPhotons(params);
  const double dr2 = params.detuning_ratio * params.detuning_ratio;
  report.condition_i =
      params.photon_number > dr2 / (params.finesse * params.finesse);
  report.condition_ii = report.n_sc < 1.0;
  report.phase_resolvable = report.phi > report.delta_phi;
  report.photon_window = photonWindow(params.finesse, params.detuning_ratio);
  return report;
}

}  // namespace qloss
