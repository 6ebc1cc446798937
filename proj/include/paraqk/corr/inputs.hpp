#pragma once

#include "paraqk/corr/correspondence.hpp"
#include "paraqk/sk/prepotential.hpp"

namespace paraqk::corr {

/// Rigid c-map with f = -eps1 (2H - c), eta = ds - eps2 qhat Omega dqhat + q Omega dq,
/// on the chart (x, v, qhat) of cmap::cmap_chart. The prepotential is copied.
CorrespondenceInput cmap_input(const sk::Prepotential& f, int eps2, double c);

/// {phi = 0}: Im X^0 = 0.
Slice cmap_slice(int n);

/// Flat model on R^4 = (x, y, u, v), z = x + i y, w = u - i v, with
/// f = eps1 eps2 |w|^2 + shift.
CorrespondenceInput flat_model(int eps1, int eps2, double shift = 0.0);

struct FlatModelChecks {
  double lie_omega_plus = 0.0;   // L_Z omega_+ + 2 eps1 i omega_+
  double eta_curvature = 0.0;    // d eta_0 - (omega_1 - d(i_Z g)/2)
  double f1_relation = 0.0;      // f1 + f (unshifted)
  double z_formula = 0.0;        // omega_1(Z, .) + df
};
FlatModelChecks flat_model_checks(int eps1, int eps2, std::span<const double> pt);

}  // namespace paraqk::corr
