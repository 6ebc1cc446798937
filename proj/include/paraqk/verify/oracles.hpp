#pragma once

#include <functional>
#include <span>

#include "paraqk/epsnum/eigen_support.hpp"
#include "paraqk/epsnum/finite_diff.hpp"
#include "paraqk/sk/prepotential.hpp"

namespace paraqk::verify {

/// Jets of a field in the identity chart expanded at x, to the given order.
using JetField = std::function<JetMat(std::span<const double> x, int order)>;

/// Coordinate jets of the identity chart at x.
std::vector<RJet> identity_jets(std::span<const double> x, int order);

/// Worst relative disagreement between the partials of degree 1..max_degree
/// of a jet-valued field and Richardson finite differences of its values.
/// Each degree is normalized by its largest finite-difference entry floored
/// at 1, so vanishing derivatives are compared absolutely. When `mixed` is
/// false only pure partials are compared above degree one.
double jet_fd_residual(const JetField& jets, const MatrixField& values, std::span<const double> x, int max_degree,
                       bool mixed = true);

/// Same comparison for a prepotential: every d^alpha F with 1 <= |alpha| <= 4
/// against finite differences in the real parts of X^I (holomorphy makes
/// these the complex derivatives).
double prepotential_fd_residual(const sk::Prepotential& f, std::span<const EpsComplex> x, int max_degree = 4);

}  // namespace paraqk::verify
