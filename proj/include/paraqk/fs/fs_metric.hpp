#pragma once

#include <span>
#include <vector>

#include "paraqk/geom/chart.hpp"
#include "paraqk/sk/prepotential.hpp"

namespace paraqk::fs {

/// Point in the coordinates (rho, phi~, z^mu, zeta~_I, zeta^I).
struct FsPoint {
  double rho = 0.0;
  double phi = 0.0;
  std::vector<EpsComplex> z;  // z^1..z^n
  std::vector<double> zeta_t;
  std::vector<double> zeta;
  double c = 0.0;
};

/// Real chart (rho, phi, a^mu, b^mu, zeta~_I, zeta^I) with z^mu = a^mu + i b^mu.
geom::Chart fs_chart(int n);
std::vector<double> fs_coordinates(const FsPoint& p);
FsPoint fs_point(std::span<const double> y, int eps1, double c);

/// Throws DomainError naming the violated inequality when rho is outside
/// both domains or rho + c <= 0.
void check_domain(double rho, double c);

/// The deformed Ferrara-Sabharwal metric as jets in fs_chart; c may itself be
/// a jet (for derivatives in the deformation parameter).
JetMat fs_metric_jets(const sk::Prepotential& f, int eps2, const RJet& c, std::span<const RJet> y);

/// Components of the five summands at a point (their sum is fs_eval).
struct FsTerms {
  std::array<Eigen::MatrixXd, 5> terms;
};
FsTerms fs_terms(const sk::Prepotential& f, int eps2, const FsPoint& p);

Eigen::MatrixXd fs_eval(const sk::Prepotential& f, int eps2, const FsPoint& p);

/// c = 0 form written without any deformation terms.
Eigen::MatrixXd fs_undeformed(const sk::Prepotential& f, int eps2, const FsPoint& p);

/// Chart of M' = {Im X^0 = 0} inside P: (x^I, v^1..v^n, qhat^a, s).
geom::Chart slice_chart(int n);

/// M' -> FS coordinates: rho = 2H - c, phi~ = 4 eps2 s, z = X^mu / X^0,
/// (zeta~, zeta) = 2 Omega qhat. Works on jets.
JetVec coordinate_map_jets(const sk::Prepotential& f, int eps2, double c, std::span<const RJet> m);
FsPoint coordinate_map(const sk::Prepotential& f, int eps2, double c, std::span<const double> m);
/// Inverse: X^I = r e^{K/2} z^I with r^2 = rho + c.
std::vector<double> coordinate_map_inverse(const sk::Prepotential& f, int eps2, const FsPoint& p);

/// Inserts v^0 = 0 into a slice point, giving a point of P in the c-map chart.
std::vector<double> slice_to_bundle(int n, std::span<const double> m);

struct FsChecks {
  double equivalence = 0.0;    // g' - (eps1 sigma / 2) phi* g_FS, relative
  double factor = 0.0;         // eps1 sigma / 2
  double symmetry = 0.0;
  double round_trip = 0.0;
  double rho_identity = 0.0;   // rho + c - 2H
  double dck_pullback = 0.0;   // phi* d^c K + (2 eps1 / H) q Omega dq
  double c0_reduction = 0.0;   // deformed form at c = 0 vs the undeformed one
  double c_derivative = 0.0;   // jet d/dc vs Richardson finite differences, relative
};
FsChecks fs_checks(const sk::Prepotential& f, int eps2, double c, std::span<const double> m);

/// nu of g_FS at a point (curvature of the order-2 metric jet).
double fs_nu(const sk::Prepotential& f, int eps2, const FsPoint& p);

}  // namespace paraqk::fs
