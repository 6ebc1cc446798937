#include "paraqk/corr/inputs.hpp"

#include <memory>

#include "paraqk/cmap/rigid_cmap.hpp"
#include "paraqk/geom/forms.hpp"
#include "paraqk/geom/tensor_ops.hpp"

namespace paraqk::corr {

CorrespondenceInput cmap_input(const sk::Prepotential& f, int eps2, double c) {
  auto fp = std::make_shared<const sk::Prepotential>(f);
  CorrespondenceInput in;
  in.name = "cmap:" + f.name();
  in.eps1 = f.eps1();
  in.eps2 = eps2;
  in.base_chart = cmap::cmap_chart(f.n());
  in.max_order = 3;
  in.base = [fp, eps2, c](std::span<const RJet> u) {
    const auto cj = cmap::cmap_jets(*fp, eps2, u);
    const int k = fp->n() + 1;
    const int e1 = fp->eps1();
    BaseJets b;
    b.g = cj.g;
    b.j = cj.j;
    b.omega = cj.omega;
    b.z = cj.z;
    b.f = -e1 * (2.0 * cj.cask.h - c);
    // eta_M = -eps2 qhat Omega dqhat + q Omega dq in (q, qhat), then to u.
    const JetMat om = to_jets(cmap::symplectic(k));
    JetVec qh(2 * k);
    for (int a = 0; a < 2 * k; ++a) qh(a) = u[static_cast<std::size_t>(2 * k + a)];
    const JetVec eq = om * cj.cask.q;
    const JetVec eh = om * qh;
    JetVec etaq(4 * k);
    for (int a = 0; a < 2 * k; ++a) {
      etaq(a) = -1.0 * eq(a);
      etaq(2 * k + a) = static_cast<double>(eps2) * eh(a);
    }
    b.eta = cj.t.transpose() * etaq;
    return b;
  };
  return in;
}

Slice cmap_slice(int n) { return Slice{n + 1, 0.0}; }

CorrespondenceInput flat_model(int eps1, int eps2, double shift) {
  CorrespondenceInput in;
  in.name = "flat";
  in.eps1 = eps1;
  in.eps2 = eps2;
  in.base_chart = geom::Chart("flat", {"x", "y", "u", "v"});
  in.max_order = 5;
  in.base = [eps1, eps2, shift](std::span<const RJet> p) {
    if (p.size() != 4) throw UsageError("flat_model: expected (x, y, u, v)");
    const double e1 = eps1;
    const double e2 = eps2;
    Eigen::MatrixXd g = Eigen::Vector4d(1.0, -e1, -e2, e1 * e2).asDiagonal();
    Eigen::MatrixXd w1 = Eigen::MatrixXd::Zero(4, 4), w2 = w1, w3 = w1;
    auto put = [](Eigen::MatrixXd& w, int i, int j, double v) {
      w(i, j) += v;
      w(j, i) -= v;
    };
    put(w1, 0, 1, 1.0);  // dx^dy + eps2 du^dv
    put(w1, 2, 3, e2);
    put(w2, 0, 2, 1.0);  // dz ^ dw = (dx^du - eps1 dy^dv) + i (dy^du - dx^dv)
    put(w2, 1, 3, -e1);
    put(w3, 1, 2, 1.0);
    put(w3, 0, 3, -1.0);
    BaseJets b;
    b.g = to_jets(g);
    const std::array<Eigen::MatrixXd, 3> w{w1, w2, w3};
    const int eps[3] = {eps1, eps2, -eps1 * eps2};
    for (std::size_t a = 0; a < 3; ++a) {
      b.omega[a] = to_jets(w[a]);
      b.j[a] = to_jets(geom::endomorphism_from_form(g, w[a], eps[a]));
    }
    const RJet& x = p[0];
    const RJet& y = p[1];
    const RJet& u = p[2];
    const RJet& v = p[3];
    b.f = e1 * e2 * (u * u - e1 * v * v) + shift;
    b.z.resize(4);
    b.z << RJet(0.0), RJet(0.0), 2.0 * v, 2.0 * e1 * u;
    b.eta.resize(4);
    b.eta << -0.5 * y, 0.5 * x, 0.5 * e2 * v, -0.5 * e2 * u;
    return b;
  };
  return in;
}

FlatModelChecks flat_model_checks(int eps1, int eps2, std::span<const double> pt) {
  const auto in = flat_model(eps1, eps2, 0.0);
  const auto u = identity_jets<double>(pt, 1);
  const BaseJets b = in.base(u);
  FlatModelChecks out;
  using geom::Form;
  const Form w2 = Form::two_form(b.omega[1]);
  const Form w3 = Form::two_form(b.omega[2]);
  // L_Z (w2 + i w3) = -2 eps1 i (w2 + i w3): real part -2 w3, imaginary part -2 eps1 w2.
  const Form re = geom::lie_derivative(w2, b.z) + 2.0 * w3;
  const Form im = geom::lie_derivative(w3, b.z) + (2.0 * eps1) * w2;
  out.lie_omega_plus = std::max(re.max_abs(), im.max_abs());
  const JetVec beta = b.g * b.z;
  const Form deta = geom::exterior_derivative(Form::one_form(b.eta));
  const Form dbeta = geom::exterior_derivative(Form::one_form(beta));
  out.eta_curvature = (deta - Form::two_form(b.omega[0]) + 0.5 * dbeta).max_abs();
  RJet gzz(0.0);
  for (int i = 0; i < 4; ++i) gzz += b.z(i) * beta(i);
  out.f1_relation = std::abs((b.f - 0.5 * gzz).value() + b.f.value());
  const JetVec df = geom::differential(b.f);
  const JetVec iz = b.omega[0].transpose() * b.z;
  out.z_formula = geom::max_abs(JetVec(iz + df));
  return out;
}

}  // namespace paraqk::corr
