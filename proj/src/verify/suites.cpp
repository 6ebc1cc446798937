#include "paraqk/verify/suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "paraqk/cmap/rigid_cmap.hpp"
#include "paraqk/corr/correspondence.hpp"
#include "paraqk/corr/inputs.hpp"
#include "paraqk/error.hpp"
#include "paraqk/fs/fs_metric.hpp"
#include "paraqk/geom/tensor_ops.hpp"
#include "paraqk/sk/cask.hpp"
#include "paraqk/verify/fixtures.hpp"
#include "paraqk/verify/oracles.hpp"

namespace paraqk::verify {

namespace {

CheckSpec up(std::string id, std::string anchor, double tol) { return {std::move(id), std::move(anchor), tol, Bound::upper}; }
CheckSpec info(std::string id, std::string anchor) { return {std::move(id), std::move(anchor), 0.0, Bound::info}; }

const std::vector<CheckSpec>& table() {
  static const std::vector<CheckSpec> t{
      up("deriv.prepotential", "plumbing: prepotential jets vs finite differences, orders 1-4", 1e-6),
      up("deriv.cmap_metric", "plumbing: rigid c-map metric jets vs finite differences, orders 1-2", 1e-6),
      up("deriv.cmap_structures", "plumbing: J_a, omega_a, Z jets vs finite differences", 1e-6),
      up("deriv.bundle", "plumbing: f, eta, g_P jets vs finite differences", 1e-6),
      up("deriv.qk_metric", "plumbing: g' jets vs finite differences, orders 1-2", 1e-6),
      up("deriv.qk_structures", "plumbing: J'_a, omega'_a jets vs finite differences", 1e-6),
      up("deriv.fs_metric", "plumbing: g_FS jets vs finite differences, orders 1-2", 1e-6),

      up("sk.homogeneity", "F(lambda X) = lambda^2 F(X)", 1e-10),
      up("sk.euler", "X^I F_I = 2F", 1e-10),
      up("sk.hesse_block", "H_ab from N and R equals the Hessian of H", 1e-8),
      up("sk.hesse_inverse", "closed form of H^ab", 1e-10),
      up("sk.conical_decomposition", "g_M = dr^2 - eps1 r^2 eta~^2 - r^2 g_Mbar", 1e-8),
      up("sk.hhat_identity", "-A N^-1 Abar + (2/r^2)|X.A|^2 = -(eps1/2) Hhat(p, p)", 1e-8),
      up("sk.newton_round_trip", "X recovered from q", 1e-10),

      up("cmap.algebra", "rigid c-map: (para-)quaternion algebra", 1e-10),
      up("cmap.omega_consistency", "rigid c-map: omega_a = -eps_a g(J_a., .)", 1e-10),
      up("cmap.closure", "rigid c-map: d omega_a = 0", 1e-7),
      up("cmap.df_omega1", "df = -omega_1(Z, .)", 1e-10),
      up("cmap.lz_g", "L_Z g = 0", 1e-8),
      up("cmap.lz_j1", "L_Z J_1 = 0", 1e-8),
      up("cmap.lz_j2", "L_Z J_2 = 2 eps1 J_3", 1e-8),
      up("cmap.beta", "beta = g(Z, .) = 4 Omega q dq", 1e-10),
      up("cmap.f1_identity", "f1 = f - g(Z, Z)/2", 1e-10),
      up("cmap.cotangent", "hyper-Kahler structure in (q, p)", 1e-10),
      up("cmap.omega_identity", "Omega H Omega = 4 eps1 H^-1", 1e-10),
      up("bundle.lemma1", "d theta_a^P = eps1 eps_a pi* omega_a", 1e-8),
      up("bundle.kernel", "theta_a^P evaluated on Z_1^P", 1e-10),
      up("bundle.eta_norm", "eta(X_P) = 1", 1e-14),
      up("bundle.eta_curvature", "d eta = pi*(omega_1 - d beta/2)", 1e-10),
      up("bundle.vertical_matrices", "J_a on the frame (Z, J_1 Z, J_2 Z, J_3 Z)", 1e-8),

      up("qk.algebra", "J'_a: (para-)quaternion algebra", 1e-8),
      up("qk.projector", "J'_a from (g', omega'_a) equals the projected J_a", 1e-8),
      up("qk.killing", "X is Killing for g'", 1e-8),
      info("qk.condition", "condition number of g'"),
      up("qk.nu", "nu(g') = -4 eps1 sigma", 1e-6),
      up("qk.ricci_w", "W = R - nu R0 is trace free", 1e-6),
      up("qk.q_invariance", "W commutes with J'_a", 1e-6),
      up("qk.riemann_symmetry", "Riemann symmetries and Bianchi identity of g'", 1e-7),
      up("qk.nijenhuis", "J'_1 is integrable", 1e-8),
      {"qk.nijenhuis_control", "twisted J'_1 is not integrable (negative control)", 1e-3, Bound::lower},
      up("qk.domega", "d omega'_a in terms of theta-bar and omega'", 1e-7),
      up("qk.d_omega4", "fundamental four-form is closed", 1e-7),
      up("qk.theta_bar", "theta-bar_2,3 = -+eps2 |f| i_X omega'_3,2 / f", 1e-8),

      up("moment.map", "nabla mu^X = sum_a omega'_a(X, .) J'_a", 1e-6),
      up("moment.lie_x_omega1", "L_X omega'_1 = 0", 1e-7),
      up("moment.lie_x_omega23", "L_X omega'_2,3 = (2 a' omega'_3, 2 eps1 a' omega'_2)", 1e-7),
      up("moment.lie_x_omega_alt", "L_X omega'_2,3 = (-2 eps3 a' omega'_3, -2 a' omega'_2), eps1 = eps2 = -1", 1e-7),
      info("moment.lie_x_omega_alt_other", "L_X omega'_2,3 = (-2 eps3 a' omega'_3, -2 a' omega'_2), other signs"),
      up("moment.fibre_a", "a = 1 / Z_1^P(s) on {s = 0}", 1e-12),

      up("flat.identities", "flat model: L_Z omega_+, d eta, f1, Z", 1e-10),
      up("flat.lemma1", "flat model: d theta_a^P = eps1 eps_a pi* omega_a", 1e-8),
      up("flat.algebra", "flat model: J'_a algebra", 1e-8),
      up("flat.killing", "flat model: X is Killing for g'", 1e-8),
      up("flat.nu", "flat model: nu(g') = -4 eps1 sigma", 1e-6),
      up("flat.ricci_w", "flat model: W is trace free", 1e-6),
      up("flat.q_invariance", "flat model: W commutes with J'_a", 1e-6),
      up("flat.nijenhuis", "flat model: J'_1 is integrable", 1e-8),
      up("flat.moment_map", "flat model: nabla mu^X = sum_a omega'_a(X, .) J'_a", 1e-6),

      up("fs.equivalence", "g' = (eps1 sigma / 2) phi* g_FS on {Im X^0 = 0}", 1e-9),
      info("fs.factor", "eps1 sigma / 2 used in fs.equivalence"),
      up("fs.symmetry", "g_FS is symmetric", 1e-14),
      up("fs.round_trip", "coordinate map and its inverse", 1e-10),
      up("fs.rho_identity", "rho + c = r^2", 1e-12),
      up("fs.dck", "phi* d^c K = -(2 eps1 / H) q Omega dq", 1e-8),
      up("fs.c0_reduction", "g_FS at c = 0 is the undeformed metric", 1e-12),
      up("fs.c_derivative", "d g_FS / dc: jets vs finite differences", 1e-6),
      up("fs.nu", "nu(g_FS) = -2", 1e-6),
  };
  return t;
}

class Sink {
 public:
  Sink(const RunConfig& cfg, ReportBuilder& rb) : cfg_(cfg), rb_(rb) {}

  const CheckSpec& spec(const std::string& id) {
    auto it = specs_.find(id);
    if (it != specs_.end()) return it->second;
    for (CheckSpec s : table()) {
      if (s.id != id) continue;
      if (auto t = cfg_.tolerance_for(id)) s.tol = *t;
      return specs_.emplace(id, s).first->second;
    }
    throw UsageError("unknown check id " + id);
  }
  void put(const std::string& id, double v) { rb_.add(spec(id), v); }
  // Runs body; a library error marks every listed check as failed at this point.
  void guarded(const std::vector<std::string>& ids, const std::function<void()>& body) {
    try {
      body();
    } catch (const Error& e) {
      for (const auto& id : ids) rb_.error(spec(id), e.what());
    }
  }

 private:
  const RunConfig& cfg_;
  ReportBuilder& rb_;
  std::map<std::string, CheckSpec> specs_;
};

std::uint64_t stream_seed(std::uint64_t seed, std::size_t sign_case, std::size_t c_case, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(sign_case), static_cast<std::uint32_t>(c_case), stream};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

struct Sample {
  std::vector<EpsComplex> x;
  std::vector<double> qhat;
  double s = 0.0;

  // Point of P in the c-map chart; Im X^0 = 0 by construction.
  std::vector<double> bundle_point(double s_value) const {
    std::vector<double> p;
    for (const auto& xi : x) p.push_back(xi.re);
    for (const auto& xi : x) p.push_back(xi.im);
    p.insert(p.end(), qhat.begin(), qhat.end());
    p.push_back(s_value);
    return p;
  }
  std::vector<double> bundle_point() const { return bundle_point(s); }
  // Same point in the chart of M' = {Im X^0 = 0}.
  std::vector<double> slice_point() const {
    auto p = bundle_point();
    p.erase(p.begin() + static_cast<std::ptrdiff_t>(x.size()));
    return p;
  }
};

std::vector<double> insert_at(std::span<const double> y, int index, double value) {
  std::vector<double> p(y.begin(), y.end());
  p.insert(p.begin() + index, value);
  return p;
}

// All entries stacked into one column, so blocks of any shape can be compared at once.
JetMat stack(const std::vector<JetMat>& ms) {
  Eigen::Index rows = 0;
  for (const auto& m : ms) rows += m.size();
  JetMat out(rows, 1);
  Eigen::Index at = 0;
  for (const auto& m : ms)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i) out(at++, 0) = m(i, j);
  return out;
}

JetMat column(const JetVec& v) { return JetMat(v); }

JetMat scalar(const RJet& f) {
  JetMat m(1, 1);
  m(0, 0) = f;
  return m;
}

double max_of(std::span<const double> v) { return *std::max_element(v.begin(), v.end()); }

struct Case {
  const RunConfig& cfg;
  Sink& sink;
  sk::Prepotential f;
  int e1, e2;
  double c;
  std::vector<Sample> samples;
  ConicalSampler& sampler;

  bool wants(const std::string& suite) const {
    return std::find(cfg.suites.begin(), cfg.suites.end(), suite) != cfg.suites.end();
  }
  int k() const { return f.n() + 1; }
};

void run_derivatives(Case& cs) {
  const auto in = corr::cmap_input(cs.f, cs.e2, cs.c);
  const auto slice = corr::cmap_slice(cs.f.n());
  const int points = std::min(cs.cfg.derivative_points, static_cast<int>(cs.samples.size()));
  for (int i = 0; i < points; ++i) {
    const Sample& smp = cs.samples[static_cast<std::size_t>(i)];
    cs.sink.guarded({"deriv.prepotential"},
                    [&] { cs.sink.put("deriv.prepotential", prepotential_fd_residual(cs.f, smp.x)); });

    const auto p = smp.bundle_point();
    const std::span<const double> u(p.data(), p.size() - 1);
    cs.sink.guarded({"deriv.cmap_metric", "deriv.cmap_structures"}, [&] {
      const JetField g = [&](std::span<const double> x, int order) {
        return cmap::cmap_jets(cs.f, cs.e2, identity_jets(x, order)).g;
      };
      const MatrixField gv = [&](std::span<const double> x) { return values(g(x, 0)); };
      cs.sink.put("deriv.cmap_metric", jet_fd_residual(g, gv, u, 2));
      const JetField st = [&](std::span<const double> x, int order) {
        const auto cj = cmap::cmap_jets(cs.f, cs.e2, identity_jets(x, order));
        return stack({cj.j[0], cj.j[1], cj.j[2], cj.omega[0], cj.omega[1], cj.omega[2], column(cj.z)});
      };
      const MatrixField sv = [&](std::span<const double> x) { return values(st(x, 0)); };
      cs.sink.put("deriv.cmap_structures", jet_fd_residual(st, sv, u, 1));
    });

    cs.sink.guarded({"deriv.bundle"}, [&] {
      const JetField b = [&](std::span<const double> x, int order) {
        const auto bj = corr::bundle_jets(in, identity_jets(x, order));
        return stack({bj.g_p, column(bj.eta), scalar(bj.f), scalar(bj.f1)});
      };
      const MatrixField bv = [&](std::span<const double> x) { return values(b(x, 0)); };
      cs.sink.put("deriv.bundle", jet_fd_residual(b, bv, p, 1));
    });

    const auto y = smp.slice_point();
    cs.sink.guarded({"deriv.qk_metric", "deriv.qk_structures"}, [&] {
      const JetField g = [&](std::span<const double> x, int order) {
        return corr::qk_jets(in, slice, insert_at(x, slice.coordinate, slice.value), order).g;
      };
      const MatrixField gv = [&](std::span<const double> x) {
        return corr::qk_metric(in, slice, insert_at(x, slice.coordinate, slice.value));
      };
      cs.sink.put("deriv.qk_metric", jet_fd_residual(g, gv, y, 2));
      const JetField st = [&](std::span<const double> x, int order) {
        const auto q = corr::qk_jets(in, slice, insert_at(x, slice.coordinate, slice.value), order + 1);
        return stack({q.j[0], q.j[1], q.j[2], q.omega[0], q.omega[1], q.omega[2]});
      };
      const MatrixField sv = [&](std::span<const double> x) { return values(st(x, 0)); };
      cs.sink.put("deriv.qk_structures", jet_fd_residual(st, sv, y, 1));
    });

    cs.sink.guarded({"deriv.fs_metric"}, [&] {
      const auto fp = fs::coordinate_map(cs.f, cs.e2, cs.c, y);
      const auto yf = fs::fs_coordinates(fp);
      const JetField g = [&](std::span<const double> x, int order) {
        return fs::fs_metric_jets(cs.f, cs.e2, RJet(cs.c), identity_jets(x, order));
      };
      const MatrixField gv = [&](std::span<const double> x) {
        return fs::fs_eval(cs.f, cs.e2, fs::fs_point(x, cs.e1, cs.c));
      };
      cs.sink.put("deriv.fs_metric", jet_fd_residual(g, gv, yf, 2));
    });
  }
}

void run_sk(Case& cs) {
  const int k = cs.k();
  for (const auto& smp : cs.samples) {
    cs.sink.guarded({"sk.homogeneity", "sk.euler"}, [&] {
      const auto h = sk::homogeneity_check(cs.f, smp.x, 1.7);
      cs.sink.put("sk.homogeneity", h.scaling);
      cs.sink.put("sk.euler", h.euler);
    });
    cs.sink.guarded({"sk.hesse_block", "sk.hesse_inverse"}, [&] {
      const auto m = sk::cask_metric(cs.f, smp.x);
      cs.sink.put("sk.hesse_block", m.rel_diff);
      cs.sink.put("sk.hesse_inverse", m.inverse_residual);
    });
    cs.sink.guarded({"sk.conical_decomposition"}, [&] {
      const auto d = sk::conical_decomposition_check(cs.f, smp.x);
      cs.sink.put("sk.conical_decomposition", std::max({d.residual, d.eta_jxi, d.eta_xi, d.block_vs_complex}));
    });
    cs.sink.guarded({"sk.hhat_identity"}, [&] {
      std::vector<Eigen::VectorXd> cov;
      for (int i = 0; i < 3; ++i) {
        Eigen::VectorXd p(2 * k);
        for (int a = 0; a < 2 * k; ++a) p(a) = smp.qhat[static_cast<std::size_t>((a + i) % (2 * k))] + 0.1 * (i + 1);
        cov.push_back(p);
      }
      cs.sink.put("sk.hhat_identity", sk::hhat_identity_residual(cs.f, smp.x, cov));
    });
    cs.sink.guarded({"sk.newton_round_trip"}, [&] {
      std::vector<RJet> re, im;
      std::vector<double> v0;
      for (const auto& xi : smp.x) {
        re.emplace_back(xi.re);
        im.emplace_back(xi.im);
        v0.push_back(xi.im + 0.05);
      }
      const Eigen::VectorXd q = values(sk::conical_jets(cs.f, re, im).q);
      const auto back = sk::point_from_q(cs.f, std::vector<double>(q.data(), q.data() + q.size()), v0);
      double worst = 0.0;
      for (int i = 0; i < k; ++i)
        worst = std::max(worst, abs_diff(back[static_cast<std::size_t>(i)], smp.x[static_cast<std::size_t>(i)]));
      cs.sink.put("sk.newton_round_trip", worst);
    });
  }
}

void run_cmap(Case& cs) {
  const auto in = corr::cmap_input(cs.f, cs.e2, cs.c);
  for (const auto& smp : cs.samples) {
    cs.sink.guarded({"cmap.algebra", "cmap.omega_consistency", "cmap.closure", "cmap.df_omega1", "cmap.lz_g",
                     "cmap.lz_j1", "cmap.lz_j2", "cmap.beta", "cmap.f1_identity", "cmap.cotangent",
                     "cmap.omega_identity"},
                    [&] {
                      const auto r = cmap::cmap_checks(cs.f, cs.e2, cs.c, smp.x, smp.qhat);
                      cs.sink.put("cmap.algebra", r.algebra);
                      cs.sink.put("cmap.omega_consistency", r.omega_consistency);
                      cs.sink.put("cmap.closure", max_of(r.closure));
                      cs.sink.put("cmap.df_omega1", r.df_omega1);
                      cs.sink.put("cmap.lz_g", r.lz_g);
                      cs.sink.put("cmap.lz_j1", r.lz_j1);
                      cs.sink.put("cmap.lz_j2", r.lz_j2);
                      cs.sink.put("cmap.beta", std::max(r.beta_z, r.beta_formula));
                      cs.sink.put("cmap.f1_identity", r.f1_identity);
                      cs.sink.put("cmap.cotangent", std::max(r.cotangent, r.p_roundtrip));
                      cs.sink.put("cmap.omega_identity", r.omega_identity);
                    });
    const auto p = smp.bundle_point();
    cs.sink.guarded({"bundle.lemma1", "bundle.kernel", "bundle.eta_norm", "bundle.eta_curvature"}, [&] {
      const auto b = corr::bundle_checks(in, p);
      cs.sink.put("bundle.lemma1", max_of(b.lemma1));
      cs.sink.put("bundle.kernel", b.kernel);
      cs.sink.put("bundle.eta_norm", b.eta_norm);
      cs.sink.put("bundle.eta_curvature", b.eta_curvature);
    });
    cs.sink.guarded({"bundle.vertical_matrices"}, [&] {
      cs.sink.put("bundle.vertical_matrices",
                  corr::vertical_matrices_residual(in, std::span<const double>(p).first(p.size() - 1)));
    });
  }
}

// Fixed twist for the non-integrable control.
Eigen::MatrixXd twist_matrix(int dim) {
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd b(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) b(i, j) = u(rng);
  return b;
}

void run_qk_and_moment(Case& cs, bool qk, bool moment) {
  const auto in = corr::cmap_input(cs.f, cs.e2, cs.c);
  const auto slice = corr::cmap_slice(cs.f.n());
  const std::vector<std::string> qk_ids{"qk.algebra",  "qk.projector",        "qk.killing",   "qk.condition",
                                        "qk.nu",       "qk.ricci_w",          "qk.q_invariance",
                                        "qk.riemann_symmetry", "qk.nijenhuis", "qk.domega",
                                        "qk.d_omega4", "qk.theta_bar"};
  const std::vector<std::string> m_ids{"moment.map", "moment.lie_x_omega1", "moment.lie_x_omega23"};
  const bool spatial = cs.e1 == -1 && cs.e2 == -1;
  for (const auto& smp : cs.samples) {
    const auto p = smp.bundle_point();
    std::vector<std::string> ids;
    if (qk) ids.insert(ids.end(), qk_ids.begin(), qk_ids.end());
    if (moment) ids.insert(ids.end(), m_ids.begin(), m_ids.end());
    cs.sink.guarded(ids, [&] {
      const auto r = corr::qk_checks(in, slice, p);
      if (qk) {
        cs.sink.put("qk.algebra", r.algebra);
        cs.sink.put("qk.projector", r.projector);
        cs.sink.put("qk.killing", r.killing);
        cs.sink.put("qk.condition", r.condition);
        cs.sink.put("qk.nu", r.nu_residual);
        cs.sink.put("qk.ricci_w", r.ricci_w);
        cs.sink.put("qk.q_invariance", r.q_invariance);
        cs.sink.put("qk.riemann_symmetry", r.riemann_symmetry);
        cs.sink.put("qk.nijenhuis", r.nijenhuis);
        cs.sink.put("qk.domega", r.domega);
        cs.sink.put("qk.d_omega4", r.d_omega4);
        cs.sink.put("qk.theta_bar", r.theta_bar_23);
      }
      if (moment) {
        cs.sink.put("moment.map", r.moment_map);
        cs.sink.put("moment.lie_x_omega1", r.lie_x_omega_mu[0]);
        cs.sink.put("moment.lie_x_omega23", std::max(r.lie_x_omega_mu[1], r.lie_x_omega_mu[2]));
      }
    });
    if (qk) {
      cs.sink.guarded({"qk.nijenhuis_control"}, [&] {
        const auto q = corr::qk_jets(in, slice, p, 2);
        const JetMat jt = geom::twisted_structure(q.j[0], twist_matrix(q.dim), 0, 0.5);
        const auto nv = geom::nijenhuis(jt);
        double worst = 0.0;
        for (double v : nv) worst = std::max(worst, std::abs(v));
        cs.sink.put("qk.nijenhuis_control", worst);
      });
    }
    // {s = 0} is transversal to Z_1^P only when c != 0; there a != 0.
    if (moment && cs.c != 0.0) {
      const auto p2 = smp.bundle_point(0.0);
      const corr::Slice fibre{4 * cs.k(), 0.0};
      const std::string alt = spatial ? "moment.lie_x_omega_alt" : "moment.lie_x_omega_alt_other";
      cs.sink.guarded({"moment.map", "moment.lie_x_omega1", "moment.lie_x_omega23", alt, "moment.fibre_a"}, [&] {
        const auto r = corr::qk_checks(in, fibre, p2);
        cs.sink.put("moment.map", r.moment_map);
        cs.sink.put("moment.lie_x_omega1", r.lie_x_omega_mu[0]);
        cs.sink.put("moment.lie_x_omega23", std::max(r.lie_x_omega_mu[1], r.lie_x_omega_mu[2]));
        cs.sink.put(alt, std::max(r.lie_x_omega[1], r.lie_x_omega[2]));
        cs.sink.put("moment.fibre_a", std::abs(r.a_value - 1.0 / (cs.e1 * cs.c)) * std::abs(cs.c));
      });
    }
  }
}

void run_flat(Case& cs) {
  const auto in = corr::flat_model(cs.e1, cs.e2, cs.c);
  const std::vector<std::string> ids{"flat.identities", "flat.lemma1",   "flat.algebra",    "flat.killing",
                                     "flat.nu",         "flat.ricci_w",  "flat.q_invariance", "flat.nijenhuis",
                                     "flat.moment_map"};
  auto usable = [&](const std::vector<double>& p) {
    try {
      const auto b = corr::bundle_data(in, p);
      return std::abs(b.f) > 0.1 && std::abs(b.f1) > 0.1;
    } catch (const Error&) {
      return false;
    }
  };
  auto draw = [&](bool fibre) {
    for (int attempt = 0; attempt < ConicalSampler::kRetryBudget; ++attempt) {
      std::vector<double> p;
      for (int i = 0; i < 4; ++i) p.push_back(cs.sampler.uniform(-0.8, 0.8));
      p.push_back(cs.sampler.uniform(-1.0, 1.0));
      if (fibre)
        p[4] = 0.0;
      else
        p[3] = 0.0;
      if (usable(p)) return p;
    }
    throw ConfigError("sampler starvation: no admissible flat-model point within the retry budget");
  };
  auto record = [&](const corr::QkChecks& r) {
    cs.sink.put("flat.algebra", r.algebra);
    cs.sink.put("flat.killing", r.killing);
    cs.sink.put("flat.nu", r.nu_residual);
    cs.sink.put("flat.ricci_w", r.ricci_w);
    cs.sink.put("flat.q_invariance", r.q_invariance);
    cs.sink.put("flat.nijenhuis", r.nijenhuis);
    cs.sink.put("flat.moment_map", r.moment_map);
  };
  for (std::size_t i = 0; i < cs.samples.size(); ++i) {
    const auto p = draw(false);
    cs.sink.guarded(ids, [&] {
      const auto fm = corr::flat_model_checks(cs.e1, cs.e2, std::span<const double>(p).first(4));
      cs.sink.put("flat.identities", std::max({fm.lie_omega_plus, fm.eta_curvature, fm.f1_relation, fm.z_formula}));
      cs.sink.put("flat.lemma1", max_of(corr::bundle_checks(in, p).lemma1));
      record(corr::qk_checks(in, corr::Slice{3, 0.0}, p));
    });
    if (cs.c != 0.0) {
      const auto p2 = draw(true);
      cs.sink.guarded(ids, [&] { record(corr::qk_checks(in, corr::Slice{4, 0.0}, p2)); });
    }
  }
}

void run_fs(Case& cs) {
  const std::vector<std::string> ids{"fs.equivalence", "fs.factor",       "fs.symmetry",      "fs.round_trip",
                                     "fs.rho_identity", "fs.dck",         "fs.c0_reduction", "fs.c_derivative"};
  for (const auto& smp : cs.samples) {
    const auto m = smp.slice_point();
    cs.sink.guarded(ids, [&] {
      const auto r = fs::fs_checks(cs.f, cs.e2, cs.c, m);
      cs.sink.put("fs.equivalence", r.equivalence);
      cs.sink.put("fs.factor", r.factor);
      cs.sink.put("fs.symmetry", r.symmetry);
      cs.sink.put("fs.round_trip", r.round_trip);
      cs.sink.put("fs.rho_identity", r.rho_identity);
      cs.sink.put("fs.dck", r.dck_pullback);
      cs.sink.put("fs.c0_reduction", r.c0_reduction);
      cs.sink.put("fs.c_derivative", r.c_derivative);
    });
    cs.sink.guarded({"fs.nu"}, [&] {
      const auto p = fs::coordinate_map(cs.f, cs.e2, cs.c, m);
      cs.sink.put("fs.nu", std::abs(fs::fs_nu(cs.f, cs.e2, p) + 2.0));
    });
  }
}

}  // namespace

std::vector<CheckSpec> check_catalogue() { return table(); }

VerificationReport run_suite(const RunConfig& cfg) {
  ReportBuilder rb;
  Sink sink(cfg, rb);
  for (std::size_t si = 0; si < cfg.signs.size(); ++si) {
    const int e1 = cfg.signs[si][0];
    const int e2 = cfg.signs[si][1];
    const auto f = make_prepotential(cfg.fixture.prepotential, cfg.fixture.n, e1, cfg.fixture.kappa);
    auto box = default_box(cfg.fixture.prepotential);
    box.x0_im = 0.0;
    for (std::size_t ci = 0; ci < cfg.c.size(); ++ci) {
      const double c = cfg.c[ci];
      ConicalSampler sampler(f, box, stream_seed(cfg.seed, si, ci, 0));
      ConicalSampler aux(f, box, stream_seed(cfg.seed, si, ci, 1));
      Case cs{cfg, sink, f, e1, e2, c, {}, aux};
      // Keep 2H - c and 2H + c away from zero so sigma, sigma1 are constant
      // and the Ferrara-Sabharwal chart applies (rho > 0).
      for (int i = 0; i < cfg.samples; ++i) {
        Sample smp;
        smp.x = sampler.next([&](const std::vector<EpsComplex>& x) {
          const double r2 = sk::cask_point(f, x).r2;
          return r2 - c > 0.1 && std::abs(r2 + c) > 0.1;
        });
        for (int a = 0; a < 2 * cs.k(); ++a) smp.qhat.push_back(sampler.uniform(-0.8, 0.8));
        smp.s = sampler.uniform(-1.0, 1.0);
        cs.samples.push_back(std::move(smp));
      }
      if (cs.wants("derivatives")) run_derivatives(cs);
      if (cs.wants("sk")) run_sk(cs);
      if (cs.wants("cmap")) run_cmap(cs);
      if (cs.wants("qk") || cs.wants("moment")) run_qk_and_moment(cs, cs.wants("qk"), cs.wants("moment"));
      if (cs.wants("flat")) run_flat(cs);
      if (cs.wants("fs")) run_fs(cs);
    }
  }
  VerificationReport out;
  out.config = to_json(cfg);
  out.checks = rb.records();
  auto rank = [](const std::string& id) {
    const auto& t = table();
    return std::find_if(t.begin(), t.end(), [&](const CheckSpec& s) { return s.id == id; }) - t.begin();
  };
  std::stable_sort(out.checks.begin(), out.checks.end(),
                   [&](const CheckRecord& a, const CheckRecord& b) { return rank(a.spec.id) < rank(b.spec.id); });
  for (const auto& r : out.checks) out.failed += r.pass ? 0 : 1;
  return out;
}

}  // namespace paraqk::verify
