#include "paraqk/sk/prepotential.hpp"

#include <cmath>
#include <numeric>

namespace paraqk::sk {

Prepotential::Prepotential(std::string name, int n, int eps1, std::vector<Monomial> terms)
    : name_(std::move(name)), n_(n), eps1_(eps1), terms_(std::move(terms)) {
  if (n < 0) throw ConfigError("prepotential: n must be non-negative");
  if (eps1 != 1 && eps1 != -1) throw ConfigError("prepotential: eps1 must be +1 or -1");
  if (terms_.empty()) throw ConfigError("prepotential: no terms");
  for (const auto& t : terms_) {
    if (static_cast<int>(t.exps.size()) != n + 1) throw ConfigError("prepotential: monomial arity must be n+1");
    if (std::accumulate(t.exps.begin(), t.exps.end(), 0) != 2)
      throw ConfigError("prepotential: monomial exponents must sum to 2");
  }
}

Prepotential Prepotential::quadratic(const Eigen::MatrixXd& eta, int eps1) {
  const int n = static_cast<int>(eta.rows()) - 1;
  if (n < 0 || eta.cols() != eta.rows()) throw ConfigError("prepotential: eta must be square");
  if ((eta - eta.transpose()).cwiseAbs().maxCoeff() > 0.0) throw ConfigError("prepotential: eta must be symmetric");
  std::vector<Monomial> terms;
  for (int i = 0; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      if (eta(i, j) == 0.0) continue;
      Monomial m;
      m.im = (i == j ? -0.5 : -1.0) * eps1 * eta(i, j);
      m.exps.assign(static_cast<std::size_t>(n + 1), 0);
      m.exps[static_cast<std::size_t>(i)] += 1;
      m.exps[static_cast<std::size_t>(j)] += 1;
      terms.push_back(std::move(m));
    }
  return Prepotential("quadratic", n, eps1, std::move(terms));
}

Prepotential Prepotential::cubic(int eps1, double kappa) {
  Monomial m;
  m.re = kappa;
  m.exps = {-1, 1, 1, 1};
  return Prepotential("cubic", 3, eps1, {m});
}

CJet Prepotential::evaluate(std::span<const CJet> x) const {
  if (static_cast<int>(x.size()) != n_ + 1) throw UsageError("prepotential: wrong number of variables");
  int lo = 0, hi = 0;
  for (const auto& t : terms_)
    for (int e : t.exps) {
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
  // powers[i][e - lo] = x_i^e
  std::vector<std::vector<CJet>> powers(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto& p = powers[i];
    p.resize(static_cast<std::size_t>(hi - lo + 1));
    p[static_cast<std::size_t>(-lo)] = CJet(EpsComplex(1.0, 0.0, eps1_));
    for (int e = 1; e <= hi; ++e) p[static_cast<std::size_t>(e - lo)] = p[static_cast<std::size_t>(e - 1 - lo)] * x[i];
    if (lo < 0) {
      bool needed = false;
      for (const auto& t : terms_) needed = needed || t.exps[i] < 0;
      if (needed) {
        const CJet inv = inverse(x[i]);
        for (int e = -1; e >= lo; --e) p[static_cast<std::size_t>(e - lo)] = p[static_cast<std::size_t>(e + 1 - lo)] * inv;
      }
    }
  }
  CJet acc(EpsComplex(0.0, 0.0, eps1_));
  for (const auto& t : terms_) {
    CJet m(EpsComplex(t.re, t.im, eps1_));
    for (std::size_t i = 0; i < x.size(); ++i)
      if (t.exps[i] != 0) m = m * powers[i][static_cast<std::size_t>(t.exps[i] - lo)];
    acc = acc + m;
  }
  return acc;
}

EpsComplex Prepotential::value(std::span<const EpsComplex> x) const {
  std::vector<CJet> v(x.begin(), x.end());
  return evaluate(v).value();
}

CJet Prepotential::taylor(std::span<const EpsComplex> x0, int order) const {
  return jet_lift<EpsComplex>([this](std::span<const CJet> v) { return evaluate(v); }, x0, order);
}

bool Prepotential::regular_at(std::span<const EpsComplex> x) const {
  for (std::size_t i = 0; i < x.size(); ++i) {
    bool negative = false;
    for (const auto& t : terms_) negative = negative || t.exps[i] < 0;
    if (negative && std::abs(norm2(x[i])) < kMinEpsNorm2) return false;
  }
  return true;
}

HomogeneityResidual homogeneity_check(const Prepotential& f, std::span<const EpsComplex> x, double lambda) {
  if (!f.regular_at(x)) throw DomainError("homogeneity_check: prepotential is singular at X");
  std::vector<EpsComplex> lx;
  for (const auto& xi : x) lx.push_back(lambda * xi);
  HomogeneityResidual r;
  const EpsComplex fx = f.value(x);
  r.scaling = abs_diff(f.value(lx), lambda * lambda * fx);
  const CJet t = f.taylor(x, 1);
  EpsComplex euler(0.0, 0.0, f.eps1());
  for (std::size_t i = 0; i < x.size(); ++i) euler += x[i] * t.gradient(static_cast<int>(i));
  r.euler = abs_diff(euler, 2.0 * fx);
  return r;
}

}  // namespace paraqk::sk
