#include "paraqk/verify/fixtures.hpp"

#include "paraqk/sk/cask.hpp"

namespace paraqk::verify {

sk::Prepotential make_prepotential(const std::string& name, int n, int eps1, double kappa) {
  if (name == "quadratic") {
    Eigen::MatrixXd eta = -Eigen::MatrixXd::Identity(n + 1, n + 1);
    eta(0, 0) = 1.0;
    return sk::Prepotential::quadratic(eta, eps1);
  }
  if (name == "cubic") {
    if (n != 3) throw ConfigError("cubic prepotential requires n = 3");
    return sk::Prepotential::cubic(eps1, kappa);
  }
  if (name == "mixed") {
    if (n < 1) throw ConfigError("mixed prepotential requires n >= 1");
    Eigen::MatrixXd eta = -Eigen::MatrixXd::Identity(n + 1, n + 1);
    eta(0, 0) = 1.0;
    auto terms = sk::Prepotential::quadratic(eta, eps1).terms();
    sk::Monomial m;
    m.re = 0.1 * kappa;
    m.exps.assign(static_cast<std::size_t>(n + 1), 0);
    m.exps[0] = -1;
    m.exps[1] = 3;
    terms.push_back(m);
    return sk::Prepotential("mixed", n, eps1, std::move(terms));
  }
  throw ConfigError("unknown prepotential '" + name + "'");
}

ConicalBox default_box(const std::string& prepotential) {
  ConicalBox b;
  if (prepotential == "cubic") {
    b.xu_re = 1.0;
    b.xu_im = 1.5;
    b.xu_im_floor = 0.4;
  }
  return b;
}

ConicalSampler::ConicalSampler(const sk::Prepotential& f, ConicalBox box, std::uint64_t seed)
    : f_(&f), box_(box), rng_(seed) {}

double ConicalSampler::uniform(double lo, double hi) {
  // 53-bit mantissa from the raw engine output; independent of the standard
  // library's distribution implementation.
  const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

std::vector<EpsComplex> ConicalSampler::draw() {
  const int eps = f_->eps1();
  std::vector<EpsComplex> x;
  x.emplace_back(uniform(box_.x0_re_lo, box_.x0_re_hi), uniform(-box_.x0_im, box_.x0_im), eps);
  for (int u = 1; u <= f_->n(); ++u) {
    const double re = uniform(-box_.xu_re, box_.xu_re);
    double im = uniform(-box_.xu_im, box_.xu_im);
    if (box_.xu_im_floor > 0.0) {
      const double mag = uniform(box_.xu_im_floor, box_.xu_im);
      im = (im < 0 ? -mag : mag);
    }
    x.emplace_back(re, im, eps);
  }
  return x;
}

bool ConicalSampler::accept(const std::vector<EpsComplex>& x) const {
  try {
    return sk::admissible(*f_, x);
  } catch (const Error&) {
    return false;
  }
}

}  // namespace paraqk::verify
