#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "paraqk/error.hpp"
#include "paraqk/verify/fixtures.hpp"
#include "paraqk/verify/oracles.hpp"
#include "paraqk/verify/suites.hpp"

using namespace paraqk;
using verify::CheckRecord;

namespace {

struct Stat {
  double value = 0.0;
  int points = 0;
  int errors = 0;
  std::string first_error;
};

// Aggregated over several reports, keyed by "<run>/<id>" and "<id>".
class Results {
 public:
  void absorb(const std::string& run, const verify::VerificationReport& r) {
    for (const CheckRecord& c : r.checks) {
      merge(run + "/" + c.spec.id, c);
      merge(c.spec.id, c);
    }
  }
  const Stat& operator()(const std::string& key) const {
    static const Stat missing{std::numeric_limits<double>::quiet_NaN(), 0, 0, {}};
    auto it = stats_.find(key);
    return it == stats_.end() ? missing : it->second;
  }

 private:
  void merge(const std::string& key, const CheckRecord& c) {
    auto [it, fresh] = stats_.try_emplace(key);
    Stat& s = it->second;
    const bool lower = c.spec.bound == verify::Bound::lower;
    if (fresh)
      s.value = c.value;
    else
      s.value = lower ? std::min(s.value, c.value) : std::max(s.value, c.value);
    s.points += c.points;
    if (c.errors && !s.errors) s.first_error = c.first_error;
    s.errors += c.errors;
  }
  std::map<std::string, Stat> stats_;
};

struct Criterion {
  int number;
  std::string name;
  bool pass = true;
  std::string detail;

  // max over key <= tol with at least min_points points and no errors.
  void upper(const Results& r, const std::string& key, double tol, int min_points = 1) {
    const Stat& s = r(key);
    const bool ok = s.errors == 0 && s.points >= min_points && std::isfinite(s.value) && s.value <= tol;
    note(key, s, ok, "<=", tol);
  }
  void lower(const Results& r, const std::string& key, double tol) {
    const Stat& s = r(key);
    const bool ok = s.errors == 0 && s.points > 0 && std::isfinite(s.value) && s.value >= tol;
    note(key, s, ok, ">=", tol);
  }
  void flag(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!ok) detail += " [" + what + "]";
  }
  void print() const {
    std::printf("[%s] criterion %2d: %s%s\n", pass ? "PASS" : "FAIL", number, name.c_str(), detail.c_str());
  }

 private:
  void note(const std::string& key, const Stat& s, bool ok, const char* op, double tol) {
    pass = pass && ok;
    char buf[256];
    std::snprintf(buf, sizeof buf, " %s=%.3g(%s%.0e,n=%d%s)", key.c_str(), s.value, op, tol, s.points,
                  s.errors ? ",errors" : "");
    detail += buf;
    if (s.errors) detail += " {" + s.first_error + "}";
  }
};

const char* sign_tag(int e1, int e2) {
  if (e1 == -1 && e2 == -1) return "mm";
  if (e1 == -1) return "mp";
  if (e2 == -1) return "pm";
  return "pp";
}

}  // namespace

int main() {
  Results res;
  const std::vector<std::array<int, 2>> signs{{-1, -1}, {-1, 1}, {1, -1}, {1, 1}};
  const std::vector<double> cs{-0.3, 0.0, 0.7};

  struct Run {
    std::string name;
    std::string prepotential;
    int n;
    int samples;
    int derivative_points;
    std::vector<std::string> suites;
  };
  // 34 samples x 3 values of c = 102 points per sign case for the main fixture.
  const std::vector<Run> runs{
      {"quadratic1", "quadratic", 1, 34, 1, verify::all_suites()},
      {"quadratic0", "quadratic", 0, 8, 1, {"derivatives", "sk", "cmap", "qk", "moment", "fs"}},
      {"mixed1", "mixed", 1, 4, 1, {"derivatives", "sk", "cmap", "qk", "moment", "fs"}},
  };

  try {
    for (const Run& run : runs)
      for (const auto& s : signs) {
        verify::RunConfig cfg;
        cfg.fixture.prepotential = run.prepotential;
        cfg.fixture.n = run.n;
        cfg.signs = {s};
        cfg.c = cs;
        cfg.samples = run.samples;
        cfg.derivative_points = run.derivative_points;
        cfg.seed = 7;
        cfg.suites = run.suites;
        const auto report = verify::run_suite(cfg);
        res.absorb(run.name, report);
        res.absorb(run.name + ":" + sign_tag(s[0], s[1]), report);
      }
  } catch (const Error& e) {
    std::printf("[FAIL] acceptance run aborted: %s\n", e.what());
    return 1;
  }

  std::vector<Criterion> out;
  const std::vector<std::string> fixtures{"quadratic1", "quadratic0", "mixed1"};

  {
    Criterion c{1, "(para-)quaternion algebra"};
    for (const auto& s : signs) {
      const std::string run = std::string("quadratic1:") + sign_tag(s[0], s[1]);
      c.upper(res, run + "/cmap.algebra", 1e-10, 100);
      c.upper(res, run + "/qk.algebra", 1e-8, 100);
    }
    out.push_back(c);
  }
  {
    Criterion c{2, "closedness of omega_a, Omega_4 and d theta_a^P"};
    c.upper(res, "cmap.closure", 1e-7);
    c.upper(res, "qk.d_omega4", 1e-7);
    c.upper(res, "bundle.lemma1", 1e-8);
    c.upper(res, "flat.lemma1", 1e-8);
    out.push_back(c);
  }
  {
    Criterion c{3, "rotating Killing field Z"};
    c.upper(res, "cmap.lz_g", 1e-8);
    c.upper(res, "cmap.lz_j1", 1e-8);
    c.upper(res, "cmap.lz_j2", 1e-8);
    c.upper(res, "cmap.df_omega1", 1e-10);
    out.push_back(c);
  }
  {
    Criterion c{4, "X is Killing for g', g' nondegenerate"};
    c.upper(res, "qk.killing", 1e-8);
    c.upper(res, "flat.killing", 1e-8);
    const Stat& cond = res("qk.condition");
    c.flag(cond.errors == 0 && std::isfinite(cond.value), "g' degenerate at a sample");
    char buf[64];
    std::snprintf(buf, sizeof buf, " max cond(g')=%.3g", cond.value);
    c.detail += buf;
    out.push_back(c);
  }
  {
    Criterion c{5, "reduced scalar curvature nu(g') = -4 eps1 sigma"};
    c.upper(res, "quadratic0/qk.nu", 1e-6);
    c.upper(res, "quadratic1/qk.nu", 1e-6);
    c.upper(res, "flat.nu", 1e-6);
    out.push_back(c);
  }
  {
    Criterion c{6, "curvature decomposition R = nu R0 + W"};
    c.upper(res, "qk.ricci_w", 1e-6);
    c.upper(res, "qk.q_invariance", 1e-6);
    c.upper(res, "flat.ricci_w", 1e-6);
    c.upper(res, "flat.q_invariance", 1e-6);
    out.push_back(c);
  }
  {
    Criterion c{7, "integrability of J'_1"};
    c.upper(res, "qk.nijenhuis", 1e-8);
    c.upper(res, "flat.nijenhuis", 1e-8);
    c.lower(res, "qk.nijenhuis_control", 1e-3);
    out.push_back(c);
  }
  {
    Criterion c{8, "moment map of X"};
    c.upper(res, "moment.map", 1e-6);
    c.upper(res, "flat.moment_map", 1e-6);
    c.upper(res, "moment.lie_x_omega1", 1e-7);
    out.push_back(c);
  }
  {
    Criterion c{9, "Ferrara-Sabharwal form equals g' on {Im X^0 = 0}"};
    for (const auto& f : fixtures) c.upper(res, f + "/fs.equivalence", 1e-9);
    for (const auto& s : signs)
      c.upper(res, std::string("quadratic1:") + sign_tag(s[0], s[1]) + "/fs.equivalence", 1e-9, 100);
    out.push_back(c);
  }
  {
    Criterion c{10, "jets vs Richardson finite differences"};
    for (const char* id : {"deriv.prepotential", "deriv.cmap_metric", "deriv.cmap_structures", "deriv.bundle",
                           "deriv.qk_metric", "deriv.qk_structures", "deriv.fs_metric", "fs.c_derivative"})
      c.upper(res, id, 1e-6);
    double worst = 0.0;
    for (int e1 : {-1, 1}) {
      const auto f = verify::make_prepotential("cubic", 3, e1);
      verify::ConicalSampler s(f, verify::default_box("cubic"), 7);
      for (int i = 0; i < 3; ++i) worst = std::max(worst, verify::prepotential_fd_residual(f, s.next()));
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, " cubic prepotential=%.3g(<=1e-06)", worst);
    c.detail += buf;
    c.flag(worst <= 1e-6, "cubic prepotential");
    out.push_back(c);
  }
  {
    Criterion c{11, "determinism"};
    verify::RunConfig cfg;
    cfg.c = {-0.3, 0.7};
    cfg.samples = 3;
    cfg.derivative_points = 1;
    cfg.seed = 99;
    const std::string a = verify::to_text(verify::run_suite(cfg));
    const std::string b = verify::to_text(verify::run_suite(cfg));
    cfg.seed = 100;
    const std::string other = verify::to_text(verify::run_suite(cfg));
    c.flag(a == b, "reports differ for the same seed");
    c.flag(a != other, "seed has no effect");
    c.detail += " report bytes=" + std::to_string(a.size());
    out.push_back(c);
  }

  int failed = 0;
  for (const auto& c : out) {
    c.print();
    failed += c.pass ? 0 : 1;
  }
  std::printf("%d/%zu acceptance criteria passed\n", static_cast<int>(out.size()) - failed, out.size());
  return failed == 0 ? 0 : 1;
}
