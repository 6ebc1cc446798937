#include "paraqk/geom/forms.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

namespace paraqk::geom {

namespace {

std::uint64_t pack(std::span<const int> t) {
  std::uint64_t key = 0;
  for (int v : t) key = key * 32 + static_cast<std::uint64_t>(v) + 1;
  return key;
}

// Sorts idx in place; returns the permutation sign, or 0 on a repeated index.
int sort_sign(std::vector<int>& idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i)
    for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
      if (idx[j - 1] == idx[j]) return 0;
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  return sign;
}

}  // namespace

Combinations::Combinations(int dim, int k) : dim_(dim), k_(k) {
  std::vector<int> t(static_cast<std::size_t>(k));
  std::iota(t.begin(), t.end(), 0);
  if (k > dim) return;
  while (true) {
    tuples_.insert(tuples_.end(), t.begin(), t.end());
    ++count_;
    int i = k - 1;
    while (i >= 0 && t[static_cast<std::size_t>(i)] == dim - k + i) --i;
    if (i < 0) break;
    ++t[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) t[static_cast<std::size_t>(j)] = t[static_cast<std::size_t>(j - 1)] + 1;
  }
}

namespace {
struct ComboRegistry {
  std::mutex mu;
  std::map<std::pair<int, int>, std::unique_ptr<Combinations>> table;
  std::map<std::pair<int, int>, std::map<std::uint64_t, std::size_t>> ranks;
};
ComboRegistry& registry() {
  static ComboRegistry r;
  return r;
}
}  // namespace

const Combinations& Combinations::get(int dim, int k) {
  if (dim < 1 || dim > 21 || k < 0) throw UsageError("forms: unsupported dimension or degree");
  auto& reg = registry();
  std::lock_guard<std::mutex> lock(reg.mu);
  auto& slot = reg.table[{dim, k}];
  if (!slot) {
    slot.reset(new Combinations(dim, k));
    auto& rk = reg.ranks[{dim, k}];
    for (std::size_t r = 0; r < slot->size(); ++r) rk.emplace(pack(slot->tuple(r)), r);
  }
  return *slot;
}

std::size_t Combinations::rank(std::span<const int> sorted) const {
  if (k_ == 0) return 0;
  auto& reg = registry();
  const std::map<std::uint64_t, std::size_t>* rk;
  {
    std::lock_guard<std::mutex> lock(reg.mu);
    rk = &reg.ranks.at({dim_, k_});
  }
  auto it = rk->find(pack(sorted));
  if (it == rk->end()) throw UsageError("forms: index tuple out of range");
  return it->second;
}

Form::Form(int dim, int degree) : dim_(dim), k_(degree) {
  comps_.assign(Combinations::get(dim, degree).size(), RJet(0.0));
}

Form Form::scalar(const RJet& f) {
  Form w(std::max(1, f.nvars()), 0);
  w.comps_[0] = f;
  return w;
}

Form Form::one_form(const JetVec& a) {
  Form w(static_cast<int>(a.size()), 1);
  for (Eigen::Index i = 0; i < a.size(); ++i) w.comps_[static_cast<std::size_t>(i)] = a(i);
  return w;
}

Form Form::two_form(const JetMat& m, double tol) {
  const int n = static_cast<int>(m.rows());
  if (m.cols() != n) throw UsageError("forms: two-form matrix must be square");
  Form w(n, 2);
  const auto& basis = w.basis();
  for (std::size_t r = 0; r < basis.size(); ++r) {
    auto t = basis.tuple(r);
    const RJet& a = m(t[0], t[1]);
    const RJet& b = m(t[1], t[0]);
    const RJet s = a + b;
    for (std::size_t k = 0; k < s.size(); ++k)
      if (std::abs(s[k]) > tol * (1.0 + std::abs(a[k]))) throw UsageError("forms: matrix is not antisymmetric");
    w.comps_[r] = a;
  }
  for (int i = 0; i < n; ++i)
    if (std::abs(m(i, i).value()) > tol) throw UsageError("forms: matrix is not antisymmetric");
  return w;
}

RJet Form::at(std::span<const int> idx) const {
  std::vector<int> t(idx.begin(), idx.end());
  const int s = sort_sign(t);
  if (s == 0) return RJet(0.0);
  const RJet& c = comps_[basis().rank(t)];
  return s > 0 ? c : -c;
}

JetVec Form::vector() const {
  if (k_ != 1) throw UsageError("forms: not a one-form");
  JetVec v(dim_);
  for (int i = 0; i < dim_; ++i) v(i) = comps_[static_cast<std::size_t>(i)];
  return v;
}

JetMat Form::matrix() const {
  if (k_ != 2) throw UsageError("forms: not a two-form");
  JetMat m(dim_, dim_);
  for (int i = 0; i < dim_; ++i) m(i, i) = RJet(0.0);
  const auto& b = basis();
  for (std::size_t r = 0; r < b.size(); ++r) {
    auto t = b.tuple(r);
    m(t[0], t[1]) = comps_[r];
    m(t[1], t[0]) = -comps_[r];
  }
  return m;
}

double Form::max_abs() const {
  double m = 0.0;
  for (const auto& c : comps_) m = std::max(m, std::abs(c.value()));
  return m;
}

Form Form::truncate(int order) const {
  Form w = *this;
  for (auto& c : w.comps_) c = c.truncate(std::min(order, c.order()));
  return w;
}

Form& Form::operator+=(const Form& o) {
  if (o.dim_ != dim_ || o.k_ != k_) throw UsageError("forms: adding forms of different type");
  for (std::size_t r = 0; r < comps_.size(); ++r) comps_[r] = comps_[r] + o.comps_[r];
  return *this;
}

Form& Form::operator-=(const Form& o) {
  if (o.dim_ != dim_ || o.k_ != k_) throw UsageError("forms: subtracting forms of different type");
  for (std::size_t r = 0; r < comps_.size(); ++r) comps_[r] = comps_[r] - o.comps_[r];
  return *this;
}

Form operator*(const RJet& s, const Form& a) {
  Form w = a;
  for (auto& c : w.comps_) c = s * c;
  return w;
}

Form wedge(const Form& a, const Form& b) {
  if (a.dim() != b.dim()) throw UsageError("forms: wedge of forms on different dimensions");
  Form w(a.dim(), a.degree() + b.degree());
  const auto& ba = a.basis();
  const auto& bb = b.basis();
  const auto& bw = w.basis();
  std::vector<int> merged;
  for (std::size_t i = 0; i < ba.size(); ++i) {
    if (a[i].is_constant() && a[i].value() == 0.0) continue;
    auto ti = ba.tuple(i);
    for (std::size_t j = 0; j < bb.size(); ++j) {
      if (b[j].is_constant() && b[j].value() == 0.0) continue;
      auto tj = bb.tuple(j);
      int inversions = 0;
      bool disjoint = true;
      for (int x : ti) {
        for (int y : tj) {
          if (x == y) disjoint = false;
          if (x > y) ++inversions;
        }
      }
      if (!disjoint) continue;
      merged.assign(ti.begin(), ti.end());
      merged.insert(merged.end(), tj.begin(), tj.end());
      std::sort(merged.begin(), merged.end());
      const RJet p = a[i] * b[j];
      auto& slot = w[bw.rank(merged)];
      slot = (inversions % 2 == 0) ? slot + p : slot - p;
    }
  }
  return w;
}

Form exterior_derivative(const Form& w) {
  Form out(w.dim(), w.degree() + 1);
  const auto& bw = w.basis();
  const auto& bo = out.basis();
  std::vector<int> merged;
  for (std::size_t r = 0; r < bw.size(); ++r) {
    if (w[r].is_constant()) continue;
    auto t = bw.tuple(r);
    for (int i = 0; i < w.dim(); ++i) {
      if (std::find(t.begin(), t.end(), i) != t.end()) continue;
      const auto below = std::count_if(t.begin(), t.end(), [i](int x) { return x < i; });
      merged.assign(t.begin(), t.end());
      merged.push_back(i);
      std::sort(merged.begin(), merged.end());
      const RJet d = w[r].derivative(i);
      auto& slot = out[bo.rank(merged)];
      slot = (below % 2 == 0) ? slot + d : slot - d;
    }
  }
  return out;
}

Form interior(const JetVec& v, const Form& w) {
  if (w.degree() == 0) throw UsageError("forms: interior product of a function");
  if (v.size() != w.dim()) throw UsageError("forms: vector and form dimensions differ");
  Form out(w.dim(), w.degree() - 1);
  const auto& bw = w.basis();
  const auto& bo = out.basis();
  std::vector<int> rest;
  for (std::size_t r = 0; r < bw.size(); ++r) {
    auto t = bw.tuple(r);
    for (std::size_t s = 0; s < t.size(); ++s) {
      rest.assign(t.begin(), t.end());
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(s));
      const RJet p = v(t[s]) * w[r];
      auto& slot = out[bo.rank(rest)];
      slot = (s % 2 == 0) ? slot + p : slot - p;
    }
  }
  return out;
}

Form lie_derivative(const Form& w, const JetVec& v) {
  if (v.size() != w.dim()) throw UsageError("forms: vector and form dimensions differ");
  const int n = w.dim();
  std::vector<std::vector<RJet>> dv(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a) dv[static_cast<std::size_t>(c)].push_back(v(c).derivative(a));
  Form out(n, w.degree());
  const auto& b = w.basis();
  std::vector<int> idx;
  for (std::size_t r = 0; r < b.size(); ++r) {
    auto t = b.tuple(r);
    RJet acc(0.0);
    if (!w[r].is_constant())
      for (int c = 0; c < n; ++c) acc = acc + v(c) * w[r].derivative(c);
    for (std::size_t s = 0; s < t.size(); ++s) {
      for (int c = 0; c < n; ++c) {
        const RJet& dvc = dv[static_cast<std::size_t>(c)][static_cast<std::size_t>(t[s])];
        if (dvc.is_constant() && dvc.value() == 0.0) continue;
        idx.assign(t.begin(), t.end());
        idx[s] = c;
        acc = acc + w.at(idx) * dvc;
      }
    }
    out[r] = acc;
  }
  return out;
}

namespace {
RJet minor_det(const JetMat& jac, std::span<const int> rows, std::span<const int> cols) {
  const std::size_t k = rows.size();
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  RJet det(0.0);
  do {
    int inv = 0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        if (perm[i] > perm[j]) ++inv;
    RJet p(1.0);
    for (std::size_t i = 0; i < k; ++i) p = p * jac(rows[i], cols[static_cast<std::size_t>(perm[i])]);
    det = (inv % 2 == 0) ? det + p : det - p;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}
}  // namespace

Form pullback(const Form& w, const JetMat& jac) {
  if (jac.rows() != w.dim()) throw UsageError("forms: Jacobian does not match the form");
  Form out(static_cast<int>(jac.cols()), w.degree());
  if (w.degree() == 0) {
    out[0] = w[0];
    return out;
  }
  const auto& bw = w.basis();
  const auto& bo = out.basis();
  for (std::size_t a = 0; a < bo.size(); ++a) {
    RJet acc(0.0);
    for (std::size_t r = 0; r < bw.size(); ++r) {
      if (w[r].is_constant() && w[r].value() == 0.0) continue;
      acc = acc + w[r] * minor_det(jac, bw.tuple(r), bo.tuple(a));
    }
    out[a] = acc;
  }
  return out;
}

}  // namespace paraqk::geom
