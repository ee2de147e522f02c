#include "multiwit/algebra.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace multiwit {

bool GradedLex::operator()(const Exponent& a, const Exponent& b) const {
  int da = std::accumulate(a.begin(), a.end(), 0);
  int db = std::accumulate(b.begin(), b.end(), 0);
  if (da != db) return da > db;
  return a > b;
}

int total(const MultiIndex& e) { return std::accumulate(e.begin(), e.end(), 0); }

std::string key_string(const MultiIndex& e) {
  bool small = std::all_of(e.begin(), e.end(), [](int v) { return v >= 0 && v < 10; });
  if (!small) return comma_string(e);
  std::string s;
  for (int v : e) s += static_cast<char>('0' + v);
  return s;
}

std::string comma_string(const MultiIndex& e) {
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(e[i]);
  }
  return s;
}

MultiIndex parse_key(const std::string& s) {
  MultiIndex e;
  if (s.find(',') != std::string::npos) {
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) e.push_back(std::stoi(item));
    return e;
  }
  for (char c : s) {
    if (c < '0' || c > '9') throw AlgebraError("bad multi-index key '" + s + "'");
    e.push_back(c - '0');
  }
  return e;
}

std::vector<MultiIndex> multi_indices(const MultiIndex& bounds, int sum) {
  std::vector<MultiIndex> out;
  MultiIndex cur(bounds.size(), 0);
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i == bounds.size()) {
      if (left == 0) out.push_back(cur);
      return;
    }
    for (int v = std::min(bounds[i], left); v >= 0; --v) {
      cur[i] = v;
      self(self, i + 1, left - v);
    }
    cur[i] = 0;
  };
  if (sum >= 0) rec(rec, 0, sum);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------- grouping

VariableGrouping::VariableGrouping(const std::vector<int>& sizes) {
  int next = 0;
  for (std::size_t g = 0; g < sizes.size(); ++g) {
    if (sizes[g] < 1) throw AlgebraError("group sizes must be positive");
    std::vector<int> vars;
    for (int j = 0; j < sizes[g]; ++j) {
      vars.push_back(next);
      names_.push_back("y" + std::to_string(g + 1) + "_" + std::to_string(j + 1));
      owner_.push_back(static_cast<int>(g));
      ++next;
    }
    groups_.push_back(vars);
    group_names_.push_back("y" + std::to_string(g + 1));
  }
  if (groups_.empty()) throw AlgebraError("grouping needs at least one group");
}

VariableGrouping::VariableGrouping(std::vector<std::vector<int>> groups, std::vector<std::string> names,
                                   std::vector<std::string> group_names)
    : groups_(std::move(groups)), names_(std::move(names)), group_names_(std::move(group_names)) {
  if (groups_.empty()) throw AlgebraError("grouping needs at least one group");
  owner_.assign(names_.size(), -1);
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    if (groups_[g].empty()) throw AlgebraError("empty variable group");
    for (int v : groups_[g]) {
      if (v < 0 || v >= static_cast<int>(names_.size()) || owner_[v] != -1)
        throw AlgebraError("groups must partition the variables");
      owner_[v] = static_cast<int>(g);
    }
  }
  if (std::find(owner_.begin(), owner_.end(), -1) != owner_.end())
    throw AlgebraError("variable not assigned to a group");
  std::set<std::string> seen(names_.begin(), names_.end());
  if (seen.size() != names_.size()) throw AlgebraError("variable names must be unique");
  if (group_names_.size() != groups_.size()) {
    group_names_.clear();
    for (std::size_t g = 0; g < groups_.size(); ++g) group_names_.push_back("g" + std::to_string(g + 1));
  }
}

std::vector<int> VariableGrouping::sizes() const {
  std::vector<int> s;
  for (const auto& g : groups_) s.push_back(static_cast<int>(g.size()));
  return s;
}

VariableGrouping VariableGrouping::merge(std::vector<int> which) const {
  std::sort(which.begin(), which.end());
  which.erase(std::unique(which.begin(), which.end()), which.end());
  if (which.size() < 2) throw AlgebraError("merge needs at least two groups");
  std::vector<std::vector<int>> groups;
  std::vector<std::string> gnames;
  std::vector<int> merged;
  std::string mname;
  for (int g : which) {
    if (g < 0 || g >= num_groups()) throw AlgebraError("merge: group index out of range");
    merged.insert(merged.end(), groups_[g].begin(), groups_[g].end());
    mname += group_names_[g];
  }
  std::sort(merged.begin(), merged.end());
  for (int g = 0; g < num_groups(); ++g) {
    if (g == which.front()) {
      groups.push_back(merged);
      gnames.push_back(mname);
    } else if (!std::binary_search(which.begin(), which.end(), g)) {
      groups.push_back(groups_[g]);
      gnames.push_back(group_names_[g]);
    }
  }
  return VariableGrouping(groups, names_, gnames);
}

VariableGrouping VariableGrouping::split(int g, const std::vector<int>& first_vars) const {
  std::vector<int> a, b;
  for (int v : groups_.at(g)) {
    if (std::find(first_vars.begin(), first_vars.end(), v) != first_vars.end())
      a.push_back(v);
    else
      b.push_back(v);
  }
  if (a.empty() || b.empty() || a.size() != first_vars.size())
    throw AlgebraError("split must divide the group into two nonempty parts");
  std::vector<std::vector<int>> groups;
  std::vector<std::string> gnames;
  for (int i = 0; i < num_groups(); ++i) {
    if (i == g) {
      groups.push_back(a);
      groups.push_back(b);
      gnames.push_back(group_names_[i] + "'");
      gnames.push_back(group_names_[i] + "''");
    } else {
      groups.push_back(groups_[i]);
      gnames.push_back(group_names_[i]);
    }
  }
  return VariableGrouping(groups, names_, gnames);
}

VariableGrouping VariableGrouping::ungrouped() const {
  std::vector<int> all(names_.size());
  std::iota(all.begin(), all.end(), 0);
  return VariableGrouping({all}, names_, {"x"});
}

VariableGrouping VariableGrouping::restrict_to(const std::vector<int>& which) const {
  std::vector<int> vars;
  for (int g : which) vars.insert(vars.end(), groups_.at(g).begin(), groups_.at(g).end());
  std::sort(vars.begin(), vars.end());
  std::vector<std::vector<int>> groups;
  std::vector<std::string> names, gnames;
  for (int v : vars) names.push_back(names_[v]);
  for (int g : which) {
    std::vector<int> grp;
    for (int v : groups_[g])
      grp.push_back(static_cast<int>(std::lower_bound(vars.begin(), vars.end(), v) - vars.begin()));
    groups.push_back(grp);
    gnames.push_back(group_names_[g]);
  }
  return VariableGrouping(groups, names, gnames);
}

// -------------------------------------------------------------- polynomial

Polynomial Polynomial::constant(int nvars, Complex c) {
  Polynomial p(nvars);
  p.add_term(Exponent(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(int nvars, int index) {
  if (index < 0 || index >= nvars) throw AlgebraError("variable index out of range");
  Polynomial p(nvars);
  Exponent e(nvars, 0);
  e[index] = 1;
  p.add_term(e, 1.0);
  return p;
}

Polynomial Polynomial::affine(const CVector& linear, Complex c) {
  int n = static_cast<int>(linear.size());
  Polynomial p(n);
  for (int j = 0; j < n; ++j) {
    Exponent e(n, 0);
    e[j] = 1;
    p.add_term(e, linear(j));
  }
  p.add_term(Exponent(n, 0), c);
  return p;
}

void Polynomial::add_term(const Exponent& exponent, Complex c) {
  if (static_cast<int>(exponent.size()) != nvars_) throw AlgebraError("exponent length mismatch");
  if (c == Complex(0.0)) return;
  auto it = terms_.find(exponent);
  if (it == terms_.end()) {
    terms_.emplace(exponent, c);
    return;
  }
  it->second += c;
  if (it->second == Complex(0.0)) terms_.erase(it);
}

Complex Polynomial::coefficient(const Exponent& exponent) const {
  auto it = terms_.find(exponent);
  return it == terms_.end() ? Complex(0.0) : it->second;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  if (nvars_ != o.nvars_) throw AlgebraError("polynomial arity mismatch");
  Polynomial r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator-() const { return scaled(-1.0); }

Polynomial Polynomial::scaled(Complex c) const {
  Polynomial r(nvars_);
  if (c == Complex(0.0)) return r;
  for (const auto& [e, v] : terms_) r.terms_.emplace(e, v * c);
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (nvars_ != o.nvars_) throw AlgebraError("polynomial arity mismatch");
  Polynomial r(nvars_);
  Exponent e(nvars_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      for (int j = 0; j < nvars_; ++j) e[j] = ea[j] + eb[j];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

Polynomial Polynomial::pow(int k) const {
  if (k < 0) throw AlgebraError("negative power");
  Polynomial r = constant(nvars_, 1.0);
  Polynomial base = *this;
  while (k) {
    if (k & 1) r = r * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return r;
}

Complex Polynomial::evaluate(const CVector& x) const {
  if (x.size() != nvars_) throw AlgebraError("evaluate: dimension mismatch");
  Complex sum = 0.0;
  for (const auto& [e, c] : terms_) {
    Complex t = c;
    for (int j = 0; j < nvars_; ++j)
      for (int a = 0; a < e[j]; ++a) t *= x(j);
    sum += t;
  }
  return sum;
}

int Polynomial::total_degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

int Polynomial::degree_in(const std::vector<int>& vars) const {
  int d = 0;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int v : vars) s += e[v];
    d = std::max(d, s);
  }
  return d;
}

Polynomial Polynomial::substitute(const std::vector<int>& vars, const CVector& values) const {
  std::vector<int> keep;
  for (int j = 0; j < nvars_; ++j)
    if (std::find(vars.begin(), vars.end(), j) == vars.end()) keep.push_back(j);
  Polynomial r(static_cast<int>(keep.size()));
  Exponent e(keep.size());
  for (const auto& [ex, c] : terms_) {
    Complex t = c;
    for (std::size_t i = 0; i < vars.size(); ++i)
      for (int a = 0; a < ex[vars[i]]; ++a) t *= values(i);
    for (std::size_t i = 0; i < keep.size(); ++i) e[i] = ex[keep[i]];
    r.add_term(e, t);
  }
  return r;
}

Polynomial Polynomial::remap(int nvars, const std::vector<int>& map) const {
  Polynomial r(nvars);
  Exponent e(nvars);
  for (const auto& [ex, c] : terms_) {
    std::fill(e.begin(), e.end(), 0);
    for (int j = 0; j < nvars_; ++j) e[map.at(j)] += ex[j];
    r.add_term(e, c);
  }
  return r;
}

PolySystem::PolySystem(std::vector<Polynomial> polys, VariableGrouping grouping)
    : polys_(std::move(polys)), grouping_(std::move(grouping)) {
  for (const auto& p : polys_)
    if (p.num_vars() != grouping_.num_vars()) throw AlgebraError("system arity does not match grouping");
}

PolySystem PolySystem::with_grouping(VariableGrouping g) const {
  if (g.num_vars() != num_vars()) throw AlgebraError("regrouping changes variable count");
  return PolySystem(polys_, std::move(g));
}

PolySystem PolySystem::appended(const std::vector<Polynomial>& extra) const {
  auto polys = polys_;
  polys.insert(polys.end(), extra.begin(), extra.end());
  return PolySystem(std::move(polys), grouping_);
}

CVector evaluate(const PolySystem& system, const CVector& point) {
  if (point.size() != system.num_vars()) throw AlgebraError("evaluate: dimension mismatch");
  CVector out(system.size());
  for (int i = 0; i < system.size(); ++i) out(i) = system[i].evaluate(point);
  return out;
}

CMatrix jacobian(const PolySystem& system, const CVector& point, const std::vector<int>& omit_groups) {
  if (point.size() != system.num_vars()) throw AlgebraError("jacobian: dimension mismatch");
  const auto& grouping = system.grouping();
  std::vector<int> cols;
  for (int v = 0; v < system.num_vars(); ++v) {
    int g = grouping.group_of(v);
    if (std::find(omit_groups.begin(), omit_groups.end(), g) == omit_groups.end()) cols.push_back(v);
  }
  for (int g : omit_groups)
    if (g < 0 || g >= grouping.num_groups()) throw AlgebraError("jacobian: group index out of range");
  CompiledSystem cs(system.polys(), system.num_vars());
  CVector vals;
  CMatrix full;
  cs.evaluate(point, vals, full);
  CMatrix out(system.size(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) out.col(c) = full.col(cols[c]);
  return out;
}

std::vector<double> singular_values(const CMatrix& m) {
  if (m.size() == 0) return {};
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

int numerical_rank(const CMatrix& m, double rel_tol) {
  auto s = singular_values(m);
  if (s.empty() || s.front() == 0.0) return 0;
  double cut = rel_tol * s.front();
  return static_cast<int>(std::count_if(s.begin(), s.end(), [cut](double v) { return v > cut; }));
}

std::pair<Polynomial, VariableGrouping> homogenize(const Polynomial& p, const VariableGrouping& grouping,
                                                   const MultiIndex& degrees) {
  int n = grouping.num_vars();
  int k = grouping.num_groups();
  if (p.num_vars() != n) throw AlgebraError("homogenize: arity mismatch");
  if (static_cast<int>(degrees.size()) != k) throw AlgebraError("homogenize: degree vector length");
  MultiIndex md = multidegree_of(p, grouping);
  for (int g = 0; g < k; ++g)
    if (md[g] > degrees[g]) throw AlgebraError("homogenize: target multidegree too small");
  Polynomial r(n + k);
  Exponent e(n + k);
  for (const auto& [ex, c] : p.terms()) {
    std::fill(e.begin(), e.end(), 0);
    for (int j = 0; j < n; ++j) e[j] = ex[j];
    for (int g = 0; g < k; ++g) {
      int dg = 0;
      for (int v : grouping.group(g)) dg += ex[v];
      e[n + g] = degrees[g] - dg;
    }
    r.add_term(e, c);
  }
  std::vector<std::vector<int>> groups;
  std::vector<std::string> names = grouping.names();
  for (int g = 0; g < k; ++g) {
    std::vector<int> grp{n + g};
    grp.insert(grp.end(), grouping.group(g).begin(), grouping.group(g).end());
    groups.push_back(grp);
    names.push_back(grouping.group_names()[g] + "_0");
  }
  return {r, VariableGrouping(groups, names, grouping.group_names())};
}

std::pair<Polynomial, VariableGrouping> dehomogenize(const Polynomial& p, const VariableGrouping& grouping) {
  int n = grouping.num_vars();
  if (p.num_vars() != n) throw AlgebraError("dehomogenize: arity mismatch");
  std::vector<int> drop;
  for (int g = 0; g < grouping.num_groups(); ++g) {
    if (grouping.group_size(g) < 2) throw AlgebraError("dehomogenize: group has no affine coordinates");
    drop.push_back(grouping.group(g).front());
  }
  Polynomial r = p.substitute(drop, CVector::Ones(static_cast<Eigen::Index>(drop.size())));
  std::vector<int> keep;
  for (int j = 0; j < n; ++j)
    if (std::find(drop.begin(), drop.end(), j) == drop.end()) keep.push_back(j);
  std::vector<std::vector<int>> groups;
  std::vector<std::string> names;
  for (int j : keep) names.push_back(grouping.names()[j]);
  for (int g = 0; g < grouping.num_groups(); ++g) {
    std::vector<int> grp;
    for (std::size_t i = 1; i < grouping.group(g).size(); ++i) {
      int v = grouping.group(g)[i];
      grp.push_back(static_cast<int>(std::lower_bound(keep.begin(), keep.end(), v) - keep.begin()));
    }
    groups.push_back(grp);
  }
  return {r, VariableGrouping(groups, names, grouping.group_names())};
}

MultiIndex multidegree_of(const Polynomial& p, const VariableGrouping& grouping) {
  if (p.num_vars() != grouping.num_vars()) throw AlgebraError("multidegree: arity mismatch");
  MultiIndex d(grouping.num_groups(), 0);
  for (int g = 0; g < grouping.num_groups(); ++g) d[g] = p.degree_in(grouping.group(g));
  return d;
}

// ------------------------------------------------------------------ compiled

CompiledSystem::CompiledSystem(const std::vector<Polynomial>& polys, int nvars) : nvars_(nvars) {
  for (const auto& p : polys) {
    if (p.num_vars() != nvars) throw AlgebraError("compiled system arity mismatch");
    Poly cp{static_cast<int>(terms_.size()), 0};
    for (const auto& [e, c] : p.terms()) {
      Term t{c, static_cast<int>(factors_.size()), 0};
      for (int j = 0; j < nvars; ++j)
        if (e[j] > 0) factors_.push_back({j, e[j]});
      t.end = static_cast<int>(factors_.size());
      terms_.push_back(t);
    }
    cp.end = static_cast<int>(terms_.size());
    polys_.push_back(cp);
  }
}

namespace {
inline Complex ipow(Complex x, int k) {
  Complex r = 1.0;
  for (int a = 0; a < k; ++a) r *= x;
  return r;
}
}  // namespace

Complex CompiledSystem::value(int i, const CVector& x) const {
  Complex sum = 0.0;
  const Poly& p = polys_[i];
  for (int t = p.begin; t < p.end; ++t) {
    Complex v = terms_[t].coef;
    for (int f = terms_[t].begin; f < terms_[t].end; ++f) v *= ipow(x(factors_[f].var), factors_[f].exp);
    sum += v;
  }
  return sum;
}

Complex CompiledSystem::value_gradient(int i, const CVector& x, CMatrix& jac, int row) const {
  Complex sum = 0.0;
  const Poly& p = polys_[i];
  Complex pw[64], dw[64], suffix[65];
  for (int t = p.begin; t < p.end; ++t) {
    const Term& term = terms_[t];
    int r = term.end - term.begin;
    if (r > 64) throw AlgebraError("term has too many factors");
    for (int f = 0; f < r; ++f) {
      const Factor& fa = factors_[term.begin + f];
      Complex xv = x(fa.var);
      Complex lower = ipow(xv, fa.exp - 1);
      dw[f] = static_cast<double>(fa.exp) * lower;
      pw[f] = lower * xv;
    }
    suffix[r] = 1.0;
    for (int f = r - 1; f >= 0; --f) suffix[f] = suffix[f + 1] * pw[f];
    Complex prefix = term.coef;
    for (int f = 0; f < r; ++f) {
      jac(row, factors_[term.begin + f].var) += prefix * dw[f] * suffix[f + 1];
      prefix *= pw[f];
    }
    sum += prefix;
  }
  return sum;
}

void CompiledSystem::evaluate(const CVector& x, CVector& values) const {
  values.resize(size());
  for (int i = 0; i < size(); ++i) values(i) = value(i, x);
}

void CompiledSystem::evaluate(const CVector& x, CVector& values, CMatrix& jac) const {
  values.resize(size());
  jac.setZero(size(), nvars_);
  for (int i = 0; i < size(); ++i) values(i) = value_gradient(i, x, jac, i);
}

}  // namespace multiwit
