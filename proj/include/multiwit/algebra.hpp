#pragma once

#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace multiwit {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using MultiIndex = std::vector<int>;
using Exponent = std::vector<int>;

inline constexpr double kDefaultRankTol = 1e-8;

class AlgebraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Graded lexicographic order, largest total degree first.
struct GradedLex {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

int total(const MultiIndex& e);
std::string key_string(const MultiIndex& e);
std::string comma_string(const MultiIndex& e);
MultiIndex parse_key(const std::string& s);

/// All e with 0 <= e_i <= bounds_i and |e| = sum.
std::vector<MultiIndex> multi_indices(const MultiIndex& bounds, int sum);

/**
 * Partition of the variables x_0..x_{n-1} into groups.
 *
 * Groups hold variable indices, so merged groups need not be contiguous.
 */
class VariableGrouping {
 public:
  VariableGrouping() = default;
  explicit VariableGrouping(const std::vector<int>& sizes);
  VariableGrouping(std::vector<std::vector<int>> groups, std::vector<std::string> names,
                   std::vector<std::string> group_names = {});

  int num_groups() const { return static_cast<int>(groups_.size()); }
  int num_vars() const { return static_cast<int>(names_.size()); }
  const std::vector<int>& group(int i) const { return groups_.at(i); }
  int group_size(int i) const { return static_cast<int>(groups_.at(i).size()); }
  std::vector<int> sizes() const;
  int group_of(int var) const { return owner_.at(var); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::string>& group_names() const { return group_names_; }

  /// Merge the listed groups into one placed at the smallest listed position.
  VariableGrouping merge(std::vector<int> which) const;
  /// Split group g into (first_vars, rest) placed at positions g and g+1.
  VariableGrouping split(int g, const std::vector<int>& first_vars) const;
  /// Single group holding every variable.
  VariableGrouping ungrouped() const;
  /// Groups restricted to the listed groups, variables renumbered 0.. in order.
  VariableGrouping restrict_to(const std::vector<int>& which) const;

  bool operator==(const VariableGrouping& o) const {
    return groups_ == o.groups_ && names_ == o.names_;
  }

 private:
  std::vector<std::vector<int>> groups_;
  std::vector<std::string> names_;
  std::vector<std::string> group_names_;
  std::vector<int> owner_;
};

class Polynomial {
 public:
  using TermMap = std::map<Exponent, Complex, GradedLex>;

  Polynomial() = default;
  explicit Polynomial(int nvars) : nvars_(nvars) {}

  static Polynomial constant(int nvars, Complex c);
  static Polynomial variable(int nvars, int index);
  /// c + sum_j linear_j x_j
  static Polynomial affine(const CVector& linear, Complex c);

  int num_vars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(const Exponent& exponent, Complex c);
  Complex coefficient(const Exponent& exponent) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial scaled(Complex c) const;
  Polynomial pow(int k) const;

  Complex evaluate(const CVector& x) const;
  int total_degree() const;
  int degree_in(const std::vector<int>& vars) const;
  /// Substitute values for the listed variables; the rest are renumbered in order.
  Polynomial substitute(const std::vector<int>& vars, const CVector& values) const;
  /// Reindex into a space of nvars variables, variable j moving to map[j].
  Polynomial remap(int nvars, const std::vector<int>& map) const;

  bool operator==(const Polynomial& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

 private:
  int nvars_ = 0;
  TermMap terms_;
};

class PolySystem {
 public:
  PolySystem() = default;
  PolySystem(std::vector<Polynomial> polys, VariableGrouping grouping);

  int size() const { return static_cast<int>(polys_.size()); }
  int num_vars() const { return grouping_.num_vars(); }
  const std::vector<Polynomial>& polys() const { return polys_; }
  const Polynomial& operator[](int i) const { return polys_.at(i); }
  const VariableGrouping& grouping() const { return grouping_; }

  PolySystem with_grouping(VariableGrouping g) const;
  PolySystem appended(const std::vector<Polynomial>& extra) const;

 private:
  std::vector<Polynomial> polys_;
  VariableGrouping grouping_;
};

CVector evaluate(const PolySystem& system, const CVector& point);
CMatrix jacobian(const PolySystem& system, const CVector& point, const std::vector<int>& omit_groups = {});

std::vector<double> singular_values(const CMatrix& m);
int numerical_rank(const CMatrix& m, double rel_tol = kDefaultRankTol);

/// Append one homogenizing coordinate per group (indices n..n+k-1), padding each term to `degrees`.
std::pair<Polynomial, VariableGrouping> homogenize(const Polynomial& p, const VariableGrouping& grouping,
                                                   const MultiIndex& degrees);
/// Set the first coordinate of each group to 1 and drop it.
std::pair<Polynomial, VariableGrouping> dehomogenize(const Polynomial& p, const VariableGrouping& grouping);

MultiIndex multidegree_of(const Polynomial& p, const VariableGrouping& grouping);

/**
 * Flattened polynomial list for fast value + gradient evaluation.
 */
class CompiledSystem {
 public:
  CompiledSystem() = default;
  CompiledSystem(const std::vector<Polynomial>& polys, int nvars);

  int size() const { return static_cast<int>(polys_.size()); }
  int num_vars() const { return nvars_; }

  Complex value(int i, const CVector& x) const;
  /// Value of poly i; gradient written to row `row` of jac.
  Complex value_gradient(int i, const CVector& x, CMatrix& jac, int row) const;
  void evaluate(const CVector& x, CVector& values) const;
  void evaluate(const CVector& x, CVector& values, CMatrix& jac) const;

 private:
  struct Factor {
    int var;
    int exp;
  };
  struct Term {
    Complex coef;
    int begin;
    int end;
  };
  struct Poly {
    int begin;
    int end;
  };
  int nvars_ = 0;
  std::vector<Poly> polys_;
  std::vector<Term> terms_;
  std::vector<Factor> factors_;
};

}  // namespace multiwit
