#pragma once

// Test-only reference computations, written without the library's algorithms.

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Key = std::vector<int>;

// Direct arithmetic for the fixture polynomials.
Complex cubic(Complex x, Complex y);
Complex octa_f(const CVector& p);
Complex octa_g(const CVector& p);
Complex octa_h(const CVector& p);

std::int64_t binomial(int n, int k);  // Pascal's triangle
std::int64_t multinomial(const Key& e);
std::int64_t segre(const std::map<Key, std::int64_t>& deg);

/// Coefficients of prod_j (sum_i d_ji s_i) modulo s_i^(n_i+1), keyed by exponent of s.
std::map<Key, std::int64_t> expand_forms(const std::vector<Key>& degrees, const Key& nvec);

/// Roots of c[0] + c[1] z + ... + c[d] z^d from the companion matrix.
std::vector<Complex> roots(const std::vector<Complex>& c);

/// Points of the plane cubic on a x + b y + c = 0 (b != 0).
std::vector<CVector> cubic_on_line(Complex a, Complex b, Complex c);

/// Central differences of a vector function.
CMatrix fd_jacobian(const std::function<CVector(const CVector&)>& f, const CVector& x, double h = 1e-6);

/// Rank from column-pivoted QR with a relative threshold.
int qr_rank(const CMatrix& m, double rel_tol);

/// Lattice points e in [nvec] with |e| = d and sum_{i in I} e_i <= dim(I) for each proper I (bitmask).
std::vector<Key> polymatroid_points(const Key& nvec, int d, const std::function<int(unsigned)>& dim);

bool same(const CVector& a, const CVector& b, double tol = 1e-6);

/// Every point of a matches some point of b and vice versa.
bool same_sets(const std::vector<CVector>& a, const std::vector<CVector>& b, double tol = 1e-6);

}  // namespace oracle
