#include "multiwit/fixtures.hpp"

#include <functional>
#include <map>

namespace multiwit {

namespace {

const char* kCubic =
    "# @dim 1\n"
    "group x;\n"
    "group y;\n"
    "C = y^2 - 2*x*y - x^3 + x;\n";

const char* kOctaF = "f = 1 + 2*x + 3*y^2 + 4*z^3 + 5*w^4;\n";
const char* kOctaG = "g = 1 + 2*x + 3*y + 5*z + 7*w;\n";
const char* kOctaH =
    "h = 1 + 2*x + 3*y + 5*z + 7*w + 11*x*y + 13*x*z + 17*x*w + 19*y*z + 23*y*w + 29*z*w\n"
    "    + 31*x*y*z + 37*x*y*w + 41*x*z*w + 43*y*z*w + 47*x*y*z*w;\n";
const char* kOctaGroups = "# @dim 2\ngroup x;\ngroup y;\ngroup z;\ngroup w;\n";

const char* kHyperboloid =
    "# @dim 4\n"
    "group l[4];\n"
    "group a[3];\n"
    "group b[3];\n"
    "group c[3];\n"
    "la1 = l1*a1 + l2*a2 - a3;\n"
    "la2 = l3*a1 + l4*a2 - 1;\n"
    "lb1 = l1*b1 + l2*b2 - b3;\n"
    "lb2 = l3*b1 + l4*b2 - 1;\n"
    "lc1 = l1*c1 + l2*c2 - c3;\n"
    "lc2 = l3*c1 + l4*c2 - 1;\n"
    "ha = a1^2 + a2^2 - a3^2 - 1;\n"
    "hb = b1^2 + b2^2 - b3^2 - 1;\n"
    "hc = c1^2 + c2^2 - c3^2 - 1;\n";

const char* kProduct =
    "# @dim 3\n"
    "group y1[3];\n"
    "group y2[3];\n"
    "group y3[3];\n"
    "p1 = y11;\n"
    "p2 = y12;\n"
    "p3 = y13;\n"
    "q1 = 19*y22 + 46*y23;\n"
    "q2 = 19*y32 + 46*y33 + 34;\n"
    "q3 = 243*y23*y31 - 243*y21*y33 - 306*y21 + 1020*y23 - 342*y31 + 1194*y33 + 68;\n";

const char* kTwoLines =
    "# @dim 1\n"
    "group x;\n"
    "group y;\n"
    "L = (x + y - 1)*(x - y);\n";

std::string pentad_text() {
  std::string s = "# @dim 8\ngroup u[4];\ngroup ub[4];\n";
  for (int k = 1; k <= 4; ++k) {
    std::string t = "t" + std::to_string(k), tb = "s" + std::to_string(k);
    s += "group " + t + "[4];\ngroup " + tb + "[4];\n";
  }
  for (int k = 1; k <= 4; ++k) {
    std::string t = "t" + std::to_string(k), tb = "s" + std::to_string(k), K = std::to_string(k);
    for (int j = 1; j <= 4; ++j) {
      std::string J = std::to_string(j);
      s += "r" + K + J + " = " + t + J + "*" + tb + J + " - 1;\n";
    }
    s += "a" + K + " = -(u1 + u2 + u4) + u1*" + t + "1 + u2*" + t + "2 + u4*" + t + "4;\n";
    s += "b" + K + " = -(ub1 + ub2 + ub4) + ub1*" + tb + "1 + ub2*" + tb + "2 + ub4*" + tb + "4;\n";
    s += "c" + K + " = 1 + u1*" + t + "1 + u3*" + t + "3 - (u1 + u3 + 1)*" + t + "4;\n";
    s += "d" + K + " = 1 + ub1*" + tb + "1 + ub3*" + tb + "3 - (ub1 + ub3 + 1)*" + tb + "4;\n";
  }
  return s;
}

Polynomial determinant(std::vector<std::vector<Polynomial>> m, int nvars) {
  int n = static_cast<int>(m.size());
  if (n == 1) return m[0][0];
  Polynomial det(nvars);
  for (int c = 0; c < n; ++c) {
    if (m[0][c].is_zero()) continue;
    std::vector<std::vector<Polynomial>> minor;
    for (int r = 1; r < n; ++r) {
      std::vector<Polynomial> row;
      for (int cc = 0; cc < n; ++cc)
        if (cc != c) row.push_back(m[r][cc]);
      minor.push_back(row);
    }
    Polynomial term = m[0][c] * determinant(minor, nvars);
    det = (c % 2 == 0) ? det + term : det - term;
  }
  return det;
}

std::string richardson_text(const std::vector<std::pair<int, int>>& which, const std::string& dim) {
  std::vector<std::vector<int>> groups = {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}};
  std::vector<std::string> names, gnames = {"y1", "y2", "y3"};
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) names.push_back("y" + std::to_string(i) + std::to_string(j));
  VariableGrouping grouping(groups, names, gnames);
  std::vector<Polynomial> polys;
  std::vector<std::string> pnames;
  for (auto [i, j] : which) {
    polys.push_back(richardson_minor(i, j));
    pnames.push_back("f" + std::to_string(i) + std::to_string(j));
  }
  SystemDocument doc{grouping, PolySystem(polys, grouping), pnames, {}};
  return "# @dim " + dim + "\n" + print_system(doc);
}

}  // namespace

Polynomial richardson_minor(int i, int j, std::uint64_t seed) {
  if (i < 1 || i > 2 || j < 1 || j > 6) throw AlgebraError("richardson_minor: index out of range");
  const int n = 9;
  RandomSource rs(seed, 0x52494348ULL);
  // N_1 then N_2, each 6x2, row-major
  CMatrix N[2] = {CMatrix(6, 2), CMatrix(6, 2)};
  for (auto& mat : N)
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 2; ++c) mat(r, c) = rs.gaussian_complex();
  std::vector<std::vector<Polynomial>> full(6, std::vector<Polynomial>(5, Polynomial(n)));
  for (int r = 0; r < 3; ++r) full[r][r] = Polynomial::constant(n, 1.0);
  // rows 4..6 of C are M^T: entry (3+a, b) = y_{b+1, a+1}
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) full[3 + a][b] = Polynomial::variable(n, 3 * b + a);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 2; ++c) full[r][3 + c] = Polynomial::constant(n, N[i - 1](r, c));
  full.erase(full.begin() + (j - 1));
  return determinant(full, n);
}

std::vector<std::string> fixture_names(bool extended) {
  std::vector<std::string> names = {"cubic",       "octahedron-g", "octahedron-h", "richardson",
                                    "richardson-four", "hyperboloid", "product",      "two-lines"};
  if (extended) names.push_back("pentad");
  return names;
}

std::string fixture_text(const std::string& name) {
  if (name == "cubic") return kCubic;
  if (name == "octahedron-g") return std::string(kOctaGroups) + kOctaF + kOctaG;
  if (name == "octahedron-h") return std::string(kOctaGroups) + kOctaF + kOctaH;
  if (name == "richardson") {
    std::vector<std::pair<int, int>> all;
    for (int i = 1; i <= 2; ++i)
      for (int j = 1; j <= 6; ++j) all.push_back({i, j});
    return richardson_text(all, "5");
  }
  if (name == "richardson-four") return richardson_text({{1, 3}, {1, 5}, {2, 4}, {2, 6}}, "5");
  if (name == "hyperboloid") return kHyperboloid;
  if (name == "product") return kProduct;
  if (name == "two-lines") return kTwoLines;
  if (name == "pentad") return pentad_text();
  throw std::invalid_argument("unknown fixture: " + name);
}

SystemDocument load_fixture(const std::string& name) { return parse_system(fixture_text(name)); }

std::vector<MultiIndex> class_fixture_degrees() { return std::vector<MultiIndex>(6, MultiIndex{1, 2, 3}); }

}  // namespace multiwit
