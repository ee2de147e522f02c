#include "multiwit/sysio.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

namespace multiwit {

ParseError::ParseError(const std::string& what, int line, int column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { Ident, Number, Imag, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  double number = 0.0;
  int line = 1;
  int col = 1;
};

std::vector<Token> tokenize(const std::string& text, std::map<std::string, std::string>& meta) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      std::size_t end = text.find('\n', i);
      if (end == std::string::npos) end = text.size();
      std::string body = text.substr(i + 1, end - i - 1);
      std::size_t at = body.find_first_not_of(" \t");
      if (at != std::string::npos && body[at] == '@') {
        std::istringstream ss(body.substr(at + 1));
        std::string key, value;
        ss >> key;
        std::getline(ss, value);
        std::size_t v0 = value.find_first_not_of(" \t");
        meta[key] = v0 == std::string::npos ? "" : value.substr(v0);
      }
      advance(end - i);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      t.kind = Tok::Ident;
      t.text = text.substr(i, j - i);
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i;
      while (j < text.size() && (std::isdigit(static_cast<unsigned char>(text[j])) || text[j] == '.')) ++j;
      if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
        if (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
          j = k;
          while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        }
      }
      std::string num = text.substr(i, j - i);
      char* endp = nullptr;
      t.number = std::strtod(num.c_str(), &endp);
      if (endp != num.c_str() + num.size()) throw ParseError("malformed number '" + num + "'", line, col);
      t.kind = Tok::Number;
      if (j < text.size() && text[j] == 'i') {
        if (j + 1 < text.size() && (std::isalnum(static_cast<unsigned char>(text[j + 1])) || text[j + 1] == '_'))
          throw ParseError("malformed imaginary literal", line, col);
        t.kind = Tok::Imag;
        ++j;
      }
      t.text = text.substr(i, j - i);
      advance(j - i);
    } else if (std::string("+-*^()=;[]").find(c) != std::string::npos) {
      t.kind = Tok::Sym;
      t.text = std::string(1, c);
      advance(1);
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    out.push_back(t);
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

struct Node {
  enum Kind { Num, Var, Add, Sub, Mul, Pow, Neg } kind;
  Complex value = 0.0;
  std::string name;
  int exp = 0;
  int line = 0, col = 0;
  std::shared_ptr<Node> a, b;
};
using NodePtr = std::shared_ptr<Node>;

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }
  bool is_sym(const char* s) const { return peek().kind == Tok::Sym && peek().text == s; }
  void expect(const char* s) {
    if (!is_sym(s)) throw ParseError(std::string("expected '") + s + "'", peek().line, peek().col);
    ++pos_;
  }

  NodePtr expr() {
    NodePtr lhs;
    if (is_sym("-")) {
      Token t = take();
      lhs = std::make_shared<Node>(Node{Node::Neg, 0.0, "", 0, t.line, t.col, term(), nullptr});
    } else {
      if (is_sym("+")) take();
      lhs = term();
    }
    while (is_sym("+") || is_sym("-")) {
      Token t = take();
      NodePtr rhs = term();
      lhs = std::make_shared<Node>(Node{t.text == "+" ? Node::Add : Node::Sub, 0.0, "", 0, t.line, t.col, lhs, rhs});
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = factor();
    while (is_sym("*")) {
      Token t = take();
      NodePtr rhs = factor();
      lhs = std::make_shared<Node>(Node{Node::Mul, 0.0, "", 0, t.line, t.col, lhs, rhs});
    }
    return lhs;
  }

  NodePtr factor() {
    NodePtr base = atom();
    if (is_sym("^")) {
      Token t = take();
      Token e = take();
      if (e.kind != Tok::Number || e.number != std::floor(e.number) || e.number < 0 || e.text.find('.') != std::string::npos)
        throw ParseError("exponent must be a nonnegative integer", e.line, e.col);
      auto n = std::make_shared<Node>(Node{Node::Pow, 0.0, "", static_cast<int>(e.number), t.line, t.col, base, nullptr});
      return n;
    }
    return base;
  }

  NodePtr atom() {
    Token t = take();
    if (t.kind == Tok::Number)
      return std::make_shared<Node>(Node{Node::Num, Complex(t.number, 0.0), "", 0, t.line, t.col, nullptr, nullptr});
    if (t.kind == Tok::Imag)
      return std::make_shared<Node>(Node{Node::Num, Complex(0.0, t.number), "", 0, t.line, t.col, nullptr, nullptr});
    if (t.kind == Tok::Ident)
      return std::make_shared<Node>(Node{Node::Var, 0.0, t.text, 0, t.line, t.col, nullptr, nullptr});
    if (t.kind == Tok::Sym && t.text == "(") {
      NodePtr inner = expr();
      expect(")");
      return inner;
    }
    throw ParseError(t.kind == Tok::End ? "unexpected end of input" : "unexpected token '" + t.text + "'", t.line,
                     t.col);
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

Polynomial lower(const NodePtr& n, const std::map<std::string, int>& vars, int nvars) {
  switch (n->kind) {
    case Node::Num:
      return Polynomial::constant(nvars, n->value);
    case Node::Var: {
      auto it = vars.find(n->name);
      if (it == vars.end()) throw ParseError("undeclared identifier " + n->name, n->line, n->col);
      return Polynomial::variable(nvars, it->second);
    }
    case Node::Add:
      return lower(n->a, vars, nvars) + lower(n->b, vars, nvars);
    case Node::Sub:
      return lower(n->a, vars, nvars) - lower(n->b, vars, nvars);
    case Node::Mul:
      return lower(n->a, vars, nvars) * lower(n->b, vars, nvars);
    case Node::Pow:
      return lower(n->a, vars, nvars).pow(n->exp);
    case Node::Neg:
      return -lower(n->a, vars, nvars);
  }
  return Polynomial(nvars);
}

}  // namespace

SystemDocument parse_system(const std::string& text) {
  SystemDocument doc;
  Parser p(tokenize(text, doc.metadata));
  std::vector<std::vector<int>> groups;
  std::vector<std::string> names, gnames;
  std::map<std::string, int> vars;
  std::set<std::string> group_set;
  std::vector<std::pair<std::string, NodePtr>> defs;
  std::set<std::string> def_names;

  while (p.peek().kind != Tok::End) {
    Token head = p.take();
    if (head.kind != Tok::Ident) throw ParseError("expected a declaration", head.line, head.col);
    if (head.text == "group") {
      Token name = p.take();
      if (name.kind != Tok::Ident) throw ParseError("expected a group name", name.line, name.col);
      if (!group_set.insert(name.text).second)
        throw ParseError("duplicate group " + name.text, name.line, name.col);
      std::vector<std::string> vnames;
      if (p.is_sym("[")) {
        p.take();
        Token count = p.take();
        if (count.kind != Tok::Number || count.number < 1 || count.number != std::floor(count.number))
          throw ParseError("group size must be a positive integer", count.line, count.col);
        p.expect("]");
        for (int j = 1; j <= static_cast<int>(count.number); ++j) vnames.push_back(name.text + std::to_string(j));
      } else {
        vnames.push_back(name.text);
      }
      p.expect(";");
      std::vector<int> idx;
      for (const auto& v : vnames) {
        if (vars.count(v)) throw ParseError("variable " + v + " declared twice", name.line, name.col);
        vars[v] = static_cast<int>(names.size());
        idx.push_back(static_cast<int>(names.size()));
        names.push_back(v);
      }
      groups.push_back(idx);
      gnames.push_back(name.text);
    } else {
      p.expect("=");
      NodePtr e = p.expr();
      p.expect(";");
      if (!def_names.insert(head.text).second)
        throw ParseError("duplicate polynomial " + head.text, head.line, head.col);
      defs.emplace_back(head.text, e);
    }
  }
  if (groups.empty()) throw ParseError("no variable groups declared", 1, 1);
  if (defs.empty()) throw ParseError("no polynomials declared", 1, 1);
  for (const auto& [name, node] : defs)
    if (vars.count(name)) throw ParseError("polynomial name clashes with variable " + name, node->line, node->col);

  doc.grouping = VariableGrouping(groups, names, gnames);
  int nvars = static_cast<int>(names.size());
  std::vector<Polynomial> polys;
  for (const auto& [name, node] : defs) {
    polys.push_back(lower(node, vars, nvars));
    doc.poly_names.push_back(name);
  }
  doc.system = PolySystem(polys, doc.grouping);
  return doc;
}

std::string format_complex(Complex c) {
  char buf[128];
  if (c.imag() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.17g", c.real());
    return buf;
  }
  if (c.real() == 0.0) {
    std::snprintf(buf, sizeof buf, "(%.17gi)", c.imag());
    return buf;
  }
  std::snprintf(buf, sizeof buf, "(%.17g%s%.17gi)", c.real(), c.imag() < 0 ? "-" : "+", std::abs(c.imag()));
  return buf;
}

std::string print_system(const SystemDocument& doc) {
  std::ostringstream out;
  const auto& g = doc.grouping;
  for (int i = 0; i < g.num_groups(); ++i) {
    const auto& vars = g.group(i);
    const std::string& gname = g.group_names()[i];
    bool single = vars.size() == 1 && g.names()[vars[0]] == gname;
    if (single)
      out << "group " << gname << ";\n";
    else
      out << "group " << gname << "[" << vars.size() << "];\n";
  }
  for (int k = 0; k < doc.system.size(); ++k) {
    std::string name = k < static_cast<int>(doc.poly_names.size()) ? doc.poly_names[k] : "f" + std::to_string(k + 1);
    out << name << " = ";
    const auto& p = doc.system[k];
    if (p.is_zero()) out << "0";
    bool first = true;
    for (const auto& [e, c] : p.terms()) {
      Complex coef = c;
      if (!first) {
        if (coef.imag() == 0.0 && coef.real() < 0) {
          out << " - ";
          coef = -coef;
        } else {
          out << " + ";
        }
      }
      first = false;
      out << format_complex(coef);
      for (int j = 0; j < p.num_vars(); ++j) {
        if (e[j] == 0) continue;
        out << "*" << g.names()[j];
        if (e[j] > 1) out << "^" << e[j];
      }
    }
    out << ";\n";
  }
  return out.str();
}

// ------------------------------------------------------------------ random

namespace {
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace

std::uint64_t RandomSource::next_u64() {
  std::uint64_t key = mix64(seed_ ^ mix64(stream_ ^ 0xD1B54A32D192ED03ULL));
  return mix64(key + 0x9E3779B97F4A7C15ULL * (counter_++ + 1));
}

double RandomSource::uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

Complex RandomSource::unit_complex() {
  double theta = 2.0 * std::numbers::pi * uniform();
  return {std::cos(theta), std::sin(theta)};
}

Complex RandomSource::gaussian_complex() {
  double r = std::sqrt(-std::log(uniform()));
  double theta = 2.0 * std::numbers::pi * uniform();
  return {r * std::cos(theta), r * std::sin(theta)};
}

RandomSource RandomSource::split(std::uint64_t tag) const {
  return RandomSource(seed_, mix64(stream_ * 0x2545F4914F6CDD1DULL + mix64(tag + counter_)));
}

Complex draw(RandomSource& rs, DrawKind kind) {
  return kind == DrawKind::UnitComplex ? rs.unit_complex() : rs.gaussian_complex();
}

// ----------------------------------------------------------------- archive

int WitnessArchive::num_vars() const {
  int n = 0;
  for (const auto& g : groups) n += static_cast<int>(g.variables.size());
  return n;
}

namespace {
void write_vector(std::ostringstream& out, const CVector& v) {
  // "-0" would read back as the integer 0
  auto num = [&](double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out << (x == 0.0 && std::signbit(x) ? "-0.0" : buf);
  };
  out << "[";
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (j) out << ",";
    num(v(j).real());
    out << ",";
    num(v(j).imag());
  }
  out << "]";
}

CVector read_vector(const nlohmann::json& arr, int expected, const std::string& what) {
  if (!arr.is_array()) throw ArchiveError(what + ": expected an array");
  if (static_cast<int>(arr.size()) != 2 * expected)
    throw ArchiveError(what + ": arity mismatch (" + std::to_string(arr.size()) + " numbers, expected " +
                       std::to_string(2 * expected) + ")");
  CVector v(expected);
  for (int j = 0; j < expected; ++j) v(j) = Complex(arr[2 * j].get<double>(), arr[2 * j + 1].get<double>());
  return v;
}
}  // namespace

std::string save_witness(const WitnessArchive& a) {
  std::ostringstream out;
  out << "{\"version\":" << a.version << ",\"seed\":" << a.seed << ",\"groups\":[";
  for (std::size_t g = 0; g < a.groups.size(); ++g) {
    if (g) out << ",";
    nlohmann::json jg = {{"name", a.groups[g].name}, {"variables", a.groups[g].variables}};
    out << jg.dump();
  }
  out << "],\"system\":" << nlohmann::json(a.system).dump() << ",\"slices\":{";
  bool first = true;
  for (const auto& [name, forms] : a.slices) {
    if (!first) out << ",";
    first = false;
    out << nlohmann::json(name).dump() << ":[";
    for (std::size_t i = 0; i < forms.size(); ++i) {
      if (i) out << ",";
      write_vector(out, forms[i]);
    }
    out << "]";
  }
  out << "},\"witness\":{";
  first = true;
  for (const auto& [e, pts] : a.witness) {
    if (!first) out << ",";
    first = false;
    out << "\"" << comma_string(e) << "\":[";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) out << ",";
      write_vector(out, pts[i]);
    }
    out << "]";
  }
  out << "}}\n";
  return out.str();
}

WitnessArchive load_witness(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ArchiveError(std::string("truncated or malformed archive: ") + e.what());
  }
  static const std::set<std::string> fields{"version", "seed", "groups", "system", "slices", "witness"};
  if (!j.is_object()) throw ArchiveError("archive must be a JSON object");
  for (const auto& f : fields)
    if (!j.contains(f)) throw ArchiveError("archive missing field '" + f + "'");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!fields.count(it.key())) throw ArchiveError("unexpected archive field '" + it.key() + "'");
  WitnessArchive a;
  try {
    a.version = j["version"].get<int>();
    if (a.version != 1) throw ArchiveError("unsupported archive version " + std::to_string(a.version));
    a.seed = j["seed"].get<std::uint64_t>();
    for (const auto& g : j["groups"])
      a.groups.push_back({g.at("name").get<std::string>(), g.at("variables").get<std::vector<std::string>>()});
    a.system = j["system"].get<std::string>();
    int n = a.num_vars();
    for (auto it = j["slices"].begin(); it != j["slices"].end(); ++it) {
      auto& forms = a.slices[it.key()];
      for (const auto& f : it.value()) forms.push_back(read_vector(f, n + 1, "slice form"));
    }
    for (auto it = j["witness"].begin(); it != j["witness"].end(); ++it) {
      MultiIndex e = parse_key(it.key());
      if (e.size() != a.groups.size()) throw ArchiveError("witness key length does not match groups");
      auto& pts = a.witness[e];
      for (const auto& p : it.value()) pts.push_back(read_vector(p, n, "witness point"));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ArchiveError(std::string("malformed archive: ") + e.what());
  } catch (const AlgebraError& e) {
    throw ArchiveError(std::string("malformed archive: ") + e.what());
  }
  return a;
}

}  // namespace multiwit
