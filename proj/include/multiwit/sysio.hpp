#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "multiwit/algebra.hpp"

namespace multiwit {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class ArchiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SystemDocument {
  VariableGrouping grouping;
  PolySystem system;
  std::vector<std::string> poly_names;
  std::map<std::string, std::string> metadata;
};

/**
 * Grammar:
 *   group <name> ;            one variable called <name>
 *   group <name> [ <int> ] ;  variables <name>1 .. <name>N
 *   <id> = <expr> ;
 * `# @key value` lines fill the metadata, other `#` text is a comment.
 */
SystemDocument parse_system(const std::string& text);
std::string print_system(const SystemDocument& doc);
std::string format_complex(Complex c);

/// Counter-based random stream; the value at (seed, stream, index) never depends on call history.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed = 0, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64();
  /// Uniform on the open interval (0,1).
  double uniform();
  Complex unit_complex();
  Complex gaussian_complex();
  /// Independent child stream, determined by (seed, stream, tag).
  RandomSource split(std::uint64_t tag) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

enum class DrawKind { UnitComplex, GaussianComplex };
Complex draw(RandomSource& rs, DrawKind kind);

struct ArchiveGroup {
  std::string name;
  std::vector<std::string> variables;
};

/// A slice form is stored as nvars linear coefficients followed by the constant.
struct WitnessArchive {
  int version = 1;
  std::uint64_t seed = 0;
  std::vector<ArchiveGroup> groups;
  std::string system;
  std::map<std::string, std::vector<CVector>> slices;
  std::map<MultiIndex, std::vector<CVector>> witness;

  int num_vars() const;
};

std::string save_witness(const WitnessArchive& archive);
WitnessArchive load_witness(const std::string& text);

}  // namespace multiwit
