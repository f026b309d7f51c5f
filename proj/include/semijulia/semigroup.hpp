#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "semijulia/cloud.hpp"
#include "semijulia/ratmap.hpp"

namespace semijulia {

// Ordered generators h_0, ..., h_{m-1} of G = <h_0, ..., h_{m-1}>.
class GeneratorSystem {
 public:
  explicit GeneratorSystem(std::vector<RationalMap> generators);
  GeneratorSystem(std::initializer_list<RationalMap> generators)
      : GeneratorSystem(std::vector<RationalMap>(generators)) {}

  int size() const { return static_cast<int>(gens_.size()); }
  const RationalMap& operator[](int j) const { return gens_[j]; }
  const std::vector<RationalMap>& generators() const { return gens_; }
  int max_degree() const;
  int total_degree() const;  // sum of generator degrees
  bool all_polynomial() const;

 private:
  std::vector<RationalMap> gens_;
};

// Finite symbol string. Symbols are 0-based generator indices; the first
// symbol is applied first, so word_map(w) = h_{w[k-1]} o ... o h_{w[0]}.
class Word {
 public:
  Word() = default;
  Word(std::vector<int> symbols) : symbols_(std::move(symbols)) {}  // NOLINT
  Word(std::initializer_list<int> symbols) : symbols_(symbols) {}

  // pattern repeated until `length` symbols.
  static Word periodic(const std::vector<int>& pattern, int length);
  // Base-m digits of `index`, most significant first, `length` symbols.
  static Word from_index(int m, int length, std::uint64_t index);

  int length() const { return static_cast<int>(symbols_.size()); }
  bool empty() const { return symbols_.empty(); }
  int operator[](int i) const { return symbols_[i]; }
  const std::vector<int>& symbols() const { return symbols_; }
  Word shifted(int n = 1) const;  // drops the first n symbols
  Word concat(const Word& o) const;
  void validate(int m) const;

  friend bool operator==(const Word&, const Word&) = default;

 private:
  std::vector<int> symbols_;
};

// Fiber orbit y, q_1(y), ..., q_n(y) with cumulative degrees d_0 = 1, d_n.
// Degrees are held as doubles (exact below 2^53).
struct OrbitRecord {
  std::vector<ExtComplex> points;
  std::vector<double> degrees;
};

RationalMap word_map(const GeneratorSystem& G, const Word& w, int cap = Tolerances::degree_cap);

OrbitRecord skew_orbit(const GeneratorSystem& G, const Word& x, const ExtComplex& y);

// Critical values of every generator together with their images under all
// words of length <= L (a truncation of the postcritical set), deduplicated.
PointCloud postcritical_sample(const GeneratorSystem& G, int L);

// Superset of the exceptional set: points whose backward orbit under G can
// have at most two points.
std::vector<ExtComplex> exceptional_candidates(const GeneratorSystem& G);

bool near_any(const ExtComplex& z, const std::vector<ExtComplex>& set, double tol);

}  // namespace semijulia
