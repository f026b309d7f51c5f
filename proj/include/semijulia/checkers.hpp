#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semijulia/cloud.hpp"
#include "semijulia/exec.hpp"
#include "semijulia/semigroup.hpp"

namespace semijulia {

// Open region U: a Euclidean or chordal disk, or a simple polygon.
class RegionSpec {
 public:
  enum class Kind { Disk, Polygon };
  enum class Metric { Euclidean, Chordal };

  static RegionSpec disk(cplx center, double radius, Metric metric = Metric::Euclidean);
  static RegionSpec chordal_disk(const ExtComplex& center, double radius);
  static RegionSpec polygon(std::vector<cplx> vertices);

  Kind kind() const { return kind_; }
  Metric metric() const { return metric_; }
  const ExtComplex& center() const { return center_; }
  double radius() const { return radius_; }
  const std::vector<cplx>& vertices() const { return vertices_; }

  // Membership with a relative slack: slack > 0 grows U, slack < 0 shrinks it.
  bool contains(const ExtComplex& z, double slack = 0.0) const;

  // Sampling chart: U is bounded in the plane (inverted == false) or in the
  // chart w = 1/z. `box` encloses U in that chart.
  bool inverted() const { return inverted_; }
  const Box& chart_box() const { return box_; }
  ExtComplex from_chart(cplx w) const;
  cplx to_chart(const ExtComplex& z) const;  // precondition: representable

  std::string describe() const;

 private:
  RegionSpec() = default;

  Kind kind_ = Kind::Disk;
  Metric metric_ = Metric::Euclidean;
  ExtComplex center_;
  double radius_ = 1.0;
  std::vector<cplx> vertices_;
  bool inverted_ = false;
  Box box_;
};

struct OscWitness {
  int i = 0;  // generator index (0-based)
  int j = -1;  // second generator for disjointness witnesses, -1 otherwise
  ExtComplex sample;  // z in U (containment) or w (disjointness)
  ExtComplex image;   // offending preimage (containment) or h_i(w)
};

struct OscReport {
  bool holds = true;
  std::vector<OscWitness> containment_violations;
  std::vector<OscWitness> disjointness_violations;
  std::size_t samples_used = 0;
  std::size_t containment_violation_count = 0;
  std::size_t disjointness_violation_count = 0;
};

struct OscOptions {
  std::size_t max_witnesses = 32;
  // Witnesses of an earlier run; those that still violate are kept, so a
  // falsification persists under refinement.
  const OscReport* prior = nullptr;
};

// Sampled check of h_j^{-1}(U) subset U and pairwise disjointness of the
// h_j^{-1}(U). Containment uses a grid_density^2 grid over U's chart box
// (points outside U skipped); disjointness uses the same density over a
// box enclosing U and every sampled preimage.
OscReport check_osc(const GeneratorSystem& G, const RegionSpec& U, int grid_density, const OscOptions& opts = {},
                    Exec exec = Exec::Parallel);

enum class HyperbolicVerdict { HyperbolicEvidence, NotHyperbolic, Inconclusive };
std::string to_string(HyperbolicVerdict v);

struct HyperbolicityReport {
  double min_postcritical_julia_distance = 0.0;  // +inf if no critical values
  int word_length_used = 0;
  std::size_t postcritical_points = 0;
  double threshold = 0.0;
  HyperbolicVerdict verdict = HyperbolicVerdict::Inconclusive;
};

HyperbolicityReport check_hyperbolic(const GeneratorSystem& G, int L, const PointCloud& julia, double threshold,
                                     Exec exec = Exec::Parallel);

enum class SemiHypVerdict { BoundedUpToL, UnboundedTrend, Inconclusive };
std::string to_string(SemiHypVerdict v);

struct SemiHypReport {
  double delta = 0.0;
  int max_word_length = 0;
  int max_branch_degree_observed = 0;
  std::map<int, int> degree_histogram;  // word length -> max cluster multiplicity
  SemiHypVerdict verdict = SemiHypVerdict::Inconclusive;
  int n_cap = 0;
  std::size_t samples_used = 0;
  bool budget_exhausted = false;
};

struct SemiHypOptions {
  std::uint64_t pair_budget = 400'000'000;  // segment tests per sample
};

// Inverse-branch degrees over B(z, delta): for every sample z and word w of
// length <= L, the preimages of z under g_w are clustered (two preimages
// join when the straight segment between them maps into B(z, 2 delta) at the
// 16 points t = k/16, k = 1..16) and the largest cluster multiplicity is
// recorded.
SemiHypReport check_semihyperbolic(const GeneratorSystem& G, double delta, int L, const PointCloud& samples, int n_cap,
                                   const SemiHypOptions& opts = {}, Exec exec = Exec::Parallel);

// Largest cluster multiplicity for one word and base point (the per-word
// kernel of check_semihyperbolic, exposed for direct checks).
int max_cluster_multiplicity(const GeneratorSystem& G, const Word& w, const ExtComplex& z, double delta);

}  // namespace semijulia
