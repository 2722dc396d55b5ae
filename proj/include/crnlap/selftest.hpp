#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "crnlap/crn.hpp"
#include "crnlap/digraph.hpp"

namespace crnlap {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 20240917;

/// Random weighted multigraph on `v` vertices with `e` edges, no self-loops.
DiGraph random_digraph(Rng& rng, std::size_t v, std::size_t e);

/// Random network: up to 4 species, 2-7 complexes with entries in {0,1,2},
/// random edges with rates in [0.2, 5].
CrnSystem random_network(Rng& rng);

/// Random CSC network with classical deficiency zero (hence delta_L = 0),
/// assembled from strongly connected blocks (cycles plus chords) over
/// complexes with small integer stoichiometry. Candidates are drawn until the
/// exact deficiency test passes.
CrnSystem random_csc_zero_deficiency_network(Rng& rng);

/// Random strictly positive state with log-uniform entries in [e^-2, e^2].
StateVector random_positive_state(Rng& rng, std::size_t c);

struct PropertyResult {
  std::string suite;
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::size_t skipped = 0;  // cases whose trajectory blew up before t_end
  std::string first_failure;
  double seconds = 0.0;

  /// At most a tenth of the cases may be skipped.
  bool passed() const { return cases > 0 && failures == 0 && 10 * skipped <= cases; }
};

struct SelftestOptions {
  std::uint64_t seed = kDefaultSeed;
  /// Cases per structural and dynamics property; networks per equilibrium
  /// property is a tenth of this.
  std::size_t cases = 1000;
  /// Suites to run ("structure", "equilibrium", "dynamics"); all when empty.
  std::vector<std::string> suites;
  /// Called after each property finishes.
  std::function<void(const PropertyResult&)> on_result;
};

std::vector<std::string> selftest_suite_names();

/// Runs the randomized property checks. Throws ValidationError for an
/// unknown suite name.
std::vector<PropertyResult> run_selftest(const SelftestOptions& opts = {});

std::vector<PropertyResult> run_structure_properties(std::uint64_t seed, std::size_t cases);
std::vector<PropertyResult> run_equilibrium_properties(std::uint64_t seed, std::size_t networks);
std::vector<PropertyResult> run_dynamics_properties(std::uint64_t seed, std::size_t cases);

}  // namespace crnlap
