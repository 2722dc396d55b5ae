#pragma once

#include <cstddef>
#include <vector>

#include "crnlap/digraph.hpp"

namespace crnlap {

/// Sorted list of vertex indices.
using VertexSet = std::vector<Vertex>;

/// Reaches of a graph with their exclusive / common / cabal partitions.
///
/// A reach is the set reachable from a source strong component of the
/// condensation; that source component is the reach's cabal. `exclusive[m]`
/// holds the vertices of reach m that lie in no other reach, `common[m]` the
/// rest. When `for_reversed` is set the sets describe the reversed graph,
/// i.e. they are the co-reaches and co-cabals of the original graph.
struct ReachStructure {
  std::vector<VertexSet> reaches;
  std::vector<VertexSet> exclusive;
  std::vector<VertexSet> common;
  std::vector<VertexSet> cabals;
  bool for_reversed = false;

  std::size_t size() const { return reaches.size(); }
};

/// Maximal strongly connected sets, each sorted, ordered by minimum vertex.
std::vector<VertexSet> strong_components(const DiGraph& g);

/// Maximal weakly connected sets, each sorted, ordered by minimum vertex.
std::vector<VertexSet> weak_components(const DiGraph& g);

/// Reaches ordered by minimum member.
ReachStructure reaches(const DiGraph& g);

/// Reaches of the reversed graph, flagged `for_reversed`.
ReachStructure co_reaches(const DiGraph& g);

/// True iff every weak component is a strong component.
bool is_csc(const DiGraph& g);

/// Dimension of the image of the incidence matrix: v minus #weak components.
std::size_t dim_image_incidence(const DiGraph& g);

}  // namespace crnlap
