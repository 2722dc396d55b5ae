#include "crnlap/reach.hpp"

#include <algorithm>
#include <numeric>

namespace crnlap {

namespace {

constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);

// Iterative Tarjan; returns the component id of every vertex.
std::vector<std::size_t> tarjan_component_ids(const std::vector<std::vector<Vertex>>& adjacency,
                                              std::size_t& component_count) {
  const std::size_t n = adjacency.size();
  std::vector<std::size_t> index(n, kUnvisited);
  std::vector<std::size_t> lowlink(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> component(n, kUnvisited);
  std::vector<Vertex> stack;
  std::size_t next_index = 0;
  component_count = 0;

  struct Frame {
    Vertex vertex;
    std::size_t next_child;
  };
  std::vector<Frame> call_stack;

  for (Vertex root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call_stack.push_back({root, 0});
    index[root] = lowlink[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;

    while (!call_stack.empty()) {
      Frame& frame = call_stack.back();
      const Vertex u = frame.vertex;
      if (frame.next_child < adjacency[u].size()) {
        const Vertex w = adjacency[u][frame.next_child++];
        if (index[w] == kUnvisited) {
          index[w] = lowlink[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call_stack.push_back({w, 0});
        } else if (on_stack[w]) {
          lowlink[u] = std::min(lowlink[u], index[w]);
        }
        continue;
      }
      if (lowlink[u] == index[u]) {
        Vertex w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component[w] = component_count;
        } while (w != u);
        ++component_count;
      }
      call_stack.pop_back();
      if (!call_stack.empty()) {
        const Vertex parent = call_stack.back().vertex;
        lowlink[parent] = std::min(lowlink[parent], lowlink[u]);
      }
    }
  }
  return component;
}

std::vector<VertexSet> group_by_id(const std::vector<std::size_t>& ids, std::size_t count) {
  std::vector<VertexSet> groups(count);
  for (Vertex i = 0; i < ids.size(); ++i) groups[ids[i]].push_back(i);
  // Members are pushed in increasing order, so each group is already sorted.
  std::sort(groups.begin(), groups.end(),
            [](const VertexSet& a, const VertexSet& b) { return a.front() < b.front(); });
  return groups;
}

}  // namespace

std::vector<VertexSet> strong_components(const DiGraph& g) {
  std::size_t count = 0;
  const auto ids = tarjan_component_ids(g.successors(), count);
  return group_by_id(ids, count);
}

std::vector<VertexSet> weak_components(const DiGraph& g) {
  std::vector<std::size_t> parent(g.vertex_count());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&parent](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const Edge& edge : g.edges()) {
    const auto a = find(edge.tail);
    const auto b = find(edge.head);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }

  std::vector<std::size_t> ids(g.vertex_count());
  std::vector<std::size_t> relabel(g.vertex_count(), kUnvisited);
  std::size_t count = 0;
  for (Vertex i = 0; i < g.vertex_count(); ++i) {
    const auto root = find(i);
    if (relabel[root] == kUnvisited) relabel[root] = count++;
    ids[i] = relabel[root];
  }
  return group_by_id(ids, count);
}

ReachStructure reaches(const DiGraph& g) {
  const auto adjacency = g.successors();
  std::size_t count = 0;
  const auto component = tarjan_component_ids(adjacency, count);

  std::vector<bool> has_incoming(count, false);
  for (const Edge& edge : g.edges()) {
    if (component[edge.tail] != component[edge.head]) has_incoming[component[edge.head]] = true;
  }

  ReachStructure rs;
  for (std::size_t c = 0; c < count; ++c) {
    if (has_incoming[c]) continue;

    VertexSet cabal;
    for (Vertex i = 0; i < g.vertex_count(); ++i) {
      if (component[i] == c) cabal.push_back(i);
    }

    std::vector<bool> seen(g.vertex_count(), false);
    std::vector<Vertex> frontier = cabal;
    for (Vertex i : cabal) seen[i] = true;
    while (!frontier.empty()) {
      const Vertex u = frontier.back();
      frontier.pop_back();
      for (Vertex w : adjacency[u]) {
        if (!seen[w]) {
          seen[w] = true;
          frontier.push_back(w);
        }
      }
    }
    VertexSet reach;
    for (Vertex i = 0; i < g.vertex_count(); ++i) {
      if (seen[i]) reach.push_back(i);
    }
    rs.reaches.push_back(std::move(reach));
    rs.cabals.push_back(std::move(cabal));
  }

  std::vector<std::size_t> order(rs.reaches.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&rs](std::size_t a, std::size_t b) {
    return rs.reaches[a].front() < rs.reaches[b].front() ||
           (rs.reaches[a].front() == rs.reaches[b].front() &&
            rs.cabals[a].front() < rs.cabals[b].front());
  });
  ReachStructure sorted;
  for (std::size_t m : order) {
    sorted.reaches.push_back(rs.reaches[m]);
    sorted.cabals.push_back(rs.cabals[m]);
  }

  std::vector<std::size_t> membership(g.vertex_count(), 0);
  for (const auto& reach : sorted.reaches) {
    for (Vertex i : reach) ++membership[i];
  }
  for (const auto& reach : sorted.reaches) {
    VertexSet exclusive;
    VertexSet common;
    for (Vertex i : reach) (membership[i] == 1 ? exclusive : common).push_back(i);
    sorted.exclusive.push_back(std::move(exclusive));
    sorted.common.push_back(std::move(common));
  }
  return sorted;
}

ReachStructure co_reaches(const DiGraph& g) {
  ReachStructure rs = reaches(g.reversed());
  rs.for_reversed = true;
  return rs;
}

bool is_csc(const DiGraph& g) {
  return strong_components(g).size() == weak_components(g).size();
}

std::size_t dim_image_incidence(const DiGraph& g) {
  return g.vertex_count() - weak_components(g).size();
}

}  // namespace crnlap
