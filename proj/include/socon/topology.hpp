#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace socon {

/// Ordered pair (receiver, sender): the sender can communicate its state to
/// the receiver.
struct Edge {
  int receiver;
  int sender;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Directed communication graph with a self-loop at every agent.
/// Immutable after construction.
class CommGraph {
 public:
  /// Missing self-loops are added (see added_self_loops()); duplicates are
  /// dropped. Throws std::invalid_argument on out-of-range ids.
  CommGraph(int agents, std::vector<Edge> edges);

  /// Each agent hears every agent within circular distance <= hops.
  /// Requires agents >= 2 and 1 <= hops < agents / 2.
  static CommGraph ring(int agents, int hops);
  static CommGraph complete(int agents);

  /// "i j" per line (0-indexed, j -> i), '#' comments. Agent count is the
  /// largest id + 1 unless given.
  static CommGraph parse_edge_list(std::istream& in, int agents = -1);
  static CommGraph load_edge_list(const std::filesystem::path& path, int agents = -1);

  int size() const { return agents_; }
  std::span<const Edge> edges() const { return edges_; }

  /// N_i = { j : (i, j) in E }, ascending, includes i.
  const std::vector<int>& in_neighbors(int i) const;
  /// { i : (i, j) in E }, ascending, includes j.
  const std::vector<int>& out_neighbors(int j) const;

  bool has_edge(int receiver, int sender) const;
  int added_self_loops() const { return added_self_loops_; }

 private:
  int agents_;
  int added_self_loops_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> in_;
  std::vector<std::vector<int>> out_;
};

/// True iff every agent reaches every other agent along directed edges.
bool is_strongly_connected(const CommGraph& g);

}  // namespace socon
