#include "socon/topology.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "socon/log.hpp"

namespace socon {

CommGraph::CommGraph(int agents, std::vector<Edge> edges) : agents_(agents) {
  if (agents < 1) throw std::invalid_argument("CommGraph: need at least one agent");
  for (const Edge& e : edges) {
    if (e.receiver < 0 || e.receiver >= agents || e.sender < 0 || e.sender >= agents) {
      throw std::invalid_argument("CommGraph: edge (" + std::to_string(e.receiver) + ", " + std::to_string(e.sender) +
                                  ") references an agent outside 0.." + std::to_string(agents - 1));
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<Edge> loops;
  for (int i = 0; i < agents; ++i) {
    if (!std::binary_search(edges.begin(), edges.end(), Edge{i, i})) loops.push_back({i, i});
  }
  added_self_loops_ = static_cast<int>(loops.size());
  edges.insert(edges.end(), loops.begin(), loops.end());
  std::sort(edges.begin(), edges.end());
  edges_ = std::move(edges);

  in_.assign(agents, {});
  out_.assign(agents, {});
  for (const Edge& e : edges_) {
    in_[e.receiver].push_back(e.sender);
    out_[e.sender].push_back(e.receiver);
  }
  for (auto& v : out_) std::sort(v.begin(), v.end());
}

CommGraph CommGraph::ring(int agents, int hops) {
  if (agents < 2) throw std::invalid_argument("ring: need at least two agents");
  if (hops < 1 || 2 * hops >= agents) {
    throw std::invalid_argument("ring: hops must satisfy 1 <= hops < agents/2 (got hops=" + std::to_string(hops) +
                                ", agents=" + std::to_string(agents) + ")");
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(agents) * (2 * hops + 1));
  for (int i = 0; i < agents; ++i) {
    for (int k = -hops; k <= hops; ++k) edges.push_back({i, ((i + k) % agents + agents) % agents});
  }
  return CommGraph(agents, std::move(edges));
}

CommGraph CommGraph::complete(int agents) {
  std::vector<Edge> edges;
  for (int i = 0; i < agents; ++i)
    for (int j = 0; j < agents; ++j) edges.push_back({i, j});
  return CommGraph(agents, std::move(edges));
}

CommGraph CommGraph::parse_edge_list(std::istream& in, int agents) {
  std::vector<Edge> edges;
  int max_id = -1;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

    std::istringstream fields(line);
    long long i = -1, j = -1;
    std::string extra;
    if (!(fields >> i >> j) || (fields >> extra) || i < 0 || j < 0) {
      throw std::runtime_error("edge list line " + std::to_string(lineno) + ": expected two non-negative ids, got '" +
                               line + "'");
    }
    edges.push_back({static_cast<int>(i), static_cast<int>(j)});
    max_id = std::max<int>(max_id, static_cast<int>(std::max(i, j)));
  }
  if (agents < 0) agents = max_id + 1;
  if (agents < 1) throw std::runtime_error("edge list: no edges and no agent count");

  CommGraph g(agents, std::move(edges));
  if (g.added_self_loops() > 0) {
    warn("edge list: added " + std::to_string(g.added_self_loops()) + " missing self-loop(s)");
  }
  return g;
}

CommGraph CommGraph::load_edge_list(const std::filesystem::path& path, int agents) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list " + path.string());
  return parse_edge_list(in, agents);
}

const std::vector<int>& CommGraph::in_neighbors(int i) const {
  if (i < 0 || i >= agents_) throw std::out_of_range("in_neighbors: bad agent id " + std::to_string(i));
  return in_[i];
}

const std::vector<int>& CommGraph::out_neighbors(int j) const {
  if (j < 0 || j >= agents_) throw std::out_of_range("out_neighbors: bad agent id " + std::to_string(j));
  return out_[j];
}

bool CommGraph::has_edge(int receiver, int sender) const {
  return std::binary_search(edges_.begin(), edges_.end(), Edge{receiver, sender});
}

bool is_strongly_connected(const CommGraph& g) {
  // Strongly connected iff agent 0 reaches everyone and everyone reaches 0.
  auto all_reached = [&](auto&& next) {
    std::vector<char> seen(g.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v : next(u)) {
        if (!seen[v]) {
          seen[v] = 1;
          ++count;
          stack.push_back(v);
        }
      }
    }
    return count == g.size();
  };
  return all_reached([&](int u) -> const std::vector<int>& { return g.out_neighbors(u); }) &&
         all_reached([&](int u) -> const std::vector<int>& { return g.in_neighbors(u); });
}

}  // namespace socon
