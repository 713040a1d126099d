#include <deque>
#include <set>

#include "scc/verifier.hpp"

namespace scc {

namespace {

void require_declared(const Ref& n, const Architecture& arch) {
  bool ok = n.is_source() ? arch.source(n) != nullptr : arch.kind_of(n.component).has_value();
  if (!ok) throw Error("'" + n.str() + "' is not declared");
}

std::vector<Ref> node_children(const Ref& n, const Architecture& arch) {
  if (n.is_source()) return {};
  return children(n.component, arch);
}

using Adjacency = std::vector<std::vector<std::size_t>>;

Adjacency adjacency(const std::vector<Ref>& nodes, const Architecture& arch) {
  std::map<Ref, std::size_t> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) index.emplace(nodes[i], i);
  Adjacency adj(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (const auto& c : node_children(nodes[i], arch)) adj[i].push_back(index.at(c));
  return adj;
}

std::vector<bool> search_row(const Adjacency& adj, std::size_t from) {
  std::vector<bool> seen(adj.size(), false);
  std::vector<std::size_t> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
  }
  return seen;
}

}  // namespace

bool reachable(std::string_view from, const Ref& to, const Architecture& arch) {
  return reach_witness(from, to, arch).has_value();
}

std::optional<std::vector<std::string>> reach_witness(std::string_view from, const Ref& to,
                                                      const Architecture& arch) {
  Ref start{std::string(from)};
  require_declared(start, arch);
  require_declared(to, arch);
  std::map<Ref, Ref> parent;
  std::set<Ref> seen{start};
  std::deque<Ref> queue{start};
  while (!queue.empty()) {
    Ref v = queue.front();
    queue.pop_front();
    if (v == to) {
      std::vector<std::string> path{v.str()};
      while (!(v == start)) {
        v = parent.at(v);
        path.push_back(v.str());
      }
      return std::vector<std::string>(path.rbegin(), path.rend());
    }
    for (const auto& c : node_children(v, arch))
      if (seen.insert(c).second) {
        parent.emplace(c, v);
        queue.push_back(c);
      }
  }
  return std::nullopt;
}

ReachMatrix::ReachMatrix(std::vector<Ref> nodes, std::vector<std::vector<bool>> rows)
    : nodes_(std::move(nodes)), rows_(std::move(rows)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) index_.emplace(nodes_[i], i);
}

std::optional<std::size_t> ReachMatrix::index(const Ref& n) const {
  auto it = index_.find(n);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool ReachMatrix::reachable(const Ref& from, const Ref& to) const {
  auto i = index(from);
  auto j = index(to);
  if (!i || !j) throw Error("'" + (i ? to : from).str() + "' is not declared");
  return at(*i, *j);
}

std::vector<Ref> reach_nodes(const Architecture& arch) {
  std::vector<Ref> out;
  for (const auto& s : arch.sensors) {
    out.emplace_back(s.id);
    for (const auto& src : s.sources) out.emplace_back(s.id, src.name);
  }
  for (const auto& c : arch.contexts) out.emplace_back(c.id);
  for (const auto& c : arch.controllers) out.emplace_back(c.id);
  for (const auto& a : arch.actuators) out.emplace_back(a.id);
  return out;
}

ReachMatrix reach_matrix_serial(const Architecture& arch) {
  std::vector<Ref> nodes = reach_nodes(arch);
  Adjacency adj = adjacency(nodes, arch);
  std::vector<std::vector<bool>> rows(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) rows[i] = search_row(adj, i);
  return ReachMatrix(std::move(nodes), std::move(rows));
}

ReachMatrix reach_matrix_parallel(const Architecture& arch) {
  std::vector<Ref> nodes = reach_nodes(arch);
  Adjacency adj = adjacency(nodes, arch);
  std::vector<std::vector<bool>> rows(nodes.size());
  const auto n = static_cast<std::ptrdiff_t>(nodes.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    rows[static_cast<std::size_t>(i)] = search_row(adj, static_cast<std::size_t>(i));
  return ReachMatrix(std::move(nodes), std::move(rows));
}

ReachMatrix reach_matrix(const Architecture& arch, ExecMode mode) {
  return mode == ExecMode::Parallel ? reach_matrix_parallel(arch) : reach_matrix_serial(arch);
}

}  // namespace scc
