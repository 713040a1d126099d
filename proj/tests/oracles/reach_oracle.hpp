#pragma once

#include <climits>
#include <map>
#include <string>
#include <vector>

#include "scc/model.hpp"

namespace scc::oracle {

/// All-pairs shortest child-chain lengths by Floyd-Warshall over an edge
/// list read straight off the declarations.
struct Oracle {
  std::vector<std::string> nodes;
  std::map<std::string, std::size_t> index;
  std::vector<std::vector<int>> dist;

  static constexpr int kInf = INT_MAX / 4;

  explicit Oracle(const Architecture& a) {
    auto add = [&](const std::string& n) {
      if (index.emplace(n, nodes.size()).second) nodes.push_back(n);
    };
    for (const auto& s : a.sensors) {
      add(s.id);
      for (const auto& src : s.sources) add(s.id + "." + src.name);
    }
    for (const auto& c : a.contexts) add(c.id);
    for (const auto& c : a.controllers) add(c.id);
    for (const auto& c : a.actuators) add(c.id);

    std::size_t n = nodes.size();
    dist.assign(n, std::vector<int>(n, kInf));
    for (std::size_t i = 0; i < n; ++i) dist[i][i] = 0;
    auto edge = [&](const std::string& from, const std::string& to) { dist[index.at(from)][index.at(to)] = 1; };
    for (const auto& c : a.contexts)
      for (const auto& b : c.contract.basics) {
        if (const auto* p = std::get_if<PushActivation>(&b.activation))
          for (const auto& term : p->terms)
            for (const auto& r : term) edge(c.id, r.str());
        for (const auto& site : b.requirements) edge(c.id, site.target.str());
      }
    for (const auto& c : a.controllers) {
      for (const auto& s : c.subscriptions) edge(c.id, s);
      for (const auto& o : c.orders) edge(o.actuator, c.id);
    }
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (dist[i][k] + dist[k][j] < dist[i][j]) dist[i][j] = dist[i][k] + dist[k][j];
  }

  bool reaches(const std::string& from, const std::string& to) const {
    return dist[index.at(from)][index.at(to)] < kInf;
  }
  int distance(const std::string& from, const std::string& to) const { return dist[index.at(from)][index.at(to)]; }
};

}  // namespace scc::oracle
