#include <limits>
#include <queue>

#include "bikefleet/error.hpp"
#include "bikefleet/matcher.hpp"

namespace bikefleet {
namespace {

class HopcroftKarp {
 public:
  explicit HopcroftKarp(const std::vector<std::vector<std::uint32_t>>& adj)
      : adj_(adj), match_l_(adj.size(), kFree), match_r_(adj.size(), kFree), dist_(adj.size()) {}

  std::size_t run() {
    std::size_t matched = 0;
    while (bfs()) {
      for (std::uint32_t u = 0; u < adj_.size(); ++u) {
        if (match_l_[u] == kFree && dfs(u)) ++matched;
      }
    }
    return matched;
  }

 private:
  static constexpr std::uint32_t kFree = std::numeric_limits<std::uint32_t>::max();
  static constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();

  bool bfs() {
    std::queue<std::uint32_t> q;
    for (std::uint32_t u = 0; u < adj_.size(); ++u) {
      if (match_l_[u] == kFree) {
        dist_[u] = 0;
        q.push(u);
      } else {
        dist_[u] = kInf;
      }
    }
    bool reachable = false;
    while (!q.empty()) {
      const std::uint32_t u = q.front();
      q.pop();
      for (std::uint32_t v : adj_[u]) {
        const std::uint32_t w = match_r_[v];
        if (w == kFree) {
          reachable = true;
        } else if (dist_[w] == kInf) {
          dist_[w] = dist_[u] + 1;
          q.push(w);
        }
      }
    }
    return reachable;
  }

  bool dfs(std::uint32_t u) {
    for (std::uint32_t v : adj_[u]) {
      const std::uint32_t w = match_r_[v];
      if (w == kFree || (dist_[w] == dist_[u] + 1 && dfs(w))) {
        match_l_[u] = v;
        match_r_[v] = u;
        return true;
      }
    }
    dist_[u] = kInf;
    return false;
  }

  const std::vector<std::vector<std::uint32_t>>& adj_;
  std::vector<std::uint32_t> match_l_, match_r_, dist_;
};

}  // namespace

std::size_t min_fleet_oracle(const TripSet& day_trips, const MatchConfig& cfg, std::size_t guard) {
  cfg.validate();
  const std::size_t n = day_trips.size();
  if (n > guard) {
    throw Error(ErrorKind::precondition, "exact oracle limited to " + std::to_string(guard) + " trips, got " +
                                             std::to_string(n) + "; audit a sample instead");
  }
  const std::span<const Trip> trips = day_trips.trips();
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (can_follow(trips[i], trips[j], cfg)) adj[i].push_back(static_cast<std::uint32_t>(j));
    }
  }
  return n - HopcroftKarp(adj).run();
}

}  // namespace bikefleet
