#include "layerfid/topology/chains.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include "layerfid/noise/channels.hpp"

namespace layerfid {
namespace {

struct PathState {
  std::vector<int> path;
  std::vector<std::uint64_t> visited;
  double edge_log = 0.0;                // sum of log(1 - edge error)
  std::array<double, 2> longest{};      // longest gate per sublayer parity
  double score = 0.0;                   // log predicted LF of the path so far
  int overlap = 0;
};

double idle_log(const DeviceModel& device, int q, double duration) {
  const auto& c = device.qubits[static_cast<std::size_t>(q)];
  const double t1[] = {c.t1};
  const double t2[] = {c.t2};
  return std::log1p(-incoherent_layer_error(t1, t2, duration));
}

// log predicted_lf of the path: only the two endpoints can be idle.
double path_score(const DeviceModel& device, const PathState& s) {
  const std::size_t n = s.path.size();
  double score = s.edge_log;
  if (n >= 3) {
    // First qubit idles in the odd sublayer; the last one idles in the
    // sublayer its final edge is not in.
    score += idle_log(device, s.path.front(), s.longest[1]);
    const std::size_t last_parity = (n - 2) % 2;
    score += idle_log(device, s.path.back(), s.longest[1 - last_parity]);
  }
  return score;
}

bool test_bit(const std::vector<std::uint64_t>& bits, int q) { return (bits[static_cast<std::size_t>(q) / 64] >> (q % 64)) & 1U; }
void set_bit(std::vector<std::uint64_t>& bits, int q) { bits[static_cast<std::size_t>(q) / 64] |= std::uint64_t{1} << (q % 64); }

// Lower overlap first, then higher score, then the lexicographically smaller path.
bool better(const PathState& a, const PathState& b) {
  if (a.overlap != b.overlap) return a.overlap < b.overlap;
  if (a.score != b.score) return a.score > b.score;
  return a.path < b.path;
}

bool better_candidate(const CandidateChain& a, const CandidateChain& b) {
  if (a.overlap != b.overlap) return a.overlap < b.overlap;
  if (a.predicted_lf != b.predicted_lf) return a.predicted_lf > b.predicted_lf;
  return a.qubits < b.qubits;
}

int count_overlap(const std::vector<int>& path, const std::set<int>& taken) {
  return static_cast<int>(std::count_if(path.begin(), path.end(), [&](int q) { return taken.count(q) > 0; }));
}

// Picks the best unseen path among `pool` (canonical paths), ranked against `taken`.
bool pick(const DeviceModel& device, const std::set<std::vector<int>>& pool, const std::set<int>& taken, const std::set<std::vector<int>>& used, CandidateChain& out) {
  bool found = false;
  for (const auto& p : pool) {
    if (used.count(p)) continue;
    CandidateChain c{p, predicted_lf(p, device), count_overlap(p, taken)};
    if (!found || better_candidate(c, out)) {
      out = c;
      found = true;
    }
  }
  return found;
}

// States are deduplicated by (endpoint, visited set). Up to `per_key` states
// are kept per key so that paths already chosen cannot crowd out the best
// fresh path sharing their endpoint and qubit set.
std::set<std::vector<int>> beam_paths(const DeviceModel& device, int n_max, int beam_width, const std::set<int>& taken, std::size_t per_key, int& reached) {
  const auto adj = device.adjacency();
  std::vector<std::map<int, int>> edge_at(static_cast<std::size_t>(device.num_qubits()));
  for (std::size_t i = 0; i < device.edges.size(); ++i) {
    edge_at[static_cast<std::size_t>(device.edges[i].a)][device.edges[i].b] = static_cast<int>(i);
    edge_at[static_cast<std::size_t>(device.edges[i].b)][device.edges[i].a] = static_cast<int>(i);
  }
  const std::size_t words = (static_cast<std::size_t>(device.num_qubits()) + 63) / 64;
  std::vector<PathState> beam;
  for (int q = 0; q < device.num_qubits(); ++q) {
    PathState s;
    s.path = {q};
    s.visited.assign(words, 0);
    set_bit(s.visited, q);
    s.overlap = taken.count(q) ? 1 : 0;
    beam.push_back(std::move(s));
  }
  reached = 1;
  for (int len = 2; len <= n_max; ++len) {
    std::map<std::pair<int, std::vector<std::uint64_t>>, std::vector<PathState>> next;
    for (const auto& s : beam) {
      const int end = s.path.back();
      for (int v : adj[static_cast<std::size_t>(end)]) {
        if (test_bit(s.visited, v)) continue;
        PathState t = s;
        t.path.push_back(v);
        set_bit(t.visited, v);
        const auto& e = device.edges[static_cast<std::size_t>(edge_at[static_cast<std::size_t>(end)][static_cast<std::size_t>(v)])];
        t.edge_log += std::log1p(-e.error);
        auto& longest = t.longest[(t.path.size() - 2) % 2];
        longest = std::max(longest, e.duration);
        t.score = path_score(device, t);
        t.overlap += taken.count(v) ? 1 : 0;
        auto& bucket = next[std::make_pair(v, t.visited)];
        bucket.insert(std::upper_bound(bucket.begin(), bucket.end(), t, better), std::move(t));
        if (bucket.size() > per_key) bucket.pop_back();
      }
    }
    if (next.empty()) break;
    std::map<int, std::vector<PathState>> by_end;
    for (auto& [key, bucket] : next) {
      for (auto& s : bucket) by_end[key.first].push_back(std::move(s));
    }
    std::vector<PathState> level;
    for (auto& [end, states] : by_end) {
      std::sort(states.begin(), states.end(), better);
      if (static_cast<int>(states.size()) > beam_width) states.resize(static_cast<std::size_t>(beam_width));
      for (auto& s : states) level.push_back(std::move(s));
    }
    beam = std::move(level);
    reached = len;
  }
  std::set<std::vector<int>> out;
  for (const auto& s : beam) out.insert(canonical_path(s.path));
  return out;
}

void all_paths(const std::vector<std::vector<int>>& adj, std::vector<int>& path, std::vector<char>& on, int n, std::set<std::vector<int>>& out) {
  if (static_cast<int>(path.size()) == n) {
    out.insert(canonical_path(path));
    return;
  }
  for (int v : adj[static_cast<std::size_t>(path.back())]) {
    if (on[static_cast<std::size_t>(v)]) continue;
    on[static_cast<std::size_t>(v)] = 1;
    path.push_back(v);
    all_paths(adj, path, on, n, out);
    path.pop_back();
    on[static_cast<std::size_t>(v)] = 0;
  }
}

}  // namespace

std::vector<int> canonical_path(std::vector<int> path) {
  if (!path.empty() && path.back() < path.front()) std::reverse(path.begin(), path.end());
  return path;
}

ChainSearchResult find_candidate_chains(const DeviceModel& device, int n_max, int k, int beam_width) {
  device.validate();
  if (n_max < 2) throw std::invalid_argument("find_candidate_chains: N_max must be at least 2");
  if (k < 1) throw std::invalid_argument("find_candidate_chains: k must be positive");
  if (beam_width < 1) throw std::invalid_argument("find_candidate_chains: beam width must be positive");
  ChainSearchResult r;
  std::set<int> taken;
  std::set<std::vector<int>> used;
  for (int i = 0; i < k; ++i) {
    int reached = 0;
    const auto pool = beam_paths(device, n_max, beam_width, taken, used.size() + 1, reached);
    if (reached < 2) break;
    if (reached < n_max) r.complete = false;
    CandidateChain c;
    if (!pick(device, pool, taken, used, c)) break;
    used.insert(c.qubits);
    taken.insert(c.qubits.begin(), c.qubits.end());
    r.chains.push_back(std::move(c));
  }
  return r;
}

ChainSearchResult exhaustive_candidate_chains(const DeviceModel& device, int n_max, int k) {
  device.validate();
  if (n_max < 2) throw std::invalid_argument("exhaustive_candidate_chains: N_max must be at least 2");
  const auto adj = device.adjacency();
  ChainSearchResult r;
  std::set<std::vector<int>> pool;
  for (int n = n_max; n >= 2 && pool.empty(); --n) {
    for (int q = 0; q < device.num_qubits(); ++q) {
      std::vector<int> path = {q};
      std::vector<char> on(static_cast<std::size_t>(device.num_qubits()), 0);
      on[static_cast<std::size_t>(q)] = 1;
      all_paths(adj, path, on, n, pool);
    }
    if (pool.empty()) r.complete = false;
  }
  std::set<int> taken;
  std::set<std::vector<int>> used;
  for (int i = 0; i < k; ++i) {
    CandidateChain c;
    if (!pick(device, pool, taken, used, c)) break;
    used.insert(c.qubits);
    taken.insert(c.qubits.begin(), c.qubits.end());
    r.chains.push_back(std::move(c));
  }
  return r;
}

namespace {

// Misra-Gries edge coloring with at most max degree + 1 colors.
std::vector<int> misra_gries(int num_vertices, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> color(static_cast<std::size_t>(num_vertices), std::vector<int>(static_cast<std::size_t>(num_vertices), -1));
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(num_vertices));
  int max_degree = 0;
  for (const auto& [a, b] : edges) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    max_degree = std::max(max_degree, static_cast<int>(list.size()));
  }
  const int palette = max_degree + 1;
  auto at = [&](int u, int v) -> int& { return color[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)]; };
  auto is_free = [&](int x, int c) {
    const auto& list = adj[static_cast<std::size_t>(x)];
    return std::none_of(list.begin(), list.end(), [&](int y) { return at(x, y) == c; });
  };
  auto free_color = [&](int x) {
    for (int c = 0; c < palette; ++c) {
      if (is_free(x, c)) return c;
    }
    throw std::logic_error("misra_gries: no free color");
  };
  auto set = [&](int u, int v, int c) { at(u, v) = at(v, u) = c; };

  for (const auto& [u, v] : edges) {
    // Maximal fan of u starting at v.
    std::vector<int> fan = {v};
    std::vector<char> in_fan(static_cast<std::size_t>(num_vertices), 0);
    in_fan[static_cast<std::size_t>(v)] = 1;
    for (bool grown = true; grown;) {
      grown = false;
      for (int w : adj[static_cast<std::size_t>(u)]) {
        if (in_fan[static_cast<std::size_t>(w)] || at(u, w) < 0 || !is_free(fan.back(), at(u, w))) continue;
        fan.push_back(w);
        in_fan[static_cast<std::size_t>(w)] = 1;
        grown = true;
        break;
      }
    }
    const int c = free_color(u);
    const int d = free_color(fan.back());
    // Invert the cd path starting at u.
    if (c != d) {
      std::vector<std::pair<int, int>> path;
      int x = u;
      int want = d;
      int prev = -1;
      while (true) {
        int nxt = -1;
        for (int y : adj[static_cast<std::size_t>(x)]) {
          if (y != prev && at(x, y) == want) {
            nxt = y;
            break;
          }
        }
        if (nxt < 0) break;
        path.push_back({x, nxt});
        prev = x;
        x = nxt;
        want = want == d ? c : d;
      }
      for (const auto& [a, b] : path) set(a, b, at(a, b) == d ? c : d);
    }
    // First fan vertex w with d free whose prefix is still a fan.
    std::size_t w = fan.size() - 1;
    for (std::size_t i = 0; i < fan.size(); ++i) {
      bool prefix_ok = true;
      for (std::size_t j = 1; j <= i && prefix_ok; ++j) prefix_ok = at(u, fan[j]) >= 0 && is_free(fan[j - 1], at(u, fan[j]));
      if (prefix_ok && is_free(fan[i], d)) {
        w = i;
        break;
      }
    }
    for (std::size_t i = 0; i < w; ++i) set(u, fan[i], at(u, fan[i + 1]));
    set(u, fan[w], d);
  }
  std::vector<int> out;
  for (const auto& [a, b] : edges) out.push_back(at(a, b));
  return out;
}

}  // namespace

DisjointDecomposition decompose_disjoint(const std::vector<std::pair<int, int>>& edges, int classes, std::vector<int> qubits) {
  if (edges.empty()) throw std::invalid_argument("decompose_disjoint: no edges");
  if (classes < 0) throw std::invalid_argument("decompose_disjoint: class count must be non-negative");
  std::set<std::pair<int, int>> seen;
  std::vector<int> vertices;
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a == b) throw std::invalid_argument("decompose_disjoint: invalid edge");
    if (!seen.insert({std::min(a, b), std::max(a, b)}).second) throw std::invalid_argument("decompose_disjoint: duplicate edge");
    vertices.push_back(a);
    vertices.push_back(b);
  }
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  auto vid = [&](int q) { return static_cast<int>(std::lower_bound(vertices.begin(), vertices.end(), q) - vertices.begin()); };
  const int nv = static_cast<int>(vertices.size());

  std::vector<std::vector<int>> inc(static_cast<std::size_t>(nv));  // incident edge indices
  for (std::size_t i = 0; i < edges.size(); ++i) {
    inc[static_cast<std::size_t>(vid(edges[i].first))].push_back(static_cast<int>(i));
    inc[static_cast<std::size_t>(vid(edges[i].second))].push_back(static_cast<int>(i));
  }
  int max_degree = 0;
  for (const auto& l : inc) max_degree = std::max(max_degree, static_cast<int>(l.size()));

  // Path forests: walk each path from its lower endpoint.
  std::vector<int> position(edges.size(), -1);
  bool path_forest = max_degree <= 2;
  if (path_forest) {
    std::vector<char> done(edges.size(), 0);
    for (int v = 0; v < nv && path_forest; ++v) {
      if (inc[static_cast<std::size_t>(v)].size() != 1) continue;
      int x = v;
      int step = 0;
      int e = -1;
      while (true) {
        int nxt = -1;
        for (int cand : inc[static_cast<std::size_t>(x)]) {
          if (cand != e && !done[static_cast<std::size_t>(cand)]) nxt = cand;
        }
        if (nxt < 0) break;
        done[static_cast<std::size_t>(nxt)] = 1;
        position[static_cast<std::size_t>(nxt)] = step++;
        const auto& [a, b] = edges[static_cast<std::size_t>(nxt)];
        x = vid(a) == x ? vid(b) : vid(a);
        e = nxt;
      }
    }
    path_forest = std::all_of(done.begin(), done.end(), [](char c) { return c != 0; });  // false if a cycle remains
  }

  std::vector<int> color(edges.size());
  int count = 0;
  if (path_forest) {
    const int k = classes > 0 ? classes : (max_degree >= 2 ? 2 : 1);
    if (k < max_degree) throw std::invalid_argument("decompose_disjoint: " + std::to_string(k) + " classes cannot hold a vertex of degree " + std::to_string(max_degree));
    for (std::size_t i = 0; i < edges.size(); ++i) color[i] = position[i] % k;
    count = k;
  } else {
    std::vector<std::pair<int, int>> local;
    for (const auto& [a, b] : edges) local.push_back({vid(a), vid(b)});
    color = misra_gries(nv, local);
    count = *std::max_element(color.begin(), color.end()) + 1;
    if (classes > 0 && classes < count) {
      throw std::invalid_argument("decompose_disjoint: could not split into " + std::to_string(classes) + " classes (found " + std::to_string(count) + ")");
    }
  }

  DisjointDecomposition d;
  d.classes.assign(static_cast<std::size_t>(count), {});
  for (std::size_t i = 0; i < edges.size(); ++i) d.classes[static_cast<std::size_t>(color[i])].push_back(edges[i]);
  d.classes.erase(std::remove_if(d.classes.begin(), d.classes.end(), [](const auto& c) { return c.empty(); }), d.classes.end());
  // Sparser split: halve the largest class until the requested count.
  while (classes > 0 && static_cast<int>(d.classes.size()) < classes) {
    auto largest = std::max_element(d.classes.begin(), d.classes.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
    if (largest->size() < 2) throw std::invalid_argument("decompose_disjoint: more classes requested than edges");
    std::vector<std::pair<int, int>> moved;
    std::vector<std::pair<int, int>> kept;
    for (std::size_t i = 0; i < largest->size(); ++i) ((i % 2) ? moved : kept).push_back((*largest)[i]);
    *largest = std::move(kept);
    d.classes.push_back(std::move(moved));
  }
  if (classes > 0 && static_cast<int>(d.classes.size()) != classes) throw std::invalid_argument("decompose_disjoint: more classes requested than edges");
  auto lower = [](const std::pair<int, int>& e) { return std::make_pair(std::min(e.first, e.second), std::max(e.first, e.second)); };
  for (auto& c : d.classes) std::sort(c.begin(), c.end(), [&](const auto& a, const auto& b) { return lower(a) < lower(b); });
  if (!path_forest) std::sort(d.classes.begin(), d.classes.end(), [&](const auto& a, const auto& b) { return lower(a.front()) < lower(b.front()); });

  if (qubits.empty()) qubits = vertices;
  for (const auto& c : d.classes) {
    std::vector<int> idle;
    for (int q : qubits) {
      if (std::none_of(c.begin(), c.end(), [q](const auto& e) { return e.first == q || e.second == q; })) idle.push_back(q);
    }
    d.idle.push_back(std::move(idle));
  }
  return d;
}

void to_json(nlohmann::json& j, const CandidateChain& c) { j = {{"qubits", c.qubits}, {"predicted_lf", c.predicted_lf}, {"overlap", c.overlap}}; }

void to_json(nlohmann::json& j, const ChainSearchResult& r) { j = {{"chains", r.chains}, {"complete", r.complete}}; }

void to_json(nlohmann::json& j, const DisjointDecomposition& d) {
  j = {{"classes", nlohmann::json::array()}, {"idle", d.idle}};
  for (const auto& c : d.classes) {
    nlohmann::json cls = nlohmann::json::array();
    for (const auto& [a, b] : c) cls.push_back({a, b});
    j["classes"].push_back(cls);
  }
}

}  // namespace layerfid
