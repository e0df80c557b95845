#include "wpda/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <queue>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "wpda/errors.hpp"

namespace wpda {

namespace {

// Persistent stack of open symbols with structural sharing; id 0 is empty.
struct StackPool {
  struct Node {
    int32_t parent;
    SymbolId top;
    int32_t depth;
  };
  std::vector<Node> nodes{{-1, kNoSymbol, 0}};
  std::unordered_map<uint64_t, int32_t> interned;

  int32_t push(int32_t stack, SymbolId s) {
    uint64_t key = pack_pair(stack, s);
    auto it = interned.find(key);
    if (it != interned.end()) return it->second;
    int32_t id = static_cast<int32_t>(nodes.size());
    nodes.push_back({stack, s, nodes[stack].depth + 1});
    interned.emplace(key, id);
    return id;
  }
};

}  // namespace

Expansion expand(const Wpda& m, BoundLimits limits,
                 std::optional<double> deadline_seconds) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<std::vector<TransitionId>> out(m.num_states);
  for (size_t i = 0; i < m.transitions.size(); ++i) {
    out[m.transitions[i].src].push_back(static_cast<TransitionId>(i));
  }

  Expansion result;
  Wfsa& fsa = result.fsa;
  StackPool stacks;
  std::unordered_map<uint64_t, StateId> config_ids;
  std::vector<uint64_t> configs;
  auto intern = [&](StateId q, int32_t stack) {
    uint64_t key = pack_pair(q, stack);
    auto it = config_ids.find(key);
    if (it != config_ids.end()) return it->second;
    StateId id = fsa.add_state();
    config_ids.emplace(key, id);
    configs.push_back(key);
    return id;
  };

  fsa.start = intern(m.start, 0);
  for (size_t i = 0; i < configs.size(); ++i) {
    if (configs.size() > limits.configs) {
      throw LimitExceeded("expansion exceeded the configuration limit (" +
                          std::to_string(limits.configs) + ")");
    }
    if (deadline_seconds && (i & 0xffff) == 0 &&
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count() > *deadline_seconds) {
      throw LimitExceeded("expansion exceeded the time budget");
    }
    StateId q = static_cast<StateId>(configs[i] >> 32);
    int32_t stack = static_cast<int32_t>(configs[i] & 0xffffffff);
    for (TransitionId t : out[q]) {
      const Transition& e = m.transitions[t];
      if (e.label.scans()) {
        StateId dst = intern(e.dst, stack);
        if (e.label.kind == LabelKind::Input) {
          fsa.add_arc(static_cast<StateId>(i), m.label_name(e.label),
                      e.weight.value, dst);
        } else {
          fsa.add_eps_arc(static_cast<StateId>(i), e.weight.value, dst);
        }
        result.origin.push_back(t);
      } else if (e.label.is_open()) {
        int32_t next = stacks.push(stack, e.label.symbol);
        if (stacks.nodes[next].depth > limits.depth) {
          throw LimitExceeded("expansion exceeded the stack depth limit (" +
                              std::to_string(limits.depth) + ")");
        }
        fsa.add_eps_arc(static_cast<StateId>(i), e.weight.value,
                        intern(e.dst, next));
        result.origin.push_back(t);
      } else if (stack != 0 && stacks.nodes[stack].top ==
                                   m.parens.partner(e.label.symbol)) {
        fsa.add_eps_arc(static_cast<StateId>(i), e.weight.value,
                        intern(e.dst, stacks.nodes[stack].parent));
        result.origin.push_back(t);
      }
    }
  }

  auto final_it = config_ids.find(pack_pair(m.final, 0));
  StateId final_state =
      final_it != config_ids.end() ? final_it->second : fsa.add_state();
  fsa.add_final(final_state);
  return result;
}

WfsaKPaths wfsa_kshortest(const Wfsa& a, int k, uint64_t max_relaxations) {
  WfsaKPaths result;
  if (a.start == kNoState || k <= 0) {
    result.exhausted = true;
    return result;
  }

  // Virtual goal node past the finals so final weights sort correctly.
  StateId goal = a.num_states;
  struct Edge {
    StateId dst;
    Weight w;
    int32_t arc;  // -1 for the virtual final edge
  };
  std::vector<std::vector<Edge>> fwd(a.num_states + 1), bwd(a.num_states + 1);
  for (size_t i = 0; i < a.arcs.size(); ++i) {
    const WfsaArc& arc = a.arcs[i];
    fwd[arc.src].push_back({arc.dst, arc.weight, static_cast<int32_t>(i)});
    bwd[arc.dst].push_back({arc.src, arc.weight, static_cast<int32_t>(i)});
  }
  for (const auto& [fs, fw] : a.finals) {
    fwd[fs].push_back({goal, fw, -1});
    bwd[goal].push_back({fs, fw, -1});
  }

  // Exact distance-to-goal by FIFO relaxation over reversed edges.
  std::vector<Weight> h(a.num_states + 1, Weight::zero());
  std::vector<char> queued(a.num_states + 1, 0);
  std::deque<StateId> fifo;
  h[goal] = Weight::one();
  fifo.push_back(goal);
  queued[goal] = 1;
  uint64_t relaxations = 0;
  while (!fifo.empty()) {
    StateId v = fifo.front();
    fifo.pop_front();
    queued[v] = 0;
    for (const Edge& e : bwd[v]) {
      if (++relaxations > max_relaxations) {
        throw NonTerminating("acceptor heuristic relaxation cap exceeded");
      }
      Weight cand = times(e.w, h[v]);
      if (nat_less(cand, h[e.dst])) {
        h[e.dst] = cand;
        if (!queued[e.dst]) {
          queued[e.dst] = 1;
          fifo.push_back(e.dst);
        }
      }
    }
  }
  if (h[a.start].is_zero()) {
    result.exhausted = true;
    return result;
  }

  struct SearchNode {
    StateId state;
    Weight g;
    int32_t parent;  // index into nodes
    int32_t arc;
  };
  std::vector<SearchNode> nodes;
  struct Entry {
    Weight f;
    uint64_t seq;
    int32_t node;
  };
  struct Order {
    bool operator()(const Entry& x, const Entry& y) const {
      if (x.f.value != y.f.value) return x.f.value > y.f.value;
      return x.seq > y.seq;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, Order> queue;
  std::vector<int> pop_count(a.num_states + 2, 0);
  uint64_t seq = 0;

  auto push = [&](StateId state, Weight g, int32_t parent, int32_t arc) {
    Weight f = times(g, h[state]);
    if (f.is_zero()) return;
    nodes.push_back({state, g, parent, arc});
    queue.push({f, seq++, static_cast<int32_t>(nodes.size() - 1)});
  };

  push(a.start, Weight::one(), -1, -1);
  while (!queue.empty() && static_cast<int>(result.paths.size()) < k) {
    Entry e = queue.top();
    queue.pop();
    SearchNode node = nodes[e.node];
    if (pop_count[node.state] >= k) continue;
    ++pop_count[node.state];
    if (node.state == goal) {
      WfsaPathEntry pe;
      pe.weight = node.g;
      for (int32_t n = e.node; nodes[n].arc != -1 || nodes[n].parent != -1;
           n = nodes[n].parent) {
        if (nodes[n].arc != -1) pe.arcs.push_back(nodes[n].arc);
      }
      std::reverse(pe.arcs.begin(), pe.arcs.end());
      result.paths.push_back(std::move(pe));
      continue;
    }
    for (const Edge& edge : fwd[node.state]) {
      push(edge.dst, times(node.g, edge.w), e.node, edge.arc);
    }
  }
  result.exhausted = static_cast<int>(result.paths.size()) < k;
  return result;
}

std::vector<BalancedPath> enumerate_balanced_paths(
    const Wpda& m, StateId from, int max_len, uint64_t max_paths,
    std::optional<StateId> only_to, uint64_t max_steps) {
  std::vector<std::vector<TransitionId>> out(m.num_states);
  for (size_t i = 0; i < m.transitions.size(); ++i) {
    out[m.transitions[i].src].push_back(static_cast<TransitionId>(i));
  }

  std::vector<BalancedPath> found;
  std::vector<TransitionId> prefix;
  std::vector<SymbolId> stack;
  uint64_t steps = 0;

  auto record = [&](StateId at, Weight w) {
    if (only_to && at != *only_to) return;
    if (found.size() >= max_paths) {
      throw LimitExceeded("balanced-path enumeration exceeded " +
                          std::to_string(max_paths) + " paths");
    }
    found.push_back({at, w, Path{prefix}});
  };

  // Plain recursive DFS; depth is capped by max_len.
  auto dfs = [&](auto&& self, StateId at, Weight w) -> void {
    if (stack.empty()) record(at, w);
    if (static_cast<int>(prefix.size()) >= max_len) return;
    if (++steps > max_steps) {
      throw LimitExceeded("balanced-path enumeration exceeded " +
                          std::to_string(max_steps) + " steps");
    }
    for (TransitionId t : out[at]) {
      const Transition& e = m.transitions[t];
      if (e.label.is_open()) {
        stack.push_back(e.label.symbol);
      } else if (e.label.is_close()) {
        // A mismatched or unmatched close can never become balanced.
        if (stack.empty() || stack.back() != m.parens.partner(e.label.symbol)) {
          continue;
        }
        stack.pop_back();
      }
      prefix.push_back(t);
      self(self, e.dst, times(w, e.weight));
      prefix.pop_back();
      if (e.label.is_open()) {
        stack.pop_back();
      } else if (e.label.is_close()) {
        stack.push_back(m.parens.partner(e.label.symbol));
      }
    }
  };
  dfs(dfs, from, Weight::one());
  return found;
}

KPathResult brute_force_kshortest(const Wpda& m, int k, int max_len,
                                  uint64_t max_paths, uint64_t max_steps) {
  std::vector<BalancedPath> accepting = enumerate_balanced_paths(
      m, m.start, max_len, max_paths, m.final, max_steps);
  std::stable_sort(accepting.begin(), accepting.end(),
                   [](const BalancedPath& x, const BalancedPath& y) {
                     return nat_less(x.weight, y.weight);
                   });

  KPathResult result;
  result.stats.exhausted = static_cast<int>(accepting.size()) < k;
  for (int i = 0; i < k && i < static_cast<int>(accepting.size()); ++i) {
    result.paths.push_back(
        {accepting[i].weight, std::move(accepting[i].path)});
  }
  return result;
}

}  // namespace wpda
