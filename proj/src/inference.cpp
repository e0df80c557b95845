#include "wpda/inference.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include "wpda/errors.hpp"

namespace wpda {

void WeightTable::dump(std::ostream& os) const {
  std::map<uint64_t, Weight> sorted(map_.begin(), map_.end());
  for (const auto& [key, w] : sorted) {
    Item it = unpack_item(key);
    os << it.from << '\t' << it.to << '\t' << weight_to_string(w) << '\n';
  }
}

void GammaTable::dump(std::ostream& os) const {
  std::map<StateId, Weight> sorted(from_start.begin(), from_start.end());
  for (const auto& [q, w] : sorted) {
    os << start << '\t' << q << '\t' << weight_to_string(w) << '\n';
  }
  sorted = std::map<StateId, Weight>(from_other.begin(), from_other.end());
  for (const auto& [q, w] : sorted) {
    os << "*\t" << q << '\t' << weight_to_string(w) << '\n';
  }
}

WpdaIndex::WpdaIndex(const Wpda& m)
    : out(m.num_states), in(m.num_states) {
  for (size_t i = 0; i < m.transitions.size(); ++i) {
    const Transition& t = m.transitions[i];
    TransitionId id = static_cast<TransitionId>(i);
    out[t.src].push_back(id);
    in[t.dst].push_back(id);
    if (t.label.is_open()) {
      opens_by_sym[t.label.symbol].push_back(id);
      opens_by_sym_dst[pack_pair(t.label.symbol, t.dst)].push_back(id);
    } else if (t.label.is_close()) {
      closes_by_open[m.parens.partner(t.label.symbol)].push_back(id);
    }
  }
}

std::vector<StateId> entering_states(const Wpda& m) {
  std::vector<char> is_entering(m.num_states, 0);
  if (m.start != kNoState && m.start < m.num_states) is_entering[m.start] = 1;
  for (const Transition& t : m.transitions) {
    if (t.label.is_open()) is_entering[t.dst] = 1;
  }
  std::vector<StateId> out;
  for (StateId q = 0; q < m.num_states; ++q) {
    if (is_entering[q]) out.push_back(q);
  }
  return out;
}

std::vector<StateId> exiting_states(const Wpda& m) {
  std::vector<char> is_exiting(m.num_states, 0);
  for (const Transition& t : m.transitions) {
    if (t.label.is_close()) is_exiting[t.src] = 1;
  }
  std::vector<StateId> out;
  for (StateId q = 0; q < m.num_states; ++q) {
    if (is_exiting[q]) out.push_back(q);
  }
  return out;
}

namespace {

// Shared agenda state for the inside and outside passes: a FIFO queue with
// membership dedup over a weight map.
struct Agenda {
  struct Cell {
    Weight w;
    bool queued = false;
  };
  std::unordered_map<uint64_t, Cell> cells;
  std::deque<uint64_t> queue;
  uint64_t relaxations = 0;
  uint64_t cap;
  // froms of known items grouped by their `to` endpoint.
  std::vector<std::vector<StateId>> by_to;

  explicit Agenda(StateId num_states, uint64_t cap)
      : cap(cap), by_to(num_states) {}

  void relax(StateId from, StateId to, Weight w) {
    if (++relaxations > cap) {
      throw NonTerminating(
          "relaxation cap exceeded; suspected negative cycle or unbounded "
          "input");
    }
    uint64_t key = pack_item(from, to);
    auto [it, inserted] = cells.try_emplace(key, Cell{w, true});
    if (inserted) {
      by_to[to].push_back(from);
      queue.push_back(key);
      return;
    }
    Weight u = plus(it->second.w, w);
    if (u != it->second.w) {
      it->second.w = u;
      if (!it->second.queued) {
        it->second.queued = true;
        queue.push_back(key);
      }
    }
  }

  bool empty() const { return queue.empty(); }

  std::pair<Item, Weight> pop() {
    uint64_t key = queue.front();
    queue.pop_front();
    Cell& c = cells.at(key);
    c.queued = false;
    return {unpack_item(key), c.w};
  }

  WeightTable table() const {
    WeightTable t;
    for (const auto& [key, cell] : cells) {
      Item it = unpack_item(key);
      t.set(it.from, it.to, cell.w);
    }
    return t;
  }
};

}  // namespace

WeightTable inside(const Wpda& m, const InsideOptions& opt) {
  WpdaIndex idx(m);
  Agenda agenda(m.num_states, opt.max_relaxations);
  for (StateId q : entering_states(m)) {
    agenda.relax(q, q, Weight::one());
  }

  while (!agenda.empty()) {
    auto [item, u] = agenda.pop();
    for (TransitionId t : idx.out[item.to]) {
      const Transition& e = m.transitions[t];
      if (e.label.scans()) {
        agenda.relax(item.from, e.dst, times(u, e.weight));
      } else if (e.label.is_open()) {
        // Complete with the popped item as left antecedent.
        auto closes = idx.closes_by_open.find(e.label.symbol);
        if (closes == idx.closes_by_open.end()) continue;
        for (TransitionId t2 : closes->second) {
          const Transition& e2 = m.transitions[t2];
          auto inner = agenda.cells.find(pack_item(e.dst, e2.src));
          if (inner == agenda.cells.end()) continue;
          agenda.relax(item.from, e2.dst,
                       times(times(u, e.weight),
                             times(inner->second.w, e2.weight)));
        }
      } else {
        // Complete with the popped item as right antecedent: opens that
        // match this close and land on the item's start.
        SymbolId open_sym = m.parens.partner(e.label.symbol);
        auto opens = idx.opens_by_sym_dst.find(pack_pair(open_sym, item.from));
        if (opens == idx.opens_by_sym_dst.end()) continue;
        for (TransitionId t2 : opens->second) {
          const Transition& e2 = m.transitions[t2];
          size_t n = agenda.by_to[e2.src].size();
          for (size_t i = 0; i < n; ++i) {
            StateId q3 = agenda.by_to[e2.src][i];
            Weight w3 = agenda.cells.at(pack_item(q3, e2.src)).w;
            agenda.relax(q3, e.dst,
                         times(times(w3, e2.weight), times(u, e.weight)));
          }
        }
      }
    }
  }
  return agenda.table();
}

Weight shortest_distance(const Wpda& m, const InsideOptions& opt) {
  return inside(m, opt).get(m.start, m.final);
}

WeightTable outside(const Wpda& m, const WeightTable& alpha,
                    const InsideOptions& opt) {
  if (!alpha.contains(m.start, m.final)) return {};
  WpdaIndex idx(m);
  Agenda agenda(m.num_states, opt.max_relaxations);
  agenda.relax(m.start, m.final, Weight::one());

  while (!agenda.empty()) {
    auto [item, u] = agenda.pop();
    for (TransitionId t : idx.in[item.to]) {
      const Transition& e = m.transitions[t];
      if (e.label.scans()) {
        // Scan in reverse.
        agenda.relax(item.from, e.src, times(u, e.weight));
      } else if (e.label.is_close()) {
        // Complete in reverse: distribute to the outer and inner child.
        SymbolId open_sym = m.parens.partner(e.label.symbol);
        auto opens = idx.opens_by_sym.find(open_sym);
        if (opens == idx.opens_by_sym.end()) continue;
        for (TransitionId t2 : opens->second) {
          const Transition& e2 = m.transitions[t2];
          if (!alpha.contains(item.from, e2.src) ||
              !alpha.contains(e2.dst, e.src)) {
            continue;
          }
          Weight around = times(u, times(e2.weight, e.weight));
          agenda.relax(item.from, e2.src,
                       times(around, alpha.get(e2.dst, e.src)));
          agenda.relax(e2.dst, e.src,
                       times(around, alpha.get(item.from, e2.src)));
        }
      }
    }
  }
  return agenda.table();
}

WeightTable reverse_inside(const Wpda& m, const InsideOptions& opt) {
  WeightTable rev = inside(reverse(m), opt);
  // An item q ⇝ r of the reversed automaton is a balanced path r → q in m;
  // store keyed as (r, q).
  WeightTable d;
  for (const auto& [key, w] : rev.entries()) {
    Item it = unpack_item(key);
    d.set(it.to, it.from, w);
  }
  return d;
}

GammaTable gamma(const Wpda& m, const WeightTable& d) {
  std::vector<char> is_exiting(m.num_states, 0);
  for (const Transition& t : m.transitions) {
    if (t.label.is_close()) is_exiting[t.src] = 1;
  }

  GammaTable g;
  g.start = m.start;
  auto accumulate = [](std::unordered_map<StateId, Weight>& table, StateId q,
                       Weight w) {
    auto [it, inserted] = table.try_emplace(q, w);
    if (!inserted) it->second = plus(it->second, w);
  };
  for (const auto& [key, w] : d.entries()) {
    Item it = unpack_item(key);  // D(r, x): balanced r → x
    StateId r = it.from, x = it.to;
    if (is_exiting[x]) {
      accumulate(g.from_other, r, w);
      accumulate(g.from_start, r, w);
    }
    if (x == m.final) {
      accumulate(g.from_start, r, w);
    }
  }
  return g;
}

DerivId DerivArena::axiom(StateId q) {
  Derivation d;
  d.kind = Derivation::Kind::Axiom;
  d.from = d.to = q;
  d.weight = Weight::one();
  nodes_.push_back(d);
  return static_cast<DerivId>(nodes_.size() - 1);
}

DerivId DerivArena::scan(DerivId antecedent, TransitionId side, StateId to,
                         Weight w) {
  Derivation d;
  d.kind = Derivation::Kind::Scan;
  d.from = nodes_[antecedent].from;
  d.to = to;
  d.weight = w;
  d.side = side;
  d.left = antecedent;
  nodes_.push_back(d);
  return static_cast<DerivId>(nodes_.size() - 1);
}

DerivId DerivArena::complete(DerivId left, TransitionId open, DerivId right,
                             TransitionId close, StateId to, Weight w) {
  Derivation d;
  d.kind = Derivation::Kind::Complete;
  d.from = nodes_[left].from;
  d.to = to;
  d.weight = w;
  d.side = open;
  d.closing = close;
  d.left = left;
  d.right = right;
  nodes_.push_back(d);
  return static_cast<DerivId>(nodes_.size() - 1);
}

DerivId DerivArena::promise(DerivId left, TransitionId open, TransitionId close,
                            int32_t rank, StateId to, Weight w) {
  Derivation d;
  d.kind = Derivation::Kind::Promise;
  d.from = nodes_[left].from;
  d.to = to;
  d.weight = w;
  d.side = open;
  d.closing = close;
  d.left = left;
  d.promised_rank = rank;
  nodes_.push_back(d);
  return static_cast<DerivId>(nodes_.size() - 1);
}

Path extract_path(const Wpda& m, const DerivArena& arena, DerivId root,
                  const PromiseResolver& resolver) {
  Path path;
  struct Frame {
    DerivId d;
    int phase;
    DerivId resolved_right;  // Promise only
  };
  std::vector<Frame> stack{{root, 0, kNoDeriv}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    const Derivation& n = arena[f.d];
    switch (n.kind) {
      case Derivation::Kind::Axiom:
        break;
      case Derivation::Kind::Scan:
        if (f.phase == 0) {
          stack.push_back({f.d, 1, kNoDeriv});
          stack.push_back({n.left, 0, kNoDeriv});
        } else {
          path.arcs.push_back(n.side);
        }
        break;
      case Derivation::Kind::Complete:
      case Derivation::Kind::Promise: {
        DerivId right = n.right;
        if (n.kind == Derivation::Kind::Promise) {
          if (f.phase == 0) {
            if (!resolver) {
              throw UnresolvedPromise("derivation contains a promise node");
            }
            StateId p = m.transitions[n.side].dst;
            StateId q = m.transitions[n.closing].src;
            right = resolver(p, q, n.promised_rank);
            if (right == kNoDeriv) {
              throw UnresolvedPromise("promise has no cached proof");
            }
          } else {
            right = f.resolved_right;
          }
        }
        if (f.phase == 0) {
          stack.push_back({f.d, 1, right});
          stack.push_back({n.left, 0, kNoDeriv});
        } else if (f.phase == 1) {
          path.arcs.push_back(n.side);
          stack.push_back({f.d, 2, right});
          stack.push_back({right, 0, kNoDeriv});
        } else {
          path.arcs.push_back(n.closing);
        }
        break;
      }
    }
  }
  return path;
}

}  // namespace wpda
