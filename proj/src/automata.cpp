#include "wpda/automata.hpp"

#include <deque>
#include <string>

#include "wpda/errors.hpp"

namespace wpda {

SymbolId SymbolTable::intern(std::string_view name) {
  auto it = ids_.find(std::string(name));
  if (it != ids_.end()) return it->second;
  SymbolId id = static_cast<SymbolId>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

std::optional<SymbolId> SymbolTable::find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

void ParenTable::add_pair(SymbolId open, SymbolId close) {
  pairs_.emplace_back(open, close);
  partner_[open] = close;
  partner_[close] = open;
  opens_.insert(open);
  closes_.insert(close);
}

std::pair<SymbolId, SymbolId> Wpda::add_paren_pair(std::string_view open_tok,
                                                   std::string_view close_tok) {
  SymbolId o = symbols.intern(open_tok);
  SymbolId c = symbols.intern(close_tok);
  parens.add_pair(o, c);
  return {o, c};
}

SymbolId Wpda::add_input_symbol(std::string_view tok) {
  SymbolId s = symbols.intern(tok);
  input_alphabet.insert(s);
  return s;
}

TransitionId Wpda::add_transition(StateId src, Label label, double w,
                                  StateId dst) {
  transitions.push_back({src, label, Weight::of(w), dst});
  return static_cast<TransitionId>(transitions.size() - 1);
}

TransitionId Wpda::add_input(StateId src, std::string_view tok, double w,
                             StateId dst) {
  return add_transition(src, Label::input(add_input_symbol(tok)), w, dst);
}

TransitionId Wpda::add_eps(StateId src, double w, StateId dst) {
  return add_transition(src, Label::epsilon(), w, dst);
}

TransitionId Wpda::add_open(StateId src, std::string_view open_tok, double w,
                            StateId dst) {
  return add_transition(src, Label::open(symbols.intern(open_tok)), w, dst);
}

TransitionId Wpda::add_close(StateId src, std::string_view close_tok, double w,
                             StateId dst) {
  return add_transition(src, Label::close(symbols.intern(close_tok)), w, dst);
}

const std::string& Wpda::label_name(const Label& l) const {
  static const std::string kEps = "<eps>";
  if (l.kind == LabelKind::Epsilon) return kEps;
  return symbols.name(l.symbol);
}

bool Wpda::has_negative_weights() const {
  for (const auto& t : transitions) {
    if (t.weight.value < 0) return true;
  }
  return false;
}

int32_t Wfsa::add_arc(StateId src, std::string_view tok, double w,
                      StateId dst) {
  arcs.push_back({src, symbols.intern(tok), Weight::of(w), dst});
  return static_cast<int32_t>(arcs.size() - 1);
}

int32_t Wfsa::add_eps_arc(StateId src, double w, StateId dst) {
  arcs.push_back({src, kNoSymbol, Weight::of(w), dst});
  return static_cast<int32_t>(arcs.size() - 1);
}

bool Wfsa::epsilon_free() const {
  for (const auto& a : arcs) {
    if (a.label == kNoSymbol) return false;
  }
  return true;
}

ValidationReport validate(const Wpda& m) {
  ValidationReport r;
  auto bad_state = [&](StateId q) { return q < 0 || q >= m.num_states; };

  if (m.start == kNoState || bad_state(m.start)) {
    r.issues.push_back("missing or invalid start state");
  }
  if (m.final == kNoState || bad_state(m.final)) {
    r.issues.push_back("missing or invalid final state");
  }

  // Σ, Π, Π̂ must be pairwise disjoint.
  std::unordered_set<SymbolId> opens, closes;
  std::unordered_set<SymbolId> open_seen, close_seen;
  for (const auto& [o, c] : m.parens.pairs()) {
    if (!open_seen.insert(o).second) {
      r.issues.push_back("paren table is not a bijection: duplicate open '" +
                         m.symbols.name(o) + "'");
    }
    if (!close_seen.insert(c).second) {
      r.issues.push_back("paren table is not a bijection: duplicate close '" +
                         m.symbols.name(c) + "'");
    }
    opens.insert(o);
    closes.insert(c);
  }
  for (SymbolId s : m.input_alphabet) {
    if (opens.count(s) || closes.count(s)) {
      r.issues.push_back("alphabet overlap: '" + m.symbols.name(s) +
                         "' is both an input symbol and a parenthesis");
    }
  }
  for (SymbolId s : opens) {
    if (closes.count(s)) {
      r.issues.push_back("alphabet overlap: '" + m.symbols.name(s) +
                         "' is both an opening and a closing parenthesis");
    }
  }

  for (size_t i = 0; i < m.transitions.size(); ++i) {
    const Transition& t = m.transitions[i];
    std::string at = "transition " + std::to_string(i);
    if (bad_state(t.src) || bad_state(t.dst)) {
      r.issues.push_back(at + ": dangling state id");
      continue;
    }
    if (t.weight.is_zero()) {
      r.issues.push_back(at + ": zero weight");
    }
    switch (t.label.kind) {
      case LabelKind::Epsilon:
        break;
      case LabelKind::Input:
        if (!m.input_alphabet.count(t.label.symbol)) {
          r.issues.push_back(at + ": input label '" + m.label_name(t.label) +
                             "' not in the input alphabet");
        }
        break;
      case LabelKind::Open:
        if (!m.parens.is_open(t.label.symbol)) {
          r.issues.push_back(at + ": open label '" + m.label_name(t.label) +
                             "' not in the opening alphabet");
        }
        break;
      case LabelKind::Close:
        if (!m.parens.is_close(t.label.symbol)) {
          r.issues.push_back(at + ": close label '" + m.label_name(t.label) +
                             "' not in the closing alphabet");
        }
        break;
    }
  }
  return r;
}

bool is_contiguous(const Wpda& m, const Path& p) {
  for (size_t i = 0; i + 1 < p.arcs.size(); ++i) {
    if (m.transitions[p.arcs[i]].dst != m.transitions[p.arcs[i + 1]].src) {
      return false;
    }
  }
  return true;
}

Weight path_weight(const Wpda& m, const Path& p) {
  Weight w = Weight::one();
  for (TransitionId t : p.arcs) w = times(w, m.transitions[t].weight);
  return w;
}

std::vector<SymbolId> project(const Wpda& m, const Path& p,
                              const std::unordered_set<SymbolId>& symbols) {
  std::vector<SymbolId> out;
  for (TransitionId t : p.arcs) {
    const Label& l = m.transitions[t].label;
    if (l.symbol != kNoSymbol && symbols.count(l.symbol)) {
      out.push_back(l.symbol);
    }
  }
  return out;
}

std::vector<SymbolId> input_projection(const Wpda& m, const Path& p) {
  std::vector<SymbolId> out;
  for (TransitionId t : p.arcs) {
    const Label& l = m.transitions[t].label;
    if (l.kind == LabelKind::Input) out.push_back(l.symbol);
  }
  return out;
}

std::vector<SymbolId> paren_projection(const Wpda& m, const Path& p) {
  std::vector<SymbolId> out;
  for (TransitionId t : p.arcs) {
    const Label& l = m.transitions[t].label;
    if (l.is_paren()) out.push_back(l.symbol);
  }
  return out;
}

bool is_balanced(const Wpda& m, const Path& p) {
  std::vector<SymbolId> stack;
  for (TransitionId t : p.arcs) {
    const Label& l = m.transitions[t].label;
    if (l.is_open()) {
      stack.push_back(l.symbol);
    } else if (l.is_close()) {
      if (stack.empty() || stack.back() != m.parens.partner(l.symbol)) {
        return false;
      }
      stack.pop_back();
    }
  }
  return stack.empty();
}

bool is_accepting(const Wpda& m, const Path& p) {
  if (p.empty()) return m.start == m.final;
  if (m.transitions[p.arcs.front()].src != m.start) return false;
  if (m.transitions[p.arcs.back()].dst != m.final) return false;
  return is_contiguous(m, p) && is_balanced(m, p);
}

namespace {

// Persistent stack of open symbols; node 0 is the empty stack.
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
  int32_t pop(int32_t stack) const { return nodes[stack].parent; }
  SymbolId top(int32_t stack) const { return nodes[stack].top; }
  int32_t depth(int32_t stack) const { return nodes[stack].depth; }
  bool empty(int32_t stack) const { return stack == 0; }
};

}  // namespace

BoundReport check_bounded_stack(const Wpda& m, BoundLimits limits) {
  BoundReport report;
  if (m.start == kNoState) {
    report.note = "no start state";
    return report;
  }

  std::vector<std::vector<TransitionId>> out(m.num_states);
  for (size_t i = 0; i < m.transitions.size(); ++i) {
    out[m.transitions[i].src].push_back(static_cast<TransitionId>(i));
  }

  StackPool stacks;
  std::unordered_set<uint64_t> seen;
  std::deque<uint64_t> queue;
  auto visit = [&](StateId q, int32_t stack) {
    uint64_t key = pack_pair(q, stack);
    if (seen.insert(key).second) queue.push_back(key);
  };
  visit(m.start, 0);

  int max_depth = 0;
  while (!queue.empty()) {
    if (seen.size() > limits.configs) {
      report.config_count = seen.size();
      report.note = "configuration limit exceeded (" +
                    std::to_string(limits.configs) + ")";
      return report;
    }
    uint64_t key = queue.front();
    queue.pop_front();
    StateId q = static_cast<StateId>(key >> 32);
    int32_t stack = static_cast<int32_t>(key & 0xffffffff);
    for (TransitionId t : out[q]) {
      const Transition& e = m.transitions[t];
      if (e.label.scans()) {
        visit(e.dst, stack);
      } else if (e.label.is_open()) {
        int32_t next = stacks.push(stack, e.label.symbol);
        int d = stacks.depth(next);
        if (d > limits.depth) {
          report.config_count = seen.size();
          report.note =
              "stack depth limit exceeded (" + std::to_string(limits.depth) + ")";
          return report;
        }
        if (d > max_depth) max_depth = d;
        visit(e.dst, next);
      } else {  // close: enabled only when the matching open is on top
        if (!stacks.empty(stack) &&
            stacks.top(stack) == m.parens.partner(e.label.symbol)) {
          visit(e.dst, stacks.pop(stack));
        }
      }
    }
  }
  report.bounded = true;
  report.max_depth = max_depth;
  report.config_count = seen.size();
  return report;
}

Wpda reverse(const Wpda& m) {
  Wpda r;
  r.symbols = m.symbols;
  r.parens = m.parens;
  r.input_alphabet = m.input_alphabet;
  r.num_states = m.num_states;
  r.start = m.final;
  r.final = m.start;
  r.transitions.reserve(m.transitions.size());
  for (const Transition& t : m.transitions) {
    Label l = t.label;
    if (l.is_open()) {
      l = Label::close(m.parens.partner(l.symbol));
    } else if (l.is_close()) {
      l = Label::open(m.parens.partner(l.symbol));
    }
    r.transitions.push_back({t.dst, l, t.weight, t.src});
  }
  return r;
}

Wpda intersect(const Wpda& m, const Wfsa& a, IntersectOrigin* origin) {
  if (!a.epsilon_free()) {
    throw ValidationError("intersection operand must be epsilon-free");
  }
  if (m.start == kNoState || a.start == kNoState) {
    throw ValidationError("intersection operands need start states");
  }

  // Translate acceptor labels into the WPDA's input alphabet.
  std::vector<SymbolId> sym_map(a.symbols.size(), kNoSymbol);
  for (size_t s = 0; s < a.symbols.size(); ++s) {
    const std::string& name = a.symbols.name(static_cast<SymbolId>(s));
    auto id = m.symbols.find(name);
    if (id && m.input_alphabet.count(*id)) {
      sym_map[s] = *id;
    }
  }
  for (const WfsaArc& arc : a.arcs) {
    if (sym_map[arc.label] == kNoSymbol) {
      throw AlphabetMismatch("acceptor label '" + a.symbols.name(arc.label) +
                             "' is not an input symbol of the automaton");
    }
  }
  std::vector<std::vector<int32_t>> fsa_out(a.num_states);
  for (size_t i = 0; i < a.arcs.size(); ++i) {
    fsa_out[a.arcs[i].src].push_back(static_cast<int32_t>(i));
  }
  std::vector<std::vector<TransitionId>> pda_out(m.num_states);
  for (size_t i = 0; i < m.transitions.size(); ++i) {
    pda_out[m.transitions[i].src].push_back(static_cast<TransitionId>(i));
  }

  struct ProductArc {
    StateId src, dst;
    Label label;
    Weight weight;
    TransitionId from_pda;
    int32_t from_fsa;
  };
  std::vector<ProductArc> arcs;
  std::unordered_map<uint64_t, StateId> pair_ids;
  std::vector<uint64_t> pairs;
  auto intern = [&](StateId q, StateId s) {
    uint64_t key = pack_pair(q, s);
    auto it = pair_ids.find(key);
    if (it != pair_ids.end()) return it->second;
    StateId id = static_cast<StateId>(pairs.size());
    pair_ids.emplace(key, id);
    pairs.push_back(key);
    return id;
  };

  StateId start = intern(m.start, a.start);
  for (size_t i = 0; i < pairs.size(); ++i) {
    StateId q = static_cast<StateId>(pairs[i] >> 32);
    StateId s = static_cast<StateId>(pairs[i] & 0xffffffff);
    for (TransitionId t : pda_out[q]) {
      const Transition& e = m.transitions[t];
      if (e.label.kind == LabelKind::Input) {
        for (int32_t ai : fsa_out[s]) {
          const WfsaArc& arc = a.arcs[ai];
          if (sym_map[arc.label] != e.label.symbol) continue;
          StateId dst = intern(e.dst, arc.dst);
          arcs.push_back({static_cast<StateId>(i), dst, e.label,
                          times(e.weight, arc.weight), t, ai});
        }
      } else {
        StateId dst = intern(e.dst, s);
        arcs.push_back(
            {static_cast<StateId>(i), dst, e.label, e.weight, t, -1});
      }
    }
  }

  // Final state: the pair when the acceptor has a single weight-one final,
  // otherwise a fresh super-final fed by ε arcs carrying the final weights.
  StateId final_state;
  bool super_final =
      a.finals.size() != 1 || a.finals.front().second != Weight::one();
  if (super_final) {
    final_state = static_cast<StateId>(pairs.size());
    for (const auto& [fs, fw] : a.finals) {
      auto it = pair_ids.find(pack_pair(m.final, fs));
      if (it == pair_ids.end()) continue;
      arcs.push_back({it->second, final_state, Label::epsilon(), fw, -1, -1});
    }
  } else {
    final_state = intern(m.final, a.finals.front().first);
  }
  StateId total_states =
      static_cast<StateId>(pairs.size()) + (super_final ? 1 : 0);

  // Keep only states that can reach the final; start and final always stay.
  std::vector<std::vector<StateId>> rev_adj(total_states);
  for (const ProductArc& arc : arcs) rev_adj[arc.dst].push_back(arc.src);
  std::vector<char> coreach(total_states, 0);
  std::deque<StateId> bfs{final_state};
  coreach[final_state] = 1;
  while (!bfs.empty()) {
    StateId v = bfs.front();
    bfs.pop_front();
    for (StateId u : rev_adj[v]) {
      if (!coreach[u]) {
        coreach[u] = 1;
        bfs.push_back(u);
      }
    }
  }
  coreach[start] = 1;

  std::vector<StateId> renum(total_states, kNoState);
  StateId next = 0;
  for (StateId v = 0; v < total_states; ++v) {
    if (coreach[v]) renum[v] = next++;
  }

  Wpda out;
  out.symbols = m.symbols;
  out.parens = m.parens;
  out.input_alphabet = m.input_alphabet;
  out.num_states = next;
  out.start = renum[start];
  out.final = renum[final_state];
  if (origin) {
    origin->pda.clear();
    origin->fsa.clear();
  }
  for (const ProductArc& arc : arcs) {
    if (!coreach[arc.src] || !coreach[arc.dst]) continue;
    out.transitions.push_back(
        {renum[arc.src], arc.label, arc.weight, renum[arc.dst]});
    if (origin) {
      origin->pda.push_back(arc.from_pda);
      origin->fsa.push_back(arc.from_fsa);
    }
  }
  return out;
}

Wfsa compile_string(const std::vector<std::string>& tokens,
                    const std::unordered_set<std::string>& alphabet) {
  Wfsa a;
  StateId prev = a.add_state();
  a.start = prev;
  for (const std::string& tok : tokens) {
    if (!alphabet.count(tok)) {
      throw UnknownToken("token '" + tok + "' is not in the alphabet");
    }
    StateId next = a.add_state();
    a.add_arc(prev, tok, 0.0, next);
    prev = next;
  }
  a.add_final(prev);
  return a;
}

Wfsa compile_string(const std::vector<std::string>& tokens, const Wpda& m) {
  std::unordered_set<std::string> alphabet;
  for (SymbolId s : m.input_alphabet) alphabet.insert(m.symbols.name(s));
  return compile_string(tokens, alphabet);
}

}  // namespace wpda
