#include "wpda/gen.hpp"

#include <algorithm>
#include <random>

#include "wpda/errors.hpp"

namespace wpda {
namespace gen {

namespace {

const char* kInputTokens[] = {"a", "b", "c"};

int uniform(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

Wpda build_grammar(std::mt19937_64& rng, const CfgOptions& opt,
                   std::vector<std::string>* spine_yield) {
  Wpda m;
  for (int i = 0; i < opt.grammar_states; ++i) m.add_state();
  m.start = 0;
  m.final = opt.grammar_states - 1;
  for (const char* tok : kInputTokens) m.add_input_symbol(tok);
  std::vector<std::pair<SymbolId, SymbolId>> pairs;
  for (int i = 0; i < opt.paren_pairs; ++i) {
    pairs.push_back(m.add_paren_pair("(" + std::to_string(i),
                                     ")" + std::to_string(i)));
  }

  // Input-labeled spine start → final: guarantees an accepting path.
  spine_yield->clear();
  for (StateId q = 0; q + 1 < m.num_states; ++q) {
    const char* tok = kInputTokens[uniform(rng, 0, 2)];
    spine_yield->push_back(tok);
    m.add_input(q, tok, uniform(rng, std::max(0, opt.weight_min),
                                opt.weight_max),
                q + 1);
    // alternative readings of the same token: same successor half the
    // time, a random one otherwise
    for (int extra = 1; extra < opt.ambiguity; ++extra) {
      StateId dst = uniform(rng, 0, 1) == 0
                        ? q + 1
                        : uniform(rng, 0, m.num_states - 1);
      m.add_input(q, tok, uniform(rng, std::max(0, opt.weight_min),
                                  opt.weight_max),
                  dst);
    }
  }

  // Epsilon and close weights stay strictly positive so input-free cycles
  // in the intersection always cost something; that keeps the number of
  // accepting paths under any weight finite.
  int pos_min = std::max(1, opt.weight_min);
  int nonneg_min = std::max(0, opt.weight_min);
  auto endpoints = [&](StateId* src, StateId* dst) {
    if (opt.forward_only) {
      *src = uniform(rng, 0, m.num_states - 2);
      *dst = uniform(rng, *src + 1, m.num_states - 1);
    } else {
      *src = uniform(rng, 0, m.num_states - 1);
      *dst = uniform(rng, 0, m.num_states - 1);
    }
  };
  for (int i = 0; i < opt.extra_transitions; ++i) {
    StateId src, dst;
    endpoints(&src, &dst);
    int roll = uniform(rng, 0, 9);
    if (roll < 5) {
      m.add_input(src, kInputTokens[uniform(rng, 0, 2)],
                  uniform(rng, nonneg_min, opt.weight_max), dst);
    } else if (roll < 6) {
      m.add_eps(src, uniform(rng, pos_min, opt.weight_max), dst);
    } else {
      // parenthesis arcs come in open/close pairs so every pushed symbol
      // has somewhere to pop
      const auto& pair = pairs[uniform(rng, 0, opt.paren_pairs - 1)];
      m.transitions.push_back(
          {src, Label::open(pair.first),
           Weight::of(uniform(rng, nonneg_min, opt.weight_max)), dst});
      StateId src2, dst2;
      endpoints(&src2, &dst2);
      m.transitions.push_back(
          {src2, Label::close(pair.second),
           Weight::of(uniform(rng, pos_min, opt.weight_max)), dst2});
    }
  }
  if (opt.loop) m.add_eps(m.final, pos_min, m.start);
  return m;
}

// Random balanced walk from the start; returns its input yield when it
// lands on the final state with an empty stack and at least min_len input
// symbols consumed.
bool sample_balanced_yield(std::mt19937_64& rng, const Wpda& m, int min_len,
                           int max_steps, std::vector<std::string>* yield) {
  std::vector<std::vector<TransitionId>> out(m.num_states);
  std::unordered_set<SymbolId> closable;
  for (size_t i = 0; i < m.transitions.size(); ++i) {
    out[m.transitions[i].src].push_back(static_cast<TransitionId>(i));
    if (m.transitions[i].label.is_close()) {
      closable.insert(m.parens.partner(m.transitions[i].label.symbol));
    }
  }
  StateId at = m.start;
  std::vector<SymbolId> stack;
  yield->clear();
  for (int step = 0; step < max_steps; ++step) {
    if (at == m.final && stack.empty() &&
        static_cast<int>(yield->size()) >= min_len) {
      return true;
    }
    std::vector<TransitionId> feasible;
    for (TransitionId t : out[at]) {
      const Transition& e = m.transitions[t];
      if (e.label.is_close() &&
          (stack.empty() || stack.back() != m.parens.partner(e.label.symbol))) {
        continue;
      }
      // keep the walk near balance so it can stop at the final state
      if (e.label.is_open() &&
          (stack.size() >= 3 || !closable.count(e.label.symbol))) {
        continue;
      }
      feasible.push_back(t);
    }
    if (feasible.empty()) break;
    const Transition& e =
        m.transitions[feasible[uniform(rng, 0, feasible.size() - 1)]];
    if (e.label.is_open()) {
      stack.push_back(e.label.symbol);
    } else if (e.label.is_close()) {
      stack.pop_back();
    } else if (e.label.kind == LabelKind::Input) {
      yield->push_back(m.symbols.name(e.label.symbol));
    }
    at = e.dst;
  }
  return at == m.final && stack.empty() &&
         static_cast<int>(yield->size()) >= min_len;
}

}  // namespace

CfgInstance random_cfg_intersection(uint64_t seed, const CfgOptions& opt) {
  for (uint64_t attempt = 0; attempt < 64; ++attempt) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + attempt + 1);
    CfgInstance inst;
    std::vector<std::string> spine;
    inst.grammar = build_grammar(rng, opt, &spine);

    inst.tokens.clear();
    bool sampled = false;
    int budget = std::max(4 * opt.grammar_states + 16, 6 * opt.string_max);
    for (int walk = 0; walk < 8 && !sampled; ++walk) {
      sampled = sample_balanced_yield(rng, inst.grammar, opt.string_min,
                                      budget, &inst.tokens);
      if (sampled &&
          static_cast<int>(inst.tokens.size()) > opt.string_max) {
        sampled = false;
      }
    }
    if (!sampled) {
      // with the final → start loop, repeating the backbone string keeps
      // the fallback near the requested length
      inst.tokens = spine;
      while (opt.loop &&
             static_cast<int>(inst.tokens.size()) + static_cast<int>(spine.size()) <=
                 opt.string_max &&
             static_cast<int>(inst.tokens.size()) < opt.string_min) {
        inst.tokens.insert(inst.tokens.end(), spine.begin(), spine.end());
      }
    }

    inst.product = intersect(inst.grammar, compile_string(inst.tokens,
                                                          inst.grammar));
    if (opt.negative_shift != 0) {
      for (Transition& t : inst.product.transitions) {
        if (t.label.kind == LabelKind::Input) {
          t.weight = Weight::of(t.weight.value - opt.negative_shift);
        }
      }
    }
    BoundReport br = check_bounded_stack(inst.product, opt.bound_limits);
    if (br.bounded) return inst;
  }
  throw LimitExceeded("could not draw a bounded instance for this seed");
}

Wpda random_bounded_wpda(uint64_t seed, const CfgOptions& opt) {
  for (uint64_t attempt = 0; attempt < 64; ++attempt) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + attempt + 1);
    std::vector<std::string> spine;
    Wpda m = build_grammar(rng, opt, &spine);
    if (check_bounded_stack(m, opt.bound_limits).bounded) return m;
  }
  throw LimitExceeded("could not draw a bounded automaton for this seed");
}

Wpda grid_wpda(uint64_t seed, const GridOptions& opt) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 1);
  Wpda m;
  for (const char* tok : kInputTokens) m.add_input_symbol(tok);

  struct Block {
    StateId entry;
    StateId exit;
  };
  std::vector<std::vector<Block>> layers(opt.layers);
  int call_id = 0;

  auto build_block = [&](int layer) {
    Block b;
    b.entry = m.add_state();
    StateId prev = b.entry;
    for (int i = 0; i < opt.block_length; ++i) {
      StateId next = m.add_state();
      for (int arc = 0; arc < opt.parallel_arcs; ++arc) {
        m.add_input(prev, kInputTokens[uniform(rng, 0, 2)],
                    uniform(rng, 0, opt.weight_max), next);
      }
      prev = next;
    }
    b.exit = prev;
    layers[layer].push_back(b);
    return b;
  };

  build_block(0);  // main
  for (int layer = 1; layer < opt.layers; ++layer) {
    for (int i = 0; i < opt.blocks_per_layer; ++i) build_block(layer);
  }

  // Call sites: a fresh paren pair per site, so the stack symbol encodes
  // the return address and states stay shared across call contexts.
  for (int layer = 0; layer + 1 < opt.layers; ++layer) {
    for (const Block& caller : layers[layer]) {
      for (int c = 0; c < opt.calls_per_block; ++c) {
        int slot = uniform(rng, 0, opt.block_length - 1);
        const Block& callee =
            layers[layer + 1][uniform(rng, 0, layers[layer + 1].size() - 1)];
        std::string id = std::to_string(call_id++);
        auto [open_sym, close_sym] = m.add_paren_pair("(c" + id, ")c" + id);
        StateId from = caller.entry + slot;
        StateId back = caller.entry + slot + 1;
        m.transitions.push_back({from, Label::open(open_sym),
                                 Weight::of(uniform(rng, 0, 2)), callee.entry});
        m.transitions.push_back({callee.exit, Label::close(close_sym),
                                 Weight::of(uniform(rng, 0, 2)), back});
      }
    }
  }

  m.start = layers[0][0].entry;
  m.final = layers[0][0].exit;
  return m;
}

GridOptions grid_options_for_states(int64_t min_states) {
  GridOptions opt;
  opt.layers = 7;
  opt.block_length = 25;
  opt.calls_per_block = 6;
  opt.parallel_arcs = 2;
  int64_t per_block = opt.block_length + 1;
  int64_t blocks_needed = (min_states + per_block - 1) / per_block;
  opt.blocks_per_layer = static_cast<int>(
      std::max<int64_t>(2, (blocks_needed - 1 + opt.layers - 2) /
                               (opt.layers - 1)));
  return opt;
}

}  // namespace gen
}  // namespace wpda
