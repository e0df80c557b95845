// Command-line toolkit: k shortest paths, intersection, shortest distance,
// validation, expansion, and a synthetic benchmark over weighted pushdown
// automata in the text format described in the README.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wpda/errors.hpp"
#include "wpda/fixtures.hpp"
#include "wpda/gen.hpp"
#include "wpda/inference.hpp"
#include "wpda/oracle.hpp"
#include "wpda/textio.hpp"
#include "wpda/toolkit.hpp"

namespace {

using namespace wpda;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitLimits = 3;

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "'");
  out << text;
}

Wpda load_wpda(const std::string& automaton_path, const std::string& parens_path) {
  std::vector<std::pair<std::string, std::string>> pairs;
  if (!parens_path.empty()) pairs = parse_parens(read_input(parens_path));
  return parse_wpda(read_input(automaton_path), pairs);
}

std::vector<std::string> split_tokens(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

void print_stats(const SearchStats& st, Algo algo, int k, size_t paths) {
  std::cerr << "algo=" << algo_name(algo) << '\n'
            << "k=" << k << '\n'
            << "paths=" << paths << '\n'
            << "pops=" << st.pops << '\n'
            << "pushes=" << st.pushes << '\n'
            << "subproblems=" << st.subproblems << '\n'
            << "precompute_seconds=" << st.precompute_seconds << '\n'
            << "search_seconds=" << st.search_seconds << '\n'
            << "exhausted=" << (st.exhausted ? 1 : 0) << '\n';
}

struct KShortestArgs {
  std::string automaton, parens, algo = "lazy";
  int k = 1;
  bool keep_parens = false, stats = false, arcs = false;
  BoundLimits bounds{};
};

int cmd_kshortest(const KShortestArgs& args) {
  auto algo = algo_from_string(args.algo);
  if (!algo) {
    std::cerr << "unknown algorithm '" << args.algo << "'\n";
    return kExitUsage;
  }
  Wpda m = load_wpda(args.automaton, args.parens);
  RunOptions opt;
  opt.search.bounds = args.bounds;
  opt.expand_limits = args.bounds;
  KPathResult result = run_kshortest(m, args.k, *algo, opt);
  for (const PathEntry& pe : result.paths) {
    std::cout << weight_to_string(pe.weight) << '\t'
              << (args.arcs ? path_arcs(m, pe.path)
                            : path_yield(m, pe.path, args.keep_parens))
              << '\n';
  }
  if (args.stats) print_stats(result.stats, *algo, args.k, result.paths.size());
  return kExitOk;
}

struct IntersectArgs {
  std::string automaton, parens, fsa, string_tokens, out;
};

int cmd_intersect(const IntersectArgs& args) {
  Wpda m = load_wpda(args.automaton, args.parens);
  Wfsa a;
  if (!args.fsa.empty()) {
    a = parse_wfsa(read_input(args.fsa));
  } else {
    a = compile_string(split_tokens(args.string_tokens), m);
  }
  write_output(args.out, write_automaton(intersect(m, a)));
  return kExitOk;
}

struct DistanceArgs {
  std::string automaton, parens;
  bool dump_alpha = false, dump_beta = false, dump_gamma = false,
       dump_d = false;
};

int cmd_distance(const DistanceArgs& args) {
  Wpda m = load_wpda(args.automaton, args.parens);
  WeightTable alpha = inside(m);
  Weight dist = alpha.get(m.start, m.final);
  std::cout << (dist.is_zero() ? std::string("none") : weight_to_string(dist))
            << '\n';
  if (args.dump_alpha) {
    std::cerr << "# alpha\n";
    alpha.dump(std::cerr);
  }
  if (args.dump_beta) {
    std::cerr << "# beta\n";
    outside(m, alpha).dump(std::cerr);
  }
  if (args.dump_d || args.dump_gamma) {
    WeightTable d = reverse_inside(m);
    if (args.dump_d) {
      std::cerr << "# d\n";
      d.dump(std::cerr);
    }
    if (args.dump_gamma) {
      std::cerr << "# gamma\n";
      gamma(m, d).dump(std::cerr);
    }
  }
  return kExitOk;
}

struct ValidateArgs {
  std::string automaton, parens;
  BoundLimits bounds{};
};

int cmd_validate(const ValidateArgs& args) {
  std::vector<std::pair<std::string, std::string>> pairs;
  if (!args.parens.empty()) pairs = parse_parens(read_input(args.parens));
  Wpda m;
  try {
    m = parse_wpda(read_input(args.automaton), pairs);
  } catch (const ValidationError& e) {
    std::cout << e.what() << '\n';
    return kExitValidation;
  }
  ValidationReport report = validate(m);
  for (const std::string& issue : report.issues) std::cout << issue << '\n';
  if (report.ok()) std::cout << "valid\n";
  BoundReport br = check_bounded_stack(m, args.bounds);
  if (br.bounded) {
    std::cout << "bounded-stack: bounded K=" << br.max_depth
              << " configs=" << br.config_count << '\n';
  } else {
    std::cout << "bounded-stack: limit exceeded: " << br.note << '\n';
  }
  return report.ok() && br.bounded ? kExitOk : kExitValidation;
}

struct ExpandArgs {
  std::string automaton, parens, out;
  BoundLimits bounds{};
};

int cmd_expand(const ExpandArgs& args) {
  Wpda m = load_wpda(args.automaton, args.parens);
  Expansion ex = expand(m, args.bounds);
  write_output(args.out, write_automaton(ex.fsa));
  return kExitOk;
}

struct BenchArgs {
  std::vector<int64_t> sizes{500};
  std::vector<int> k_values{100};
  std::vector<std::string> algos{"lazy", "astar-h1"};
  std::string generator = "cfg-intersection";
  std::string out;
  uint64_t seed = 1;
};

int cmd_bench(const BenchArgs& args) {
  std::vector<Algo> algos;
  for (const std::string& name : args.algos) {
    auto a = algo_from_string(name);
    if (!a) {
      std::cerr << "unknown algorithm '" << name << "'\n";
      return kExitUsage;
    }
    algos.push_back(*a);
  }

  std::ostringstream table;
  table << "generator\tsize\tstates\ttransitions\tk\talgo\tstatus\tpaths\t"
           "best\ttotal_weight\tpops\tpushes\tsubproblems\t"
           "precompute_s\tsearch_s\n";

  for (size_t si = 0; si < args.sizes.size(); ++si) {
    int64_t size = args.sizes[si];
    uint64_t instance_seed = args.seed * 1000003ULL + si;
    Wpda m;
    if (args.generator == "grid") {
      m = gen::grid_wpda(instance_seed, gen::grid_options_for_states(size));
    } else if (args.generator == "cfg-intersection") {
      gen::CfgOptions opt;
      opt.grammar_states = 24;
      opt.extra_transitions = 32;
      opt.paren_pairs = 3 + static_cast<int>(instance_seed % 6);
      opt.ambiguity = 2;
      opt.loop = true;
      // The string is the scaling knob, capped at parsing-shaped lengths;
      // cfg products saturate around a few thousand states, the grid
      // generator is the one that scales further.
      int target_len = static_cast<int>(std::clamp<int64_t>(
          size / std::max(1, opt.grammar_states), 5, 60));
      opt.string_min = std::max(5, 3 * target_len / 4);
      opt.string_max = 2 * target_len;
      opt.bound_limits = {64, 150'000};
      m = gen::random_cfg_intersection(instance_seed, opt).product;
    } else {
      std::cerr << "unknown generator '" << args.generator << "'\n";
      return kExitUsage;
    }

    for (int k : args.k_values) {
      // Weight multisets of every algorithm that finished must agree.
      std::map<std::string, std::vector<double>> multisets;
      double lazy_total = 0;
      for (Algo algo : algos) {
        RunOptions opt;
        opt.search.record_pops = false;
        opt.expand_budget_by_states = true;
        if (lazy_total > 0) {
          opt.expand_deadline_seconds = 10 * lazy_total;
        }
        std::string status = "ok";
        KPathResult result;
        try {
          result = run_kshortest(m, k, algo, opt);
        } catch (const LimitExceeded& e) {
          status = "skipped";
        } catch (const ValidationError& e) {
          status = "error";
        }
        table << args.generator << '\t' << size << '\t' << m.num_states << '\t'
              << m.transitions.size() << '\t' << k << '\t' << algo_name(algo)
              << '\t' << status << '\t' << result.paths.size() << '\t';
        if (status == "ok" && !result.paths.empty()) {
          double total = 0;
          for (const PathEntry& pe : result.paths) total += pe.weight.value;
          table << weight_to_string(result.paths.front().weight) << '\t'
                << total;
          std::vector<double> weights;
          for (const PathEntry& pe : result.paths)
            weights.push_back(pe.weight.value);
          multisets[std::string(algo_name(algo))] = weights;
        } else {
          table << "-\t-";
        }
        table << '\t' << result.stats.pops << '\t' << result.stats.pushes
              << '\t' << result.stats.subproblems << '\t'
              << result.stats.precompute_seconds << '\t'
              << result.stats.search_seconds << '\n';
        if (algo == Algo::Lazy && status == "ok") {
          lazy_total = result.stats.precompute_seconds +
                       result.stats.search_seconds;
        }
      }
      bool agree = true;
      const std::vector<double>* first = nullptr;
      for (const auto& [name, weights] : multisets) {
        if (!first) {
          first = &weights;
        } else if (*first != weights) {
          agree = false;
        }
      }
      table << "# size=" << size << " k=" << k << " weight-multisets: "
            << (multisets.size() < 2 ? "n/a" : agree ? "agree" : "DISAGREE")
            << '\n';
    }
  }
  write_output(args.out, table.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted pushdown automata toolkit"};
  app.require_subcommand(1);

  KShortestArgs ks;
  CLI::App* ks_cmd = app.add_subcommand("kshortest", "k shortest accepting paths");
  ks_cmd->add_option("--automaton", ks.automaton)->required();
  ks_cmd->add_option("--parens", ks.parens);
  ks_cmd->add_option("--k", ks.k);
  ks_cmd->add_option("--algo", ks.algo)
      ->description("astar-h1 | astar-h2 | lazy | expand");
  ks_cmd->add_flag("--keep-parens", ks.keep_parens);
  ks_cmd->add_flag("--stats", ks.stats);
  ks_cmd->add_flag("--arcs", ks.arcs);
  ks_cmd->add_option("--depth-limit", ks.bounds.depth);
  ks_cmd->add_option("--config-limit", ks.bounds.configs);

  IntersectArgs is;
  CLI::App* is_cmd = app.add_subcommand("intersect", "intersect with an acceptor");
  is_cmd->add_option("--automaton", is.automaton)->required();
  is_cmd->add_option("--parens", is.parens);
  is_cmd->add_option("--fsa", is.fsa);
  is_cmd->add_option("--string", is.string_tokens)
      ->description("space-separated tokens compiled to a linear acceptor");
  is_cmd->add_option("--out", is.out);

  DistanceArgs ds;
  CLI::App* ds_cmd = app.add_subcommand("distance", "shortest accepting distance");
  ds_cmd->add_option("--automaton", ds.automaton)->required();
  ds_cmd->add_option("--parens", ds.parens);
  ds_cmd->add_flag("--dump-alpha", ds.dump_alpha);
  ds_cmd->add_flag("--dump-beta", ds.dump_beta);
  ds_cmd->add_flag("--dump-gamma", ds.dump_gamma);
  ds_cmd->add_flag("--dump-d", ds.dump_d);

  ValidateArgs vs;
  CLI::App* vs_cmd = app.add_subcommand("validate", "structure and stack bound");
  vs_cmd->add_option("--automaton", vs.automaton)->required();
  vs_cmd->add_option("--parens", vs.parens);
  vs_cmd->add_option("--depth-limit", vs.bounds.depth);
  vs_cmd->add_option("--config-limit", vs.bounds.configs);

  ExpandArgs es;
  CLI::App* es_cmd = app.add_subcommand("expand", "expand to an acceptor");
  es_cmd->add_option("--automaton", es.automaton)->required();
  es_cmd->add_option("--parens", es.parens);
  es_cmd->add_option("--out", es.out);
  es_cmd->add_option("--depth-limit", es.bounds.depth);
  es_cmd->add_option("--config-limit", es.bounds.configs);

  BenchArgs bs;
  CLI::App* bs_cmd = app.add_subcommand("bench", "synthetic benchmark");
  bs_cmd->add_option("--sizes", bs.sizes)->delimiter(',');
  bs_cmd->add_option("--k-values", bs.k_values)->delimiter(',');
  bs_cmd->add_option("--algos", bs.algos)->delimiter(',');
  bs_cmd->add_option("--generator", bs.generator)
      ->description("cfg-intersection | grid");
  bs_cmd->add_option("--seed", bs.seed);
  bs_cmd->add_option("--out", bs.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (ks_cmd->parsed()) return cmd_kshortest(ks);
    if (is_cmd->parsed()) return cmd_intersect(is);
    if (ds_cmd->parsed()) return cmd_distance(ds);
    if (vs_cmd->parsed()) return cmd_validate(vs);
    if (es_cmd->parsed()) return cmd_expand(es);
    if (bs_cmd->parsed()) return cmd_bench(bs);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const LimitExceeded& e) {
    std::cerr << "limit exceeded: " << e.what() << '\n';
    return kExitLimits;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
