#include "wpda/textio.hpp"

#include <algorithm>
#include <sstream>

#include "wpda/errors.hpp"

namespace wpda {

namespace {

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> fields;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == '\t' || line[i] == ' ')) ++i;
    size_t start = i;
    while (i < line.size() && line[i] != '\t' && line[i] != ' ') ++i;
    if (i > start) fields.emplace_back(line.substr(start, i - start));
  }
  return fields;
}

StateId parse_state(const std::string& field, size_t line) {
  try {
    size_t pos = 0;
    long v = std::stol(field, &pos);
    if (pos != field.size() || v < 0 || v > 0x7fffffff) {
      throw std::invalid_argument(field);
    }
    return static_cast<StateId>(v);
  } catch (const std::exception&) {
    throw ParseError(line, "bad state id '" + field + "'");
  }
}

Weight parse_weight(const std::string& field, size_t line) {
  auto w = weight_from_string(field);
  if (!w) throw ParseError(line, "bad weight '" + field + "'");
  return *w;
}

// Raw transition rows plus final states, shared by both parsers.
struct RawAutomaton {
  struct Row {
    StateId src, dst;
    std::string label;
    Weight weight;
  };
  std::vector<Row> rows;
  std::vector<StateId> finals;
  StateId max_state = -1;
};

RawAutomaton parse_raw(std::string_view text) {
  RawAutomaton raw;
  size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() == 1) {
      StateId f = parse_state(fields[0], line_no);
      raw.finals.push_back(f);
      raw.max_state = std::max(raw.max_state, f);
    } else if (fields.size() == 4) {
      StateId src = parse_state(fields[0], line_no);
      StateId dst = parse_state(fields[1], line_no);
      Weight w = parse_weight(fields[3], line_no);
      raw.rows.push_back({src, dst, fields[2], w});
      raw.max_state = std::max({raw.max_state, src, dst});
    } else {
      throw ParseError(line_no, "expected 4 fields or a single final state");
    }
  }
  if (raw.rows.empty()) {
    throw ParseError(line_no, "no transitions: cannot derive a start state");
  }
  return raw;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_parens(
    std::string_view text) {
  std::vector<std::pair<std::string, std::string>> pairs;
  size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != 2) {
      throw ParseError(line_no, "expected `open<TAB>close`");
    }
    pairs.emplace_back(fields[0], fields[1]);
  }
  return pairs;
}

Wpda parse_wpda(
    std::string_view text,
    const std::vector<std::pair<std::string, std::string>>& parens) {
  RawAutomaton raw = parse_raw(text);

  Wpda m;
  for (const auto& [o, c] : parens) {
    m.add_paren_pair(o, c);
  }
  m.num_states = raw.max_state + 1;
  m.start = raw.rows.front().src;
  if (raw.finals.size() != 1) {
    throw ValidationError("an automaton with parentheses needs exactly one "
                          "final state, got " +
                          std::to_string(raw.finals.size()));
  }
  m.final = raw.finals.front();

  for (const auto& row : raw.rows) {
    Label label;
    if (row.label == kEpsilonToken) {
      label = Label::epsilon();
    } else {
      auto id = m.symbols.find(row.label);
      if (id && m.parens.is_open(*id)) {
        label = Label::open(*id);
      } else if (id && m.parens.is_close(*id)) {
        label = Label::close(*id);
      } else {
        label = Label::input(m.add_input_symbol(row.label));
      }
    }
    m.transitions.push_back({row.src, label, row.weight, row.dst});
  }

  ValidationReport report = validate(m);
  if (!report.ok()) {
    std::string msg = "invalid automaton:";
    for (const std::string& issue : report.issues) msg += "\n  " + issue;
    throw ValidationError(msg);
  }
  return m;
}

Wfsa parse_wfsa(std::string_view text) {
  RawAutomaton raw = parse_raw(text);
  Wfsa a;
  a.num_states = raw.max_state + 1;
  a.start = raw.rows.front().src;
  for (const auto& row : raw.rows) {
    if (row.label == kEpsilonToken) {
      a.arcs.push_back({row.src, kNoSymbol, row.weight, row.dst});
    } else {
      a.arcs.push_back({row.src, a.symbols.intern(row.label), row.weight,
                        row.dst});
    }
  }
  std::vector<StateId> finals = raw.finals;
  std::sort(finals.begin(), finals.end());
  finals.erase(std::unique(finals.begin(), finals.end()), finals.end());
  for (StateId f : finals) a.add_final(f);
  return a;
}

std::variant<Wpda, Wfsa> parse_automaton(
    std::string_view text,
    const std::vector<std::pair<std::string, std::string>>* parens) {
  if (parens) return parse_wpda(text, *parens);
  return parse_wfsa(text);
}

std::string write_automaton(const Wpda& m) {
  std::string out;
  for (const Transition& t : m.transitions) {
    out += std::to_string(t.src) + '\t' + std::to_string(t.dst) + '\t' +
           m.label_name(t.label) + '\t' + weight_to_string(t.weight) + '\n';
  }
  out += std::to_string(m.final) + '\n';
  return out;
}

std::string write_automaton(const Wfsa& a) {
  std::string out;
  for (const WfsaArc& arc : a.arcs) {
    const std::string& name = arc.label == kNoSymbol
                                  ? std::string(kEpsilonToken)
                                  : a.symbols.name(arc.label);
    out += std::to_string(arc.src) + '\t' + std::to_string(arc.dst) + '\t' +
           name + '\t' + weight_to_string(arc.weight) + '\n';
  }
  for (const auto& [f, w] : a.finals) {
    out += std::to_string(f) + '\n';
  }
  return out;
}

std::string write_parens(const Wpda& m) {
  std::string out;
  for (const auto& [o, c] : m.parens.pairs()) {
    out += m.symbols.name(o) + '\t' + m.symbols.name(c) + '\n';
  }
  return out;
}

std::string path_yield(const Wpda& m, const Path& p, bool keep_parens) {
  std::string out;
  for (TransitionId t : p.arcs) {
    const Label& l = m.transitions[t].label;
    if (l.kind == LabelKind::Epsilon) continue;
    if (l.is_paren() && !keep_parens) continue;
    if (!out.empty()) out += ' ';
    out += m.symbols.name(l.symbol);
  }
  return out;
}

std::string path_arcs(const Wpda& m, const Path& p) {
  std::string out;
  for (TransitionId t : p.arcs) {
    const Transition& e = m.transitions[t];
    if (!out.empty()) out += ' ';
    out += std::to_string(e.src) + ':' + m.label_name(e.label) + ':' +
           weight_to_string(e.weight);
  }
  return out;
}

}  // namespace wpda
