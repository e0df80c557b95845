#include "wpda/fixtures.hpp"

namespace wpda {
namespace fixtures {

Wpda anbn() {
  Wpda m;
  StateId q1 = m.add_state();
  StateId q2 = m.add_state();
  StateId q3 = m.add_state();
  StateId q4 = m.add_state();
  m.add_paren_pair("(", ")");
  m.add_input_symbol("a");
  m.add_input_symbol("b");
  m.start = q1;
  m.final = q4;
  m.add_open(q1, "(", 0, q2);
  m.add_input(q1, "b", 0, q3);
  m.add_input(q2, "a", 0, q1);
  m.add_close(q3, ")", 0, q4);
  m.add_input(q4, "b", 0, q3);
  return m;
}

Wfsa aabb() {
  Wfsa a;
  StateId s1 = a.add_state();
  StateId s2 = a.add_state();
  StateId s3 = a.add_state();
  StateId s4 = a.add_state();
  StateId s5 = a.add_state();
  a.start = s1;
  a.add_arc(s1, "a", 0, s2);
  a.add_arc(s2, "a", 0, s3);
  a.add_arc(s3, "b", 0, s4);
  a.add_arc(s4, "b", 0, s5);
  a.add_final(s5);
  return a;
}

Wpda anbn_aabb() { return intersect(anbn(), aabb()); }

Wpda h2trap() {
  Wpda m;
  StateId s = m.add_state();
  StateId q1 = m.add_state();
  StateId q2 = m.add_state();
  StateId q3 = m.add_state();
  StateId q4 = m.add_state();
  StateId q5 = m.add_state();
  StateId q6 = m.add_state();
  StateId q7 = m.add_state();
  StateId q8 = m.add_state();
  StateId f = m.add_state();
  m.add_paren_pair("(", ")");
  m.add_input_symbol("a");
  m.add_input_symbol("b");
  m.start = s;
  m.final = f;
  m.add_open(s, "(", 0, q1);
  m.add_input(q1, "a", 1, q2);
  m.add_input(q1, "b", 0, q3);
  m.add_input(q2, "a", 1, q4);
  m.add_close(q4, ")", 0, q6);
  m.add_input(q6, "a", 1, f);
  m.add_input(q3, "b", 0, q5);
  m.add_input(q5, "b", 0, q7);
  m.add_input(q7, "b", 0, q8);
  m.add_close(q8, ")", 4, f);
  return m;
}

}  // namespace fixtures
}  // namespace wpda
