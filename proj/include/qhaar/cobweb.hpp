#pragma once

#include <string>
#include <utility>
#include <vector>

namespace qhaar {

// Chord diagram on a ring of 2E vertices.  When arc_vertices = T > 0 the
// ring splits into four arcs of T vertices with alternating colors (arcs 0
// and 2 red, 1 and 3 blue) and an operator mark sits on each of the four
// boundary segments between consecutive arcs.
struct CobwebDiagram {
  int n_vertices = 0;                         // ring size 2E
  std::vector<std::pair<int, int>> matching;  // E chords on 0..2E-1
  int arc_vertices = 0;                       // 0 = uncolored

  bool operator==(const CobwebDiagram&) const = default;
};

// validated constructor: perfect matching, and for colored diagrams
// n_vertices = 4T with every chord joining differently-colored arcs
CobwebDiagram make_diagram(int n_vertices, std::vector<std::pair<int, int>> matching,
                           int arc_vertices = 0);

inline int edge_count(const CobwebDiagram& d) { return static_cast<int>(d.matching.size()); }

// Exact index-loop count N: cycles of the walk that crosses a chord and then
// advances one boundary segment clockwise.  The empty ring is one loop.
int count_loops(const CobwebDiagram& d);

// number of interleaved chord pairs around the ring
int crossings(const CobwebDiagram& d);

// q^count_loops for an uncolored diagram, as an exact integer
long long value(const CobwebDiagram& d, int q);

// true when some index loop of a colored diagram passes an odd number of
// marked boundary segments (its trace factor Tr(Z^odd) = 0 kills the term)
bool vanishes_by_decoration(const CobwebDiagram& d);

// chords whose endpoints lie in arcs a and b (colored diagrams)
int chords_between_arcs(const CobwebDiagram& d, int arc_a, int arc_b);

// One applicable rewrite.  A bubble removes the chord (a, a+1); a parallel
// step replaces the chords {a, c+1}, {a+1, c} by the single chord {a, c}.
// Either way two ring vertices disappear and one index loop is credited.
struct Reduction {
  bool bubble = false;
  int a = 0;
  int c = 0;  // unused for bubbles

  bool operator==(const Reduction&) const = default;
};

std::vector<Reduction> available_reductions(const CobwebDiagram& d);
CobwebDiagram apply_reduction(const CobwebDiagram& d, const Reduction& r);

struct ReductionReport {
  CobwebDiagram reduced;     // neither rule applies to it
  int removed_parallel = 0;
  int removed_bubble = 0;
  int loop_credits = 0;      // = removed_parallel + removed_bubble
};

// exhaustive reduction (first applicable rewrite each step; the final edge
// count and credit total are order-independent)
ReductionReport reduce(const CobwebDiagram& d);

// The colored 4-arc diagram whose first n_within time slices pair each copy
// with its own conjugate (arcs 0-1 and 2-3) and whose remaining slices pair
// across the copies (arcs 0-3 and 2-1), chords nesting outermost-first.
CobwebDiagram ladder_diagram(int T, int n_within);

// All color-legal matchings on the 4-arc ring (arcs of T vertices) that
// survive the four boundary marks and reach the maximal loop count
// N = E - 1; deterministic order.  Requires 2 <= T <= 4.
std::vector<CobwebDiagram> enumerate_leading(int T);

// text form "2E; a-b, c-d, ...", plus "; colors: T" when colored
CobwebDiagram parse_diagram(const std::string& text);
std::string to_string(const CobwebDiagram& d);

}  // namespace qhaar
