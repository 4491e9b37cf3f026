#pragma once

// Vertex oscillations after contracting a rooted spanning tree.
//
// Every port carries an incoming momentum.  A line with end momenta q1, q2
// (q1 met first on the counterclockwise contour of the tree) has the line
// variables p = q1 - q2 and dp = q1 + q2.  After contraction the total vertex
// phase is sum_{a<b} x_a ^ x_b over the contour sequence, in which a loop line
// shows up at both of its ends and a tree line brackets its branch with dp/2
// on either side.  The closed forms below organise that sum by the relative
// position of lines and external legs.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mrg/graph.hpp"
#include "mrg/phase_form.hpp"

namespace mrg {

enum class ContourItemKind { External, LoopEnd, TreeDown, TreeUp };

struct ContourItem {
  ContourItemKind kind;
  std::size_t index;  // external or edge index
  std::size_t port;
};

/// Position of line l relative to line l'.  With (s1,s2) and (t1,t2) the two
/// contour positions: Before s2<t1, After t2<s1, Contains s1<t1<t2<s2,
/// Inside t1<s1<s2<t2, CrossesLeft s1<t1<s2<t2 (l crosses l' by the left),
/// CrossedLeft t1<s1<t2<s2.
enum class LineRelation { Before, After, Contains, Inside, CrossesLeft, CrossedLeft };

struct ContourOrder {
  std::vector<ContourItem> items;
  std::vector<std::array<std::size_t, 2>> line_positions;  // per edge, ascending
  std::vector<int> first_end;                              // per edge: end met first
  std::vector<std::size_t> external_position;              // per external leg
  std::vector<bool> loop;                                  // per edge

  LineRelation relation(std::size_t l, std::size_t l2) const;
  /// A loop line arches over an external leg when the leg sits between its ends.
  bool arches_over(std::size_t l, std::size_t external) const;
};

/// Throws Disconnected (tree does not span a connected graph) or NotMoyal
/// (graph holds insertion vertices).
ContourOrder contour_order(const RibbonGraph& g, const SpanningTree& t);

struct RosettePhase {
  SymbolSpace symbols;
  PhaseForm phase;
  LinearForm constraint;  // argument of the global delta
};

/// Closed-form rosette factor, the production path.  A tree line acts as a
/// point carrying dp at its contraction point and contributes 1/2 p ^ dp; its
/// p is the routed momentum, so equality with the vertex phase holds on
/// assignments that respect the routing.
RosettePhase rosette_factor(const RibbonGraph& g, const SpanningTree& t);

/// The other reading of tree-line positions: a tree line arches over its
/// branch with dp/2 at both ends and carries no p term.  This form equals the
/// vertex phase identically in the port momenta.
RosettePhase rosette_factor_arch_reading(const RibbonGraph& g, const SpanningTree& t);

/// Contracts the tree lines one at a time, starting from the root vertex.
RosettePhase tree_reduce(const RibbonGraph& g, const SpanningTree& t);

struct MomentumRouting {
  SymbolSpace symbols;
  /// p of each tree line in terms of externals, loop p and dp; empty for loops.
  std::vector<std::optional<LinearForm>> tree_momentum;
  /// Momentum entering the child vertex through each tree line.
  std::vector<std::optional<LinearForm>> child_port;
  LinearForm constraint;
  std::vector<bool> free;  // per symbol
};

MomentumRouting momentum_routing(const RibbonGraph& g, const SpanningTree& t);

/// Port momentum of every port as a linear form, with tree-line momenta
/// expressed through their p and dp symbols.
std::vector<LinearForm> port_momenta(const RibbonGraph& g, const ContourOrder& order, const SymbolSpace& s);

/// Random rational values for every base symbol: free symbols drawn with
/// numerators and denominators bounded by `bound`, the pivot fixed by the
/// global constraint, tree-line p solved by the routing.
std::vector<Vec2Q> random_assignment(const MomentumRouting& routing, std::mt19937_64& rng, int bound = 9);

/// Sum over vertices of sum_{i<j} q_i ^ q_j in port order, with tree-line
/// momenta solved by peeling leaves.  Values for externals, loop p and all dp
/// are read from `values`; tree-line p values are ignored.  Throws
/// InconsistentAssignment when the root vertex does not conserve momentum.
Rational phase_oracle(const RibbonGraph& g, const SpanningTree& t, const std::vector<Vec2Q>& values,
                      const Rational& theta = 1);

/// Phase as a function of free momenta only: tree p replaced by the routing,
/// loop p oriented from edge end 0 to end 1, and the global constraint used
/// to eliminate its pivot (first external leg, else first dp).
PhaseForm canonical_phase(const RibbonGraph& g, const SpanningTree& t, const RosettePhase& r);

struct ReadingComparison {
  bool agree;
  PhaseForm difference;  // canonical(point reading) - canonical(arch reading)
};

ReadingComparison compare_readings(const RibbonGraph& g, const SpanningTree& t);

struct OracleOptions {
  std::size_t trials = 100;    // random assignments per rooted tree
  std::size_t max_trees = 0;   // spanning trees visited, 0 = all
  std::uint64_t seed = 1;
  bool corrupt_coefficient = false;  // negative control: perturbs one rosette coefficient
};

struct OracleMismatch {
  std::vector<std::size_t> tree_edges;
  std::size_t root = 0;
  std::string which;  // "rosette_factor" or "tree_reduce"
  std::vector<Vec2Q> assignment;
  Rational expected, got;
};

struct OracleSummary {
  std::size_t trees = 0;  // rooted trees
  std::size_t checks = 0;
  std::size_t matches = 0;
  std::optional<OracleMismatch> first_mismatch;

  bool passed() const { return matches == checks; }
};

/// Both rosette_factor and tree_reduce against phase_oracle, for every root
/// and every spanning tree up to the limit.
OracleSummary oracle_check(const RibbonGraph& g, const OracleOptions& options);

}  // namespace mrg
