#pragma once

// Degree-of-convergence bounds and divergence classification.

#include <string_view>
#include <vector>

#include "mrg/graph.hpp"
#include "mrg/multiscale.hpp"
#include "mrg/rational.hpp"

namespace mrg {

/// N - 4 + 4g + 2(b-1), the bound without insertions.  Throws InvalidTopology
/// unless N >= 2 is even, g >= 0 and b >= 1.
int omega_kappa0(int N, int genus, int broken_faces);

/// (N - 6 + 8g + 4(b-1) + 2 v4) / 2 for the phi^6 model.
Rational omega_phi6(int N, int genus, int broken_faces, int v4);

enum class BoundCase {
  NotTreeLike,         // N + 4 n_kappa
  NonPlanar,           // N
  PlanarBroken,        // N - 2
  PlanarRegularKappa,  // N - 2, generalised lines inside
  PlanarRegular,       // N - 4 + 2 N_kappa, or N - 4 + 2(N_kappa - 1) when every leg is an insertion
  MoyalFreeChain,      // insertion chain without Moyal vertex: logarithmic
};

enum class Counterterm { None, MassWaveOmega, Lambda, KappaSquared };

std::string_view to_string(BoundCase c);
std::string_view to_string(Counterterm c);

struct NodeData {
  int N = 0;
  int N_kappa = 0;
  int genus = 0;
  int broken_faces = 1;
  bool tree_like = true;
  int n_kappa = 0;  // generalised loop lines
  bool e_kappa_empty = true;

  bool operator==(const NodeData&) const = default;
};

struct NodeVerdict {
  BoundCase bound_case;
  int omega;  // lower bound on the degree of convergence
  bool divergent;
  bool logarithmic;
  Counterterm counterterm;
};

/// Throws InconsistentNode for odd or non-positive N, N_kappa outside [0, N],
/// negative genus or n_kappa, b < 1, or a non-tree-like node without
/// generalised lines.
BoundCase bound_case(const NodeData& d);
NodeVerdict classify_node(const NodeData& d);

/// Verdict for a chain of insertions with no Moyal vertex.
NodeVerdict classify_moyal_free_chain();

struct NodeReport {
  int node = 0;  // index into the GN tree
  int level = 0;
  int index = 0;
  NodeData data;
  bool moyal_free = false;
  NodeVerdict verdict;
};

struct DivergenceReport {
  GNTree tree;
  /// One entry per GN node owning at least one line.
  std::vector<NodeReport> nodes;
  std::vector<Counterterm> counterterms;  // distinct, in enum order
  bool any_divergent = false;
};

DivergenceReport classify_graph(const RibbonGraph& g, const ScaleAttribution& mu);

}  // namespace mrg
