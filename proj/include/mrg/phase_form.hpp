#pragma once

// Exact antisymmetric bilinear forms over momentum symbols.
//
// phi = sum_{a<b} A_ab s_a ^ s_b with A antisymmetric and rational.

#include <cstddef>
#include <string>
#include <vector>

#include "mrg/graph.hpp"
#include "mrg/rational.hpp"

namespace mrg {

enum class SymbolKind { External, LineP, LineDeltaP, Atom };

struct Symbol {
  SymbolKind kind;
  std::size_t index;  // external or edge index; running number for atoms
  std::string name;
};

/// Externals first (p[x]), then per edge the pair p[l], dp[l].  Auxiliary
/// atoms may be appended for intermediate computations.
class SymbolSpace {
 public:
  SymbolSpace() = default;
  static SymbolSpace for_graph(const RibbonGraph& g);

  std::size_t size() const { return symbols_.size(); }
  const Symbol& operator[](std::size_t a) const { return symbols_[a]; }
  const std::vector<Symbol>& symbols() const { return symbols_; }

  std::size_t external(std::size_t k) const { return k; }
  std::size_t line_p(std::size_t e) const { return num_externals_ + 2 * e; }
  std::size_t line_dp(std::size_t e) const { return num_externals_ + 2 * e + 1; }
  std::size_t num_externals() const { return num_externals_; }
  std::size_t num_base() const { return num_base_; }

  std::size_t add_atom(std::string name);

 private:
  std::vector<Symbol> symbols_;
  std::size_t num_externals_ = 0;
  std::size_t num_base_ = 0;
};

/// Coefficient vector over a symbol space.
using LinearForm = std::vector<Rational>;

LinearForm unit_form(std::size_t n, std::size_t a, const Rational& c = 1);
LinearForm& axpy(LinearForm& y, const Rational& c, const LinearForm& x);  // y += c x
bool is_zero(const LinearForm& x);

struct PhaseTerm {
  std::size_t a, b;  // a < b
  Rational coefficient;
};

class PhaseForm {
 public:
  explicit PhaseForm(std::size_t n = 0);

  std::size_t size() const { return n_; }
  const Rational& coeff(std::size_t a, std::size_t b) const { return a_[a * n_ + b]; }

  /// phi += c s_a ^ s_b.
  void add(std::size_t a, std::size_t b, const Rational& c);
  /// phi += c x ^ y.
  void add_wedge(const LinearForm& x, const LinearForm& y, const Rational& c = 1);
  /// phi += sum_{i<j} q_i ^ q_j.
  void add_ordered_sum(const std::vector<LinearForm>& q);

  /// Replaces s_a by the linear form `value` (which must not involve s_a).
  void substitute(std::size_t a, const LinearForm& value);

  /// Grows (zero padding) or shrinks the symbol space.  Shrinking throws
  /// Error(InvalidArgument) when a dropped symbol still has a coefficient.
  void resize(std::size_t n);

  /// s_a -> c s_a.
  void scale_symbol(std::size_t a, const Rational& c);

  Rational evaluate(const std::vector<Vec2Q>& values, const Rational& theta) const;

  std::vector<PhaseTerm> terms() const;
  bool is_zero() const;

  PhaseForm& operator-=(const PhaseForm& o);
  friend PhaseForm operator-(PhaseForm a, const PhaseForm& b) { return a -= b; }
  bool operator==(const PhaseForm& o) const { return n_ == o.n_ && a_ == o.a_; }

 private:
  std::size_t n_;
  std::vector<Rational> a_;  // row-major, antisymmetric
};

Rational evaluate(const LinearForm& x, const std::vector<Vec2Q>& values, bool component_y);
Vec2Q evaluate_vec(const LinearForm& x, const std::vector<Vec2Q>& values);

/// Substitution on a linear form: s_a := value.
void substitute(LinearForm& x, std::size_t a, const LinearForm& value);

}  // namespace mrg
