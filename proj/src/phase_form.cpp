#include "mrg/phase_form.hpp"

#include <algorithm>

#include "mrg/error.hpp"

namespace mrg {

SymbolSpace SymbolSpace::for_graph(const RibbonGraph& g) {
  SymbolSpace s;
  for (std::size_t k = 0; k < g.externals().size(); ++k) {
    s.symbols_.push_back({SymbolKind::External, k, "p[" + g.externals()[k].id + "]"});
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    s.symbols_.push_back({SymbolKind::LineP, e, "p[" + g.edges()[e].id + "]"});
    s.symbols_.push_back({SymbolKind::LineDeltaP, e, "dp[" + g.edges()[e].id + "]"});
  }
  s.num_externals_ = g.externals().size();
  s.num_base_ = s.symbols_.size();
  return s;
}

std::size_t SymbolSpace::add_atom(std::string name) {
  const std::size_t running = symbols_.size() - num_base_;
  symbols_.push_back({SymbolKind::Atom, running, std::move(name)});
  return symbols_.size() - 1;
}

LinearForm unit_form(std::size_t n, std::size_t a, const Rational& c) {
  LinearForm x(n);
  x[a] = c;
  return x;
}

LinearForm& axpy(LinearForm& y, const Rational& c, const LinearForm& x) {
  if (y.size() < x.size()) y.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!x[i].is_zero()) y[i] += c * x[i];
  }
  return y;
}

bool is_zero(const LinearForm& x) {
  return std::all_of(x.begin(), x.end(), [](const Rational& c) { return c.is_zero(); });
}

PhaseForm::PhaseForm(std::size_t n) : n_(n), a_(n * n) {}

void PhaseForm::add(std::size_t a, std::size_t b, const Rational& c) {
  if (a == b || c.is_zero()) return;
  a_[a * n_ + b] += c;
  a_[b * n_ + a] -= c;
}

void PhaseForm::add_wedge(const LinearForm& x, const LinearForm& y, const Rational& c) {
  for (std::size_t a = 0; a < x.size(); ++a) {
    if (x[a].is_zero()) continue;
    for (std::size_t b = 0; b < y.size(); ++b) {
      if (!y[b].is_zero()) add(a, b, c * x[a] * y[b]);
    }
  }
}

void PhaseForm::add_ordered_sum(const std::vector<LinearForm>& q) {
  LinearForm before(n_);
  for (const auto& x : q) {
    add_wedge(before, x);
    axpy(before, 1, x);
  }
}

void PhaseForm::substitute(std::size_t a, const LinearForm& value) {
  if (a < value.size() && !value[a].is_zero()) {
    throw Error(ErrorKind::InvalidArgument, "substituted symbol occurs in its own value");
  }
  std::vector<Rational> row(a_.begin() + static_cast<std::ptrdiff_t>(a * n_),
                            a_.begin() + static_cast<std::ptrdiff_t>((a + 1) * n_));
  for (std::size_t c = 0; c < n_; ++c) {
    a_[a * n_ + c] = 0;
    a_[c * n_ + a] = 0;
  }
  // sum_c A_ac s_a ^ s_c  ->  sum_c A_ac value ^ s_c
  for (std::size_t c = 0; c < n_; ++c) {
    if (!row[c].is_zero()) add_wedge(value, unit_form(n_, c), row[c]);
  }
}

void PhaseForm::resize(std::size_t n) {
  for (std::size_t a = n; a < n_; ++a) {
    for (std::size_t b = 0; b < n_; ++b) {
      if (!a_[a * n_ + b].is_zero()) throw Error(ErrorKind::InvalidArgument, "dropping a live symbol");
    }
  }
  std::vector<Rational> next(n * n);
  const std::size_t m = std::min(n, n_);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) next[a * n + b] = a_[a * n_ + b];
  }
  n_ = n;
  a_ = std::move(next);
}

void PhaseForm::scale_symbol(std::size_t a, const Rational& c) {
  for (std::size_t b = 0; b < n_; ++b) {
    a_[a * n_ + b] *= c;
    a_[b * n_ + a] *= c;
  }
}

Rational PhaseForm::evaluate(const std::vector<Vec2Q>& values, const Rational& theta) const {
  Rational sum = 0;
  for (std::size_t a = 0; a < n_; ++a) {
    for (std::size_t b = a + 1; b < n_; ++b) {
      const auto& c = a_[a * n_ + b];
      if (!c.is_zero()) sum += c * (values[a].x * values[b].y - values[a].y * values[b].x);
    }
  }
  return theta * sum / 2;
}

std::vector<PhaseTerm> PhaseForm::terms() const {
  std::vector<PhaseTerm> out;
  for (std::size_t a = 0; a < n_; ++a) {
    for (std::size_t b = a + 1; b < n_; ++b) {
      if (!a_[a * n_ + b].is_zero()) out.push_back({a, b, a_[a * n_ + b]});
    }
  }
  return out;
}

bool PhaseForm::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const Rational& c) { return c.is_zero(); });
}

PhaseForm& PhaseForm::operator-=(const PhaseForm& o) {
  if (o.n_ != n_) throw Error(ErrorKind::InvalidArgument, "phase forms over different symbol spaces");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

Rational evaluate(const LinearForm& x, const std::vector<Vec2Q>& values, bool component_y) {
  Rational sum = 0;
  for (std::size_t a = 0; a < x.size(); ++a) {
    if (!x[a].is_zero()) sum += x[a] * (component_y ? values[a].y : values[a].x);
  }
  return sum;
}

Vec2Q evaluate_vec(const LinearForm& x, const std::vector<Vec2Q>& values) {
  return {evaluate(x, values, false), evaluate(x, values, true)};
}

void substitute(LinearForm& x, std::size_t a, const LinearForm& value) {
  if (a >= x.size() || x[a].is_zero()) return;
  const Rational c = x[a];
  x[a] = 0;
  axpy(x, c, value);
}

}  // namespace mrg
