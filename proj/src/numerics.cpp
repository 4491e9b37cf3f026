#include "mrg/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss.hpp>

#include "mrg/error.hpp"
#include "mrg/oscillation.hpp"

namespace mrg {

namespace {

constexpr double kRelTol = 1e-8;
constexpr double kPi = std::numbers::pi;

// log sinh(x) for x > 0 without overflow
double log_sinh(double x) { return x + std::log1p(-std::exp(-2.0 * x)) - std::numbers::ln2; }

// log of the integral of exp(logf(alpha)) over [a, b], done in u = log(alpha)
// after shifting by the largest sampled exponent.  The range is first cut to
// where the integrand is within e^-60 of that maximum, so that peaks pressed
// against an endpoint do not hide from the adaptive rule.
double log_integrate(const std::function<double(double)>& logf, double a, double b) {
  constexpr double kDrop = 60.0;
  constexpr int kProbe = 1024;
  const double ua = std::log(a);
  const double ub = std::log(b);
  auto logg = [&](double u) { return logf(std::exp(u)) + u; };
  std::vector<double> probe(kProbe + 1);
  auto at = [&](int k) { return ua + (ub - ua) * k / kProbe; };
  for (int k = 0; k <= kProbe; ++k) probe[k] = logg(at(k));
  const auto top = std::max_element(probe.begin(), probe.end()) - probe.begin();
  const double ref = probe[top];
  if (!std::isfinite(ref)) throw Error(ErrorKind::QuadratureFailure, "integrand vanishes on the whole range");

  // edge of the region {logg >= ref - kDrop}, refined between two probes
  auto edge = [&](int inside, int step) {
    int k = inside;
    while (k + step >= 0 && k + step <= kProbe && probe[k + step] >= ref - kDrop) k += step;
    if (k + step < 0 || k + step > kProbe) return at(k);
    double in = at(k), out = at(k + step);
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (in + out);
      (logg(mid) >= ref - kDrop ? in : out) = mid;
    }
    return out;
  };
  const double lo = edge(static_cast<int>(top), -1);
  const double hi = edge(static_cast<int>(top), +1);

  // composite 15-point Gauss-Legendre, panels doubled until two passes agree
  auto g = [&](double u) { return std::exp(logg(u) - ref); };
  auto composite = [&](int panels) {
    const double h = (hi - lo) / panels;
    double s = 0;
    for (int k = 0; k < panels; ++k) {
      s += boost::math::quadrature::gauss<double, 15>::integrate(g, lo + k * h, lo + (k + 1) * h);
    }
    return s;
  };
  double value = composite(4);
  bool converged = false;
  for (int panels = 8; panels <= 4096 && !converged; panels *= 2) {
    const double next = composite(panels);
    converged = std::abs(next - value) <= kRelTol * 0.1 * std::abs(next);
    value = next;
  }
  if (!converged || !(value > 0) || !std::isfinite(value)) {
    throw Error(ErrorKind::QuadratureFailure, "relative accuracy 1e-8 not reached");
  }
  return ref + std::log(value);
}

// Pairwise sum keeps the reduction order fixed and the rounding balanced.
double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 8) {
    double s = 0;
    for (double v : x) s += v;
    return s;
  }
  const auto half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

}  // namespace

void ModelParams::validate() const {
  if (!(theta > 0)) throw Error(ErrorKind::InvalidArgument, "theta must be positive");
  if (!(omega > 0)) throw Error(ErrorKind::InvalidArgument, "Omega must be positive");
  if (!(mass >= 0)) throw Error(ErrorKind::InvalidArgument, "mass must be nonnegative");
  if (!(M > 1)) throw Error(ErrorKind::InvalidArgument, "M must exceed 1");
  if (!(kappa > 0)) throw Error(ErrorKind::InvalidArgument, "kappa must be positive");
  if (!(lambda > 0)) throw Error(ErrorKind::InvalidArgument, "lambda must be positive");
}

std::array<double, 2> slice_range(const ModelParams& params, int i, const Vec2& p) {
  if (i < 0) throw Error(ErrorKind::InvalidArgument, "negative slice index");
  if (i == 0) {
    const double rate = norm2(p) + params.mass * params.mass + 2.0 * params.omega_tilde();
    return {1.0, 1.0 + 60.0 / rate};
  }
  return {std::pow(params.M, -2.0 * i), std::pow(params.M, -2.0 * (i - 1))};
}

double log_slice_integrand(const ModelParams& params, double alpha, const Vec2& p, const Vec2& pr, const Vec2& qr) {
  const double ot = params.omega_tilde();
  const double x = ot * alpha;
  const Vec2 s{pr[0] + qr[0], pr[1] + qr[1]};
  const Vec2 d{pr[0] - qr[0], pr[1] - qr[1]};
  return std::log(params.omega / (kPi * params.theta)) - log_sinh(2.0 * x) -
         alpha * (norm2(p) + params.mass * params.mass) - ot / 4.0 / std::tanh(x) * norm2(s) -
         ot / 4.0 * std::tanh(x) * norm2(d);
}

double log_propagator_slice(const ModelParams& params, int i, const Vec2& p, const Vec2& pr, const Vec2& qr) {
  params.validate();
  const auto [a, b] = slice_range(params, i, p);
  return log_integrate([&](double alpha) { return log_slice_integrand(params, alpha, p, pr, qr); }, a, b);
}

double propagator_slice(const ModelParams& params, int i, const Vec2& p, const Vec2& pr, const Vec2& qr) {
  return std::exp(log_propagator_slice(params, i, p, pr, qr));
}

BoundExponents BoundExponents::derived(const ModelParams& params) {
  return {1.0, 1.0 / (4.0 * params.M * params.M), 1.0};
}

BoundExponents BoundExponents::unit() { return {1.0, 1.0, 1.0}; }

double log_bound_factor(const ModelParams& params, const BoundExponents& exps, int i, const Vec2& p,
                        const Vec2& pr, const Vec2& qr) {
  const double up = std::pow(params.M, 2.0 * i);
  const Vec2 s{pr[0] + qr[0], pr[1] + qr[1]};
  const Vec2 d{pr[0] - qr[0], pr[1] - qr[1]};
  return -exps.p_sq / up * norm2(p) - exps.short_var * up * norm2(s) - exps.long_var / up * norm2(d);
}

std::vector<GridPoint> default_grid() {
  const double v[] = {-4, -2, 0, 2, 4};
  std::vector<GridPoint> grid;
  for (double a : v) {
    for (double b : v) {
      for (double c : v) grid.push_back({{a, 0}, {b, 0}, {c, 0}});
    }
  }
  return grid;
}

SliceBoundResult verify_slice_bound(const ModelParams& params, const BoundExponents& exps, int imin, int imax,
                                    const std::vector<GridPoint>& grid, std::array<int, 2> stability_range) {
  params.validate();
  if (imin > imax || grid.empty()) throw Error(ErrorKind::InvalidArgument, "empty slice range or grid");
  SliceBoundResult r;
  r.stability_range = stability_range;
  std::vector<double> log_k;
  for (int i = imin; i <= imax; ++i) {
    double best = -INFINITY;
    for (const auto& x : grid) {
      const double lr =
          log_propagator_slice(params, i, x.p, x.pr, x.qr) - log_bound_factor(params, exps, i, x.p, x.pr, x.qr);
      if (!std::isfinite(lr)) throw Error(ErrorKind::UnboundedRatio, "non-finite ratio at slice " + std::to_string(i));
      best = std::max(best, lr);
    }
    r.slices.push_back(i);
    log_k.push_back(best);
  }
  const auto [lo, hi] = std::minmax_element(log_k.begin(), log_k.end());
  if (*hi - *lo > std::log(10.0)) {
    throw Error(ErrorKind::UnboundedRatio, "bound ratio spreads over exp(" + std::to_string(*hi - *lo) +
                                               ") across slices");
  }
  for (double l : log_k) r.K_per_slice.push_back(std::exp(l));
  r.K = std::exp(*hi);
  double kmin = INFINITY;
  double kmax = 0;
  for (std::size_t n = 0; n < r.slices.size(); ++n) {
    if (r.slices[n] < stability_range[0] || r.slices[n] > stability_range[1]) continue;
    kmin = std::min(kmin, r.K_per_slice[n]);
    kmax = std::max(kmax, r.K_per_slice[n]);
  }
  r.variation = kmax > 0 ? (kmax - kmin) / kmax : 0;
  return r;
}

double generalised_line_value(const ModelParams& params, std::span<const int> scales, const Vec2& p,
                              const Vec2& pr, const Vec2& qr) {
  if (scales.size() < 2) throw Error(ErrorKind::InvalidArgument, "a generalised line has at least two segments");
  const Vec2 zero{0, 0};
  const auto n = scales.size() - 1;
  double log_value = 2.0 * static_cast<double>(n) * std::log(params.kappa);
  log_value += log_propagator_slice(params, scales.front(), p, pr, zero);
  for (std::size_t k = 1; k < n; ++k) log_value += log_propagator_slice(params, scales[k], p, zero, zero);
  log_value += log_propagator_slice(params, scales.back(), p, zero, qr);
  return std::exp(log_value);
}

double log_generalised_line_bound(const ModelParams& params, const BoundExponents& exps, double K,
                                  std::span<const int> scales, const Vec2& p, const Vec2& pr, const Vec2& qr,
                                  bool growing_p_factor) {
  const auto n = static_cast<double>(scales.size() - 1);
  const int im = *std::min_element(scales.begin(), scales.end());
  const bool swap = scales.back() > scales.front();
  const int i1 = std::max(scales.front(), scales.back());
  const int i2 = std::min(scales.front(), scales.back());
  const Vec2& hi = swap ? qr : pr;
  const Vec2& lo = swap ? pr : qr;
  const double p_factor = (growing_p_factor ? n + 1 : 1.0) * exps.p_sq * std::pow(params.M, -2.0 * im);
  return 2.0 * n * std::log(params.kappa) + (n + 1) * std::log(K) - p_factor * norm2(p) -
         exps.short_var * (std::pow(params.M, 2.0 * i1) * norm2(hi) + std::pow(params.M, 2.0 * i2) * norm2(lo));
}

GeneralisedBoundCheck verify_generalised_line_bound(const ModelParams& params, const BoundExponents& exps, double K,
                                                    std::span<const int> scales, const std::vector<GridPoint>& grid) {
  GeneralisedBoundCheck c;
  for (const auto& x : grid) {
    const Vec2 zero{0, 0};
    double log_value = 2.0 * static_cast<double>(scales.size() - 1) * std::log(params.kappa);
    log_value += log_propagator_slice(params, scales.front(), x.p, x.pr, zero);
    for (std::size_t k = 1; k + 1 < scales.size(); ++k) {
      log_value += log_propagator_slice(params, scales[k], x.p, zero, zero);
    }
    log_value += log_propagator_slice(params, scales.back(), x.p, zero, x.qr);
    const double lr = log_value - log_generalised_line_bound(params, exps, K, scales, x.p, x.pr, x.qr);
    const double lr_growing = log_value - log_generalised_line_bound(params, exps, K, scales, x.p, x.pr, x.qr, true);
    ++c.points;
    // a relative slack of 1e-9 absorbs the quadrature error
    if (lr > 1e-9) ++c.violations;
    if (lr_growing > 1e-9) ++c.growing_factor_violations;
    c.max_log_ratio = c.points == 1 ? lr : std::max(c.max_log_ratio, lr);
  }
  return c;
}

SlopeFit fit_slope(const std::vector<int>& i, const std::vector<double>& value, const std::vector<double>& stderr_,
                   double M, std::array<int, 2> fit_range) {
  std::vector<double> x, y, sy;
  for (std::size_t k = 0; k < i.size(); ++k) {
    if (i[k] < fit_range[0] || i[k] > fit_range[1]) continue;
    if (!(value[k] > 0)) throw Error(ErrorKind::MCVarianceTooHigh, "non-positive amplitude in the fit range");
    x.push_back(i[k]);
    y.push_back(std::log(value[k]) / std::log(M));
    sy.push_back(stderr_[k] / value[k] / std::log(M));
  }
  if (x.size() < 2) throw Error(ErrorKind::InvalidArgument, "fit range needs two slices");
  double xm = 0;
  for (double v : x) xm += v;
  xm /= static_cast<double>(x.size());
  double sxx = 0;
  for (double v : x) sxx += (v - xm) * (v - xm);
  SlopeFit f;
  double var = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double c = (x[k] - xm) / sxx;
    f.slope += c * y[k];
    var += c * c * sy[k] * sy[k];
  }
  f.stderr_ = std::sqrt(var);
  f.ci_low = f.slope - 1.96 * f.stderr_;
  f.ci_high = f.slope + 1.96 * f.stderr_;
  return f;
}

namespace {

struct LoopPhase {
  double q0, u_d, u_s;
};

// Reads q0, u_d, u_s off the rosette factor of a one-vertex tadpole after
// eliminating the second external momentum.
LoopPhase tadpole_phase(const RibbonGraph& g) {
  if (g.num_vertices() != 1 || g.num_edges() != 1 || g.externals().size() != 2 ||
      g.vertices()[0].kind != VertexKind::Moyal) {
    throw Error(ErrorKind::InvalidArgument, "scaling scans take a one-vertex, one-loop, two-point graph");
  }
  const auto t = spanning_tree(g, 0);
  auto r = rosette_factor(g, t);
  const auto& s = r.symbols;
  const std::size_t x1 = s.external(0), x2 = s.external(1), p = s.line_p(0), dp = s.line_dp(0);
  LinearForm x2_value(s.size());
  x2_value[x1] = -1;
  x2_value[dp] = -1;
  r.phase.substitute(x2, x2_value);
  for (const auto& term : r.phase.terms()) {
    const bool known = (term.a == x1 && (term.b == p || term.b == dp)) || (term.a == p && term.b == dp);
    if (!known) throw Error(ErrorKind::InvalidArgument, "unexpected phase term");
  }
  return {r.phase.coeff(p, dp).convert_to<double>(), r.phase.coeff(x1, p).convert_to<double>(),
          r.phase.coeff(x1, dp).convert_to<double>()};
}

struct Moments {
  double sum = 0, sum_sq = 0, abs_sum = 0, abs_sum_sq = 0;
};

}  // namespace

ScanResult scaling_scan(const ModelParams& params, const RibbonGraph& g, const ScanOptions& options) {
  params.validate();
  if (options.samples < 2) throw Error(ErrorKind::InvalidArgument, "at least two samples per slice");
  const auto phase = tadpole_phase(g);
  ScanResult result;
  result.q0 = phase.q0;
  result.u_d = phase.u_d;
  result.u_s = phase.u_s;

  const double ot = params.omega_tilde();
  const double th = params.theta;
  const double sig2 = options.sigma2;
  const double c = phase.q0 + 0.5 * phase.u_d;
  // d^2pr d^2qr = d^2s d^2d / 4; the Gaussians in s and d integrate to pi/A,
  // pi/B with A B = (ot/4)^2; the commutative momentum gives pi/alpha.
  // lambda: the single vertex
  const double measure = params.lambda * 0.25 * (16.0 * kPi * kPi / (ot * ot)) * kPi * params.omega / (kPi * th);
  const double smear = kPi * sig2 / 2.0;

  constexpr std::uint64_t kBatch = 1 << 16;
  std::vector<int> is;
  std::vector<double> amp, err, abs_amp, abs_err;
  for (int i = std::max(options.imin, 1); i <= options.imax; ++i) {
    const auto [a, b] = slice_range(params, i, {0, 0});
    const double width = std::log(b / a);
    const std::uint64_t batches = (options.samples + kBatch - 1) / kBatch;
    std::vector<double> sums(batches), sums_sq(batches), abs_sums(batches), abs_sums_sq(batches);
    for (std::uint64_t batch = 0; batch < batches; ++batch) {
      std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                        static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(batch)};
      std::mt19937_64 rng(seq);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      std::normal_distribution<double> normal(0.0, 1.0);
      const std::uint64_t n = std::min(kBatch, options.samples - batch * kBatch);
      Moments m;
      for (std::uint64_t k = 0; k < n; ++k) {
        const double alpha = a * std::exp(width * unit(rng));
        const double x = ot * alpha;
        const double A = ot / 4.0 / std::tanh(x);
        const double B = ot / 4.0 * std::tanh(x);
        const double ss = std::sqrt(0.5 / A), sd = std::sqrt(0.5 / B);
        const Vec2 s{ss * normal(rng), ss * normal(rng)};
        const Vec2 d{sd * normal(rng), sd * normal(rng)};
        const Vec2 w{phase.u_d * d[0] + phase.u_s * s[0], phase.u_d * d[1] + phase.u_s * s[1]};
        const double wedge_ds = th / 2.0 * (d[0] * s[1] - d[1] * s[0]);
        const double weight = width * measure * std::exp(-alpha * params.mass * params.mass - log_sinh(2.0 * x));
        const double h =
            smear * std::exp(-norm2(s) / (2.0 * sig2) - sig2 * th * th * norm2(w) / 32.0) * weight;
        const double v = h * std::cos(c * wedge_ds);
        m.sum += v;
        m.sum_sq += v * v;
        m.abs_sum += h;
        m.abs_sum_sq += h * h;
      }
      sums[batch] = m.sum;
      sums_sq[batch] = m.sum_sq;
      abs_sums[batch] = m.abs_sum;
      abs_sums_sq[batch] = m.abs_sum_sq;
    }
    const double n = static_cast<double>(options.samples);
    auto finish = [&](const std::vector<double>& s1, const std::vector<double>& s2) {
      const double mean = pairwise_sum(s1) / n;
      const double var = std::max(0.0, pairwise_sum(s2) / n - mean * mean);
      return std::array<double, 2>{mean, std::sqrt(var / (n - 1))};
    };
    const auto [mean, se] = finish(sums, sums_sq);
    const auto [abs_mean, abs_se] = finish(abs_sums, abs_sums_sq);
    if (!(mean > 0) || se > options.max_relative_stderr * mean) {
      throw Error(ErrorKind::MCVarianceTooHigh, "slice " + std::to_string(i) + ": relative standard error " +
                                                    std::to_string(se / std::abs(mean)));
    }
    result.rows.push_back({i, mean, se, abs_mean, abs_se});
    is.push_back(i);
    amp.push_back(mean);
    err.push_back(se);
    abs_amp.push_back(abs_mean);
    abs_err.push_back(abs_se);
  }
  result.phase_fit = fit_slope(is, amp, err, params.M, options.fit_range);
  result.abs_fit = fit_slope(is, abs_amp, abs_err, params.M, options.fit_range);
  return result;
}

ScanResult kappa_chain_scan(const ModelParams& params, const ScanOptions& options) {
  params.validate();
  ScanResult result;
  const double ot = params.omega_tilde();
  const double m2 = params.mass * params.mass;
  // int d^2p exp(-(alpha + 2/sigma^2) p^2) = pi / (alpha + 2/sigma^2)
  const double lift = 2.0 / options.sigma2;
  std::vector<int> is;
  std::vector<double> value, zero;
  for (int i = std::max(options.imin, 1); i <= options.imax; ++i) {
    const auto [a, b] = slice_range(params, i, {0, 0});
    const double lv = log_integrate(
        [&](double alpha) {
          return 2.0 * std::log(params.kappa) + std::log(params.omega / (kPi * params.theta)) - log_sinh(2.0 * ot * alpha) - alpha * m2 +
                 std::log(kPi / (alpha + lift));
        },
        a, b);
    const double v = std::exp(lv);
    result.rows.push_back({i, v, 0.0, v, 0.0});
    is.push_back(i);
    value.push_back(v);
    zero.push_back(0.0);
  }
  result.phase_fit = fit_slope(is, value, zero, params.M, options.fit_range);
  result.abs_fit = result.phase_fit;
  return result;
}

}  // namespace mrg
