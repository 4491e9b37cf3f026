#pragma once

// Sliced propagators, their bounds, and scaling scans of one-loop amplitudes.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "mrg/graph.hpp"

namespace mrg {

struct ModelParams {
  double theta = 1.0;
  double omega = 1.0;
  double mass = 1.0;
  double kappa = 1.0;
  double lambda = 1.0;
  double M = 2.0;

  double omega_tilde() const { return 2.0 * omega / theta; }
  /// Throws InvalidArgument unless theta, omega, kappa, lambda > 0, mass >= 0
  /// and M > 1.
  void validate() const;
};

using Vec2 = std::array<double, 2>;

inline double norm2(const Vec2& v) { return v[0] * v[0] + v[1] * v[1]; }

/// Schwinger-parameter range of slice i: [1, inf) for i = 0 (cut where the
/// integrand has decayed by e^-60), [M^-2i, M^-2(i-1)] otherwise.
std::array<double, 2> slice_range(const ModelParams& params, int i, const Vec2& p);

/// log of the integrand of slice i in the Schwinger parameter alpha.
double log_slice_integrand(const ModelParams& params, double alpha, const Vec2& p, const Vec2& pr, const Vec2& qr);

/// log C^i(p, pr; p, qr).  Throws QuadratureFailure when the adaptive rule
/// cannot reach 1e-8 relative accuracy.
double log_propagator_slice(const ModelParams& params, int i, const Vec2& p, const Vec2& pr, const Vec2& qr);
double propagator_slice(const ModelParams& params, int i, const Vec2& p, const Vec2& pr, const Vec2& qr);

/// Exponent constants of the slice bound
///   K exp(-a M^-2i p^2) exp(-b M^2i (pr+qr)^2 - c M^-2i (pr-qr)^2).
struct BoundExponents {
  double p_sq;       // a
  double short_var;  // b
  double long_var;   // c

  /// a = 1, b = 1/(4 M^2), c = 1: constants that do hold on every slice.
  static BoundExponents derived(const ModelParams& params);
  /// a = b = c = 1.  The short-variable decay is overstated by 4 M^2 and the
  /// ratio blows up with i.
  static BoundExponents unit();
};

double log_bound_factor(const ModelParams& params, const BoundExponents& exps, int i, const Vec2& p,
                        const Vec2& pr, const Vec2& qr);

struct GridPoint {
  Vec2 p, pr, qr;
};

/// 5 x 5 x 5 grid: p, pr, qr each along the x axis at {-4, -2, 0, 2, 4}.
std::vector<GridPoint> default_grid();

struct SliceBoundResult {
  std::vector<int> slices;
  std::vector<double> K_per_slice;  // max ratio on the grid, per slice
  double K = 0;                     // max over all slices
  double variation = 0;             // (max - min) / max of K over the stability range
  std::array<int, 2> stability_range{2, 6};
};

/// Fits K := max value/bound-factor over grid and slices.  Throws
/// UnboundedRatio when K differs by more than a factor 10 between slices, or
/// a ratio is not finite.
SliceBoundResult verify_slice_bound(const ModelParams& params, const BoundExponents& exps, int imin, int imax,
                                    const std::vector<GridPoint>& grid, std::array<int, 2> stability_range = {2, 6});

/// kappa^2n C^{i1}(p,pr;p,0) prod C^{ik}(p,0;p,0) C^{i(n+1)}(p,0;p,qr).
double generalised_line_value(const ModelParams& params, std::span<const int> scales, const Vec2& p,
                              const Vec2& pr, const Vec2& qr);

/// log of kappa^2n K^(n+1) exp(-M^-2im p^2) exp(-b M^2i1 pr^2 - b M^2i2 qr^2),
/// with pr attached to the end of larger scale (the momenta are exchanged when
/// the last segment has the larger scale).  With `growing_p_factor` the p decay
/// is (n+1) M^-2im instead.
double log_generalised_line_bound(const ModelParams& params, const BoundExponents& exps, double K,
                                  std::span<const int> scales, const Vec2& p, const Vec2& pr, const Vec2& qr,
                                  bool growing_p_factor = false);

struct GeneralisedBoundCheck {
  std::size_t points = 0;
  std::size_t violations = 0;
  std::size_t growing_factor_violations = 0;
  double max_log_ratio = 0;  // log(value / bound), <= 0 when the bound holds
};

GeneralisedBoundCheck verify_generalised_line_bound(const ModelParams& params, const BoundExponents& exps, double K,
                                                    std::span<const int> scales, const std::vector<GridPoint>& grid);

struct ScanOptions {
  int imin = 1;
  int imax = 6;
  std::array<int, 2> fit_range{2, 6};
  std::uint64_t samples = 1000000;  // per slice
  std::uint64_t seed = 1;
  double sigma2 = 16.0;             // width of the Gaussian test functions on the legs
  double max_relative_stderr = 0.25;
};

struct ScanRow {
  int i;
  double amplitude, stderr_;
  double abs_amplitude, abs_stderr;
};

struct SlopeFit {
  double slope = 0;
  double stderr_ = 0;
  double ci_low = 0, ci_high = 0;  // 95%
};

struct ScanResult {
  std::vector<ScanRow> rows;
  SlopeFit phase_fit;  // real part of the oscillating amplitude
  SlopeFit abs_fit;    // |integrand|
  /// phi = q0 p ^ dp + x ^ (u_d p + u_s dp) for the loop line (p, dp) and one
  /// external momentum x, the other eliminated by momentum conservation.
  double q0 = 0, u_d = 0, u_s = 0;
};

/// Least squares slope of log_M(value) against i over the fit range, with the
/// error propagated from the per-slice standard errors.
SlopeFit fit_slope(const std::vector<int>& i, const std::vector<double>& value, const std::vector<double>& stderr_,
                   double M, std::array<int, 2> fit_range);

/// Monte Carlo amplitude of a one-vertex, one-loop, two-point graph in each
/// slice, external momenta smeared by Gaussian test functions.  Throws
/// InvalidArgument for other graphs and MCVarianceTooHigh when a slice's
/// relative standard error exceeds the option's limit.
ScanResult scaling_scan(const ModelParams& params, const RibbonGraph& g, const ScanOptions& options);

/// Slices of the insertion chain integral  kappa^2 int d^2p f(p)^2 C^i(p,0;p,0),
/// evaluated by quadrature (standard errors are zero).
ScanResult kappa_chain_scan(const ModelParams& params, const ScanOptions& options);

}  // namespace mrg
