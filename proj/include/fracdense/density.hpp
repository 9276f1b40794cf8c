#pragma once

// Density pipeline: boundary growth of the model solution, blow-up limits,
// derivative spanning by a bump dictionary, monomial rescaling and the
// end-to-end approximation of a target by an s-harmonic function.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fracdense/finite_difference.hpp"
#include "fracdense/fraclap.hpp"
#include "fracdense/kernel_extension.hpp"
#include "fracdense/multi_index.hpp"
#include "fracdense/polyapprox.hpp"

namespace fracdense {

// ---------------------------------------------------------------------------
// Boundary growth and blow-up

/// The profile bump of the model solution: centre 2.5, half-width 0.5.
Bump standard_growth_bump(double amplitude = 1.0);

/// Model solution psi on B_1(0) with exterior data psi_bar(|y|), i.e. the
/// given bump (support inside (2, 3)) and its mirror image.
SHarmonicFn growth_function(const Bump& bump, const FracParams& params,
                            const QuadSettings& quad = {});

/// kappa = 2^s c(1,s) int psi_bar(rho) (rho^2-1)^-s [(rho-1)^-1 + (rho+1)^-1] drho.
/// Throws GeometryError unless the bump support lies in (2, 3).
double boundary_growth_constant(const Bump& bump, const FracParams& params,
                                const QuadSettings& quad = {});

struct GrowthFit {
  double kappa = 0.0;
  double s = 0.0;
  /// Coefficient b of the first-order correction b * eps.
  double correction = 0.0;
};

/// Least-squares fit of log psi(1 - eps) = log kappa + s log eps + b eps.
/// Needs at least 6 distinct eps in (0, 0.1].
GrowthFit fit_boundary_growth(const SHarmonicFn& fn, const std::vector<double>& eps_grid);

/// Default eps grid 2^-4, ..., 2^-9.
std::vector<double> default_growth_grid();

/// v_{e,j}(x) = j^s psi(x/j - e), exact on the ball B_j(j e).
SHarmonicFn blowup_member(int e, int j, const SHarmonicFn& base);

/// int over B_1(e) of |v_{e,j}(x) - kappa (x e)_+^s| dx.
double blowup_l1_error(int e, int j, double kappa, const SHarmonicFn& base,
                       const QuadSettings& quad = {});

// ---------------------------------------------------------------------------
// Derivative spanning

struct Placement {
  std::uint64_t seed = 0;
  /// Members come in exact mirror pairs (no asymmetric perturbation).
  bool mirror = false;
};

struct Dictionary {
  std::vector<SHarmonicFn> members;
  std::vector<std::string> labels;

  [[nodiscard]] std::size_t size() const { return members.size(); }
  [[nodiscard]] const Ball& ball() const { return members.front().ball(); }
};

/// `count` single-bump members on B_1(0) with centres spread over
/// +-[1.5, 6] and half-widths cycling through {0.1, 0.25, 0.5}.
Dictionary build_dictionary(const FracParams& params, int count, const Placement& placement = {},
                            const QuadSettings& quad = {});

/// Column i holds D^alpha of member i at p for alpha = 0..m.
Eigen::MatrixXd derivative_matrix(const Dictionary& dict, double p, int m);

inline constexpr double kSpanTol = 1e-6;
inline constexpr double kRankTol = 1e-8;
inline constexpr double kIllConditioned = 1e10;

struct SpanSolution {
  std::vector<double> coefficients;
  MultiIndex beta;
  double point = 0.0;
  DerivativeVector achieved;
  double condition_number = 0.0;
  bool ill_conditioned = false;
  int rank = 0;
  /// Sum of members weighted by the coefficients.
  SHarmonicFn v;
};

/// Minimum-norm solution of A c = e_beta by SVD, then the combined function
/// and its re-evaluated jet. Throws RankDeficient when the numerical rank is
/// below |beta| + 1.
SpanSolution span_solve(const Dictionary& dict, const MultiIndex& beta, double p = 0.0);

struct RescaleResult {
  SHarmonicFn u;
  double eta = 1.0;
  double error = 0.0;
  /// (eta, measured C^k gap) for every tried eta.
  std::vector<std::pair<double, double>> history;
};

inline constexpr int kEtaFloorExponent = 20;

/// u_eta(x) = eta^-|beta| v(eta x) for eta = 2^-i, i = 1..20, stopping at the
/// first eta whose measured C^k gap to x^beta/beta! is at most `budget`.
/// Throws NonConvergence when the floor is reached.
RescaleResult rescale_for_monomial(const SpanSolution& sol, int k, double budget,
                                   const CkErrorOptions& options = {});

/// C^k gap of a fixed eta, for studying the rate.
double rescaled_gap(const SpanSolution& sol, double eta, int k, const CkErrorOptions& options = {});

// ---------------------------------------------------------------------------
// End-to-end approximation

/// Weighted sum of extensions, each s-harmonic in a ball containing B_1(0).
class SHarmonicSum {
 public:
  SHarmonicSum() = default;
  void add(double weight, SHarmonicFn piece);

  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] std::size_t size() const { return pieces_.size(); }
  [[nodiscard]] const std::vector<std::pair<double, SHarmonicFn>>& pieces() const {
    return pieces_;
  }
  /// Radius about 0 outside of which every piece vanishes (0 when empty).
  [[nodiscard]] double support_radius() const;
  [[nodiscard]] std::vector<double> breakpoints() const;

 private:
  std::vector<std::pair<double, SHarmonicFn>> pieces_;
};

enum class Method { TaylorRescale, GlobalLsq };

std::string method_name(Method m);
/// Throws InputError for unknown names.
Method parse_method(const std::string& name);

struct ApproxOptions {
  FracParams params{};
  Method method = Method::TaylorRescale;
  Placement placement{};
  /// Dictionary size; 0 picks 2(|beta|+1)+4 per monomial (taylor-rescale) or
  /// 24 (global-lsq).
  int dictionary_size = 0;
  QuadSettings quad{};
  CkErrorOptions grid{};
  /// Points of the residual grid in B_0.9.
  int residual_points = 9;
  FracLapSettings fraclap{};
  /// Ridge weight for global-lsq, relative to the largest singular value squared.
  double ridge = 1e-12;
  bool check_residual = true;
};

struct MonomialRecord {
  int order = 0;
  double coefficient = 0.0;
  double eta = 1.0;
  double budget = 0.0;
  double error = 0.0;
  double condition_number = 0.0;
  double support_radius = 0.0;
};

struct ApproximationReport {
  std::string method;
  int k = 0;
  double epsilon = 0.0;
  FracParams params{};
  std::vector<MonomialRecord> monomials;
  /// Polynomial the pipeline reduced the target to.
  Polynomial polynomial;
  /// Measured C^k distance of the polynomial to the target (0 for polynomial targets).
  double polynomial_error = 0.0;
  std::optional<MollifierPlan> plan;
  double r_total = 0.0;
  /// Entry gamma: max |D^gamma (u - f)| on the grid.
  std::vector<double> errors;
  double error = 0.0;
  std::optional<ResidualReport> residual;
  /// u at 10 points outside B_{R_total}; all must vanish.
  std::vector<std::pair<double, double>> outside_samples;
  bool support_ok = true;
  std::vector<double> condition_numbers;
  double wall_time = 0.0;
};

/// A target is either an explicit polynomial or an evaluable C^k function.
using ApproxTarget = std::variant<Polynomial, Target>;

struct Approximation {
  SHarmonicSum u;
  ApproximationReport report;
};

/// Builds u, s-harmonic in B_1 and compactly supported, with
/// ||f - u||_{C^k(B_1)} <= epsilon as measured by ck_error.
Approximation approximate(const ApproxTarget& target, int k, double epsilon,
                          const ApproxOptions& options = {});

}  // namespace fracdense
