#pragma once

#include <array>
#include <optional>
#include <vector>

#include "thermoporo/model.hpp"
#include "thermoporo/steppers.hpp"

namespace thermoporo {

/// Errors against a closed-form solution at time t: full H1 norms for
/// u, p, T and the L2 norm for xi.
struct ErrorReport {
  double t = 0.0;
  double u_h1 = 0.0;
  double xi_l2 = 0.0;
  double p_h1 = 0.0;
  double T_h1 = 0.0;

  [[nodiscard]] std::array<double, 4> as_array() const { return {u_h1, xi_l2, p_h1, T_h1}; }
};

ErrorReport error_report(const State& state, const ExactSolution& exact, const Spaces& spaces,
                         const TriMesh& mesh, int exactness = kLoadExactness);

/// ln(e_coarse / e_fine) / ln(ratio); empty when either error is not
/// positive or the ratio is not greater than one.
std::optional<double> observed_rate(double e_coarse, double e_fine, double ratio);

enum class RateBase { MeshSize, TimeStep };

struct RefinementLevel {
  int divisions;
  double dt;
};

struct ConvergenceSchedule {
  std::vector<RefinementLevel> levels;
  RateBase base = RateBase::MeshSize;
  double tau = 1.0;
  int load_exactness = kLoadExactness;
  int error_exactness = kLoadExactness;
};

struct ConvergenceRow {
  int divisions = 0;
  double h = 0.0;  ///< 1 / divisions, the table label
  double dt = 0.0;
  ErrorReport errors;
  /// Rates against the previous row; empty on the first row or when undefined.
  std::array<std::optional<double>, 4> rates;
};

struct ConvergenceTable {
  Algorithm algorithm;
  std::vector<ConvergenceRow> rows;
};

/// Runs every algorithm over the schedule; each mesh and its forms are
/// built once and shared by the algorithms. Needs problem.exact.
std::vector<ConvergenceTable> convergence_study(const Problem& problem,
                                                const ConvergenceSchedule& schedule,
                                                const std::vector<Algorithm>& algorithms, int k,
                                                int l, int workers = 2);

/// Fills the rate columns of consecutive rows.
void compute_rates(std::vector<ConvergenceRow>& rows, RateBase base);

struct TimingReport {
  Algorithm algorithm;
  double median_seconds = 0.0;
  std::vector<double> samples;
  PhaseTimings phases;  ///< of the median sample
  std::optional<ErrorReport> errors;
};

struct BenchmarkConfig {
  int divisions = 40;
  double dt = 1.0 / 16.0;
  double tau = 1.0;
  int k = 2;
  int l = 1;
  int repetitions = 3;
  int workers = 2;
};

/// Wall-clock time of a full run per algorithm (system assembly,
/// factorizations and time stepping), median over repetitions. The
/// algorithms are interleaved within each repetition.
std::vector<TimingReport> benchmark(const Problem& problem,
                                    const std::vector<Algorithm>& algorithms,
                                    const BenchmarkConfig& config);

}  // namespace thermoporo
