#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace gevrey::qmc {

using Integrand = std::function<double(std::span<const double>)>;

/// 2 zeta(2 theta) / (2 pi^2)^theta, theta in (1/2, 1].
double phi_theta(double theta);

struct PODWeights {
  double delta = 1.0;
  double theta = 1.0;
  std::vector<double> beta;  // beta[j - 1] for coordinate j

  /// Throws ValidationError unless delta >= 1, theta in (1/2, 1], beta > 0.
  void validate() const;
};

/// gamma_u for u given as 1-based coordinates. Empty u gives 1.
double pod_weight(const PODWeights& w, std::span<const std::size_t> u);

/// log gamma_u; stays finite where pod_weight would overflow.
double log_pod_weight(const PODWeights& w, std::span<const std::size_t> u);

/// beta_j from a rule string: "c", "j^-p" or "c*j^-p". Returns beta_1..beta_s.
std::vector<double> parse_beta_rule(const std::string& rule, std::size_t s);

/// Highest subset order carried by the POD recursion.
inline constexpr std::size_t kOrderCap = 30;

struct CbcResult {
  std::vector<std::uint64_t> z;
  std::vector<double> error;  // error[k]: worst-case error of z_1..z_{k+1}
};

/// Greedy component-by-component choice of odd z_j in [1, n) minimising the
/// shift-averaged worst-case error with kernel B2. Ties go to the smaller z.
/// n must be a power of two, at least 2; w.beta needs at least s entries.
CbcResult cbc_construct(std::size_t s, std::uint64_t n, const PODWeights& w);

/// Shift-averaged worst-case error
///   sqrt( sum_{u != {}} gamma_u (1/n) sum_k prod_{j in u} B2({k z_j / n}) ),
/// evaluated with the same order recursion as the CBC search.
double worst_case_error(std::span<const std::uint64_t> z, std::uint64_t n, const PODWeights& w);

/// B2(x) = x^2 - x + 1/6.
inline double bernoulli2(double x) { return x * x - x + 1.0 / 6.0; }

struct LatticeRule {
  std::size_t s = 0;
  std::uint64_t n = 0;
  std::vector<std::uint64_t> z;
  std::vector<std::vector<double>> shifts;  // R vectors in [0,1)^s

  void validate() const;
};

/// Shift r has coordinate j equal to CounterStream(seed, r).uniform(j).
std::vector<std::vector<double>> random_shifts(std::size_t s, std::size_t count, std::uint64_t seed);

LatticeRule make_lattice_rule(std::vector<std::uint64_t> z, std::uint64_t n, std::size_t shifts,
                              std::uint64_t seed);

/// Points i = 1..n: frac(i z_j / n + Delta_j) - 1/2, row-major n x s.
std::vector<double> lattice_points(const LatticeRule& rule, std::size_t shift_index);

struct Estimate {
  double mean = 0.0;
  std::vector<double> values;  // one per shift or replicate
};

/// Equal-weight average over each shifted point set; mean over shifts.
/// Evaluations run in parallel; sums are pairwise in point order.
Estimate qmc_estimate(const Integrand& f, const LatticeRule& rule);

/// Plain Monte Carlo. Replicate r, sample i (0-based) uses
/// CounterStream(seed, stream_offset + i) at counters r*s .. r*s + s - 1,
/// shifted to [-1/2, 1/2). Samples are nested in n.
Estimate mc_estimate(const Integrand& f, std::size_t s, std::size_t n, std::uint64_t seed,
                     std::size_t replicates = 1, std::uint64_t stream_offset = 0);

/// Header "# s n", then one integer per line.
void write_generating_vector(const std::filesystem::path& path, std::span<const std::uint64_t> z, std::uint64_t n);

struct GeneratingVector {
  std::size_t s = 0;
  std::uint64_t n = 0;
  std::vector<std::uint64_t> z;
};

GeneratingVector read_generating_vector(const std::filesystem::path& path);

bool is_power_of_two(std::uint64_t n);

}  // namespace gevrey::qmc
