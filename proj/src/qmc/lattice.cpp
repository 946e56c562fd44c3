#include "gevrey/qmc/lattice.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "gevrey/coefficients/zeta.hpp"
#include "gevrey/common/errors.hpp"
#include "gevrey/common/parallel.hpp"
#include "gevrey/qmc/random.hpp"

namespace gevrey::qmc {

namespace {

bool parse_double(std::string_view text, double& out) {
  if (text.empty()) return false;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

// Row l of the table holds Gamma_l * P_l(k): the order-l part of the kernel
// sum over subsets of the coordinates added so far.
class OrderTable {
 public:
  OrderTable(std::size_t orders, std::uint64_t n, const PODWeights& w)
      : n_(n), rows_(orders + 1, std::vector<double>(n, 0.0)), ratio_(orders + 1, 0.0) {
    std::fill(rows_[0].begin(), rows_[0].end(), 1.0);
    const double e = 2.0 * w.delta / (1.0 + w.theta);
    for (std::size_t l = 1; l <= orders; ++l) ratio_[l] = std::pow(static_cast<double>(l), e);
  }

  // Q(k) = sum_l (Gamma_l / Gamma_{l-1}) Gamma_{l-1} P_{l-1}(k), l up to min(d, cap).
  std::vector<double> candidate_factor(std::size_t d) const {
    std::vector<double> q(n_, 0.0);
    const std::size_t top = std::min(d, rows_.size() - 1);
    for (std::size_t l = 1; l <= top; ++l)
      for (std::uint64_t k = 0; k < n_; ++k) q[k] += ratio_[l] * rows_[l - 1][k];
    return q;
  }

  void add(std::uint64_t z, double gamma, std::size_t d) {
    const std::size_t top = std::min(d, rows_.size() - 1);
    std::uint64_t idx = 0;
    for (std::uint64_t k = 0; k < n_; ++k) {
      const double om = gamma * bernoulli2(static_cast<double>(idx) / static_cast<double>(n_));
      for (std::size_t l = top; l >= 1; --l) rows_[l][k] += ratio_[l] * om * rows_[l - 1][k];
      idx = (idx + z) % n_;
    }
  }

  double squared_error() const {
    double total = 0.0;
    for (std::uint64_t k = 0; k < n_; ++k) {
      double s = 0.0;
      for (std::size_t l = 1; l < rows_.size(); ++l) s += rows_[l][k];
      total += s;
    }
    return total / static_cast<double>(n_);
  }

 private:
  std::uint64_t n_;
  std::vector<std::vector<double>> rows_;
  std::vector<double> ratio_;
};

double coordinate_weight(const PODWeights& w, std::size_t j) {
  return std::pow(w.beta[j] / std::sqrt(phi_theta(w.theta)), 2.0 / (1.0 + w.theta));
}

void check_n(std::uint64_t n) {
  if (n < 2 || !is_power_of_two(n) || n > (std::uint64_t{1} << 30))
    throw ValidationError("lattice point count must be a power of two in [2, 2^30], got " + std::to_string(n));
}

// Pairwise in index order; 2^k equal terms sum exactly.
double pairwise_sum(const double* v, std::size_t count) {
  if (count == 0) return 0.0;
  if (count == 1) return v[0];
  const std::size_t half = count / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, count - half);
}

double pairwise_mean(const std::vector<double>& v) {
  return pairwise_sum(v.data(), v.size()) / static_cast<double>(v.size());
}

template <class Body>
void rethrow_with(const std::string& prefix, Body&& body) {
  try {
    body();
  } catch (const ValidationError& e) {
    throw ValidationError(prefix + e.what());
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& e) {
    throw NumericalError(prefix + e.what());
  }
}

}  // namespace

bool is_power_of_two(std::uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

double phi_theta(double theta) {
  if (!(theta >= 0.5 + 1e-6) || theta > 1.0)
    throw ValidationError("phi_theta: theta must lie in (1/2, 1], got " + std::to_string(theta));
  return 2.0 * coefficients::zeta(2.0 * theta) / std::pow(2.0 * std::numbers::pi * std::numbers::pi, theta);
}

void PODWeights::validate() const {
  if (!(delta >= 1.0) || !std::isfinite(delta)) throw ValidationError("POD weights: delta must be >= 1");
  if (!(theta >= 0.5 + 1e-6) || theta > 1.0) throw ValidationError("POD weights: theta must lie in (1/2, 1]");
  for (std::size_t j = 0; j < beta.size(); ++j)
    if (!(beta[j] > 0.0) || !std::isfinite(beta[j]))
      throw ValidationError("POD weights: beta_" + std::to_string(j + 1) + " must be positive");
}

double log_pod_weight(const PODWeights& w, std::span<const std::size_t> u) {
  const double log_phi = std::log(phi_theta(w.theta));
  double acc = w.delta * std::lgamma(static_cast<double>(u.size()) + 1.0);
  for (std::size_t j : u) {
    if (j == 0 || j > w.beta.size())
      throw ValidationError("pod_weight: coordinate " + std::to_string(j) + " outside 1.." +
                            std::to_string(w.beta.size()));
    acc += std::log(w.beta[j - 1]) - 0.5 * log_phi;
  }
  return 2.0 / (1.0 + w.theta) * acc;
}

double pod_weight(const PODWeights& w, std::span<const std::size_t> u) {
  if (u.size() > 20) return std::exp(log_pod_weight(w, u));
  const double root_phi = std::sqrt(phi_theta(w.theta));
  double fact = 1.0;
  for (std::size_t k = 2; k <= u.size(); ++k) fact *= static_cast<double>(k);
  double prod = std::pow(fact, w.delta);
  for (std::size_t j : u) {
    if (j == 0 || j > w.beta.size())
      throw ValidationError("pod_weight: coordinate " + std::to_string(j) + " outside 1.." +
                            std::to_string(w.beta.size()));
    prod *= w.beta[j - 1] / root_phi;
  }
  return std::pow(prod, 2.0 / (1.0 + w.theta));
}

std::vector<double> parse_beta_rule(const std::string& rule, std::size_t s) {
  std::string t;
  for (char ch : rule)
    if (!std::isspace(static_cast<unsigned char>(ch))) t.push_back(ch);
  const auto bad = [&] { return ValidationError("beta rule '" + rule + "': expected c, j^-p or c*j^-p"); };
  double c = 1.0;
  double p = 0.0;
  const auto jpos = t.find('j');
  if (jpos == std::string::npos) {
    if (!parse_double(t, c)) throw bad();
  } else {
    std::string_view head(t.data(), jpos);
    if (!head.empty()) {
      if (head.back() != '*' || !parse_double(head.substr(0, head.size() - 1), c)) throw bad();
    }
    std::string_view tail(t.data() + jpos + 1, t.size() - jpos - 1);
    if (tail.empty()) {
      p = 1.0;
    } else {
      if (tail.front() != '^' || !parse_double(tail.substr(1), p)) throw bad();
    }
  }
  if (!(c > 0.0) || !std::isfinite(c) || !std::isfinite(p))
    throw ValidationError("beta rule '" + rule + "' must give positive values");
  std::vector<double> beta(s);
  for (std::size_t j = 1; j <= s; ++j) beta[j - 1] = c * std::pow(static_cast<double>(j), p);
  return beta;
}

CbcResult cbc_construct(std::size_t s, std::uint64_t n, const PODWeights& w) {
  check_n(n);
  if (s == 0) throw ValidationError("cbc_construct: s must be >= 1");
  w.validate();
  if (w.beta.size() < s) throw ValidationError("cbc_construct: need beta_1..beta_s");

  OrderTable table(std::min(s, kOrderCap), n, w);
  CbcResult out;
  const std::uint64_t candidates = n / 2;
  std::vector<double> score(candidates);
  for (std::size_t d = 1; d <= s; ++d) {
    const std::vector<double> q = table.candidate_factor(d);
    parallel_for(candidates, [&](std::size_t c) {
      const std::uint64_t z = 2 * c + 1;
      std::uint64_t idx = 0;
      double acc = 0.0;
      for (std::uint64_t k = 0; k < n; ++k) {
        acc += bernoulli2(static_cast<double>(idx) / static_cast<double>(n)) * q[k];
        idx = (idx + z) % n;
      }
      score[c] = acc;
    });
    // Equivalent candidates differ only by summation order; scores within
    // roundoff of the minimum count as ties and go to the smallest z.
    double scale = 0.0;
    for (double v : q) scale += std::abs(v);
    scale /= 6.0;
    std::size_t best = 0;
    for (std::size_t c = 1; c < candidates; ++c)
      if (score[c] < score[best]) best = c;
    const double cut = score[best] + 1e-13 * scale;
    for (std::size_t c = 0; c < best; ++c)
      if (score[c] <= cut) {
        best = c;
        break;
      }
    const std::uint64_t z = 2 * best + 1;
    table.add(z, coordinate_weight(w, d - 1), d);
    out.z.push_back(z);
    out.error.push_back(std::sqrt(std::max(0.0, table.squared_error())));
  }
  return out;
}

double worst_case_error(std::span<const std::uint64_t> z, std::uint64_t n, const PODWeights& w) {
  check_n(n);
  w.validate();
  if (w.beta.size() < z.size()) throw ValidationError("worst_case_error: need beta_1..beta_s");
  OrderTable table(std::min(z.size(), kOrderCap), n, w);
  for (std::size_t d = 1; d <= z.size(); ++d) table.add(z[d - 1] % n, coordinate_weight(w, d - 1), d);
  return std::sqrt(std::max(0.0, table.squared_error()));
}

void LatticeRule::validate() const {
  check_n(n);
  if (s == 0 || z.size() != s) throw ValidationError("lattice rule: generating vector must have s entries");
  for (std::uint64_t zj : z)
    if (zj < 1 || zj >= n) throw ValidationError("lattice rule: z_j must lie in [1, n)");
  if (shifts.empty()) throw ValidationError("lattice rule: need at least one shift");
  for (const auto& d : shifts) {
    if (d.size() != s) throw ValidationError("lattice rule: shift dimension mismatch");
    for (double v : d)
      if (!(v >= 0.0 && v < 1.0)) throw ValidationError("lattice rule: shift outside [0,1)");
  }
}

std::vector<std::vector<double>> random_shifts(std::size_t s, std::size_t count, std::uint64_t seed) {
  std::vector<std::vector<double>> out(count, std::vector<double>(s));
  for (std::size_t r = 0; r < count; ++r) {
    const CounterStream stream(seed, r);
    for (std::size_t j = 0; j < s; ++j) out[r][j] = stream.uniform(j);
  }
  return out;
}

LatticeRule make_lattice_rule(std::vector<std::uint64_t> z, std::uint64_t n, std::size_t shifts,
                              std::uint64_t seed) {
  LatticeRule rule;
  rule.s = z.size();
  rule.n = n;
  rule.z = std::move(z);
  rule.shifts = random_shifts(rule.s, shifts, seed);
  rule.validate();
  return rule;
}

namespace {

void lattice_point(const LatticeRule& rule, const std::vector<double>& shift, std::uint64_t i, double* y) {
  const double inv_n = 1.0 / static_cast<double>(rule.n);
  for (std::size_t j = 0; j < rule.s; ++j) {
    // i z_j mod n is exact; so is dividing by a power of two.
    double t = static_cast<double>((i % rule.n) * rule.z[j] % rule.n) * inv_n + shift[j];
    if (t >= 1.0) t -= 1.0;
    y[j] = t - 0.5;
  }
}

}  // namespace

std::vector<double> lattice_points(const LatticeRule& rule, std::size_t shift_index) {
  if (shift_index >= rule.shifts.size())
    throw ValidationError("lattice_points: shift index " + std::to_string(shift_index) + " out of range");
  std::vector<double> pts(rule.n * rule.s);
  for (std::uint64_t i = 1; i <= rule.n; ++i)
    lattice_point(rule, rule.shifts[shift_index], i, pts.data() + (i - 1) * rule.s);
  return pts;
}

Estimate qmc_estimate(const Integrand& f, const LatticeRule& rule) {
  rule.validate();
  const std::size_t R = rule.shifts.size();
  const std::size_t n = rule.n;
  std::vector<double> vals(R * n);
  parallel_for(R * n, [&](std::size_t idx) {
    const std::size_t r = idx / n;
    const std::uint64_t i = idx % n + 1;
    std::vector<double> y(rule.s);
    lattice_point(rule, rule.shifts[r], i, y.data());
    rethrow_with("shift " + std::to_string(r) + ", point " + std::to_string(i) + ": ",
                 [&] { vals[idx] = f(y); });
  });
  Estimate est;
  est.values.resize(R);
  for (std::size_t r = 0; r < R; ++r) est.values[r] = pairwise_sum(vals.data() + r * n, n) / static_cast<double>(n);
  est.mean = pairwise_mean(est.values);
  return est;
}

Estimate mc_estimate(const Integrand& f, std::size_t s, std::size_t n, std::uint64_t seed, std::size_t replicates,
                     std::uint64_t stream_offset) {
  if (n == 0) throw ValidationError("mc_estimate: n must be >= 1");
  if (s == 0) throw ValidationError("mc_estimate: s must be >= 1");
  if (replicates == 0) throw ValidationError("mc_estimate: need at least one replicate");
  std::vector<double> vals(replicates * n);
  parallel_for(replicates * n, [&](std::size_t idx) {
    const std::size_t r = idx / n;
    const std::size_t i = idx % n;
    const CounterStream stream(seed, stream_offset + i);
    std::vector<double> y(s);
    for (std::size_t j = 0; j < s; ++j) y[j] = stream.uniform(r * s + j) - 0.5;
    rethrow_with("replicate " + std::to_string(r) + ", sample " + std::to_string(i) + ": ",
                 [&] { vals[idx] = f(y); });
  });
  Estimate est;
  est.values.resize(replicates);
  for (std::size_t r = 0; r < replicates; ++r)
    est.values[r] = pairwise_sum(vals.data() + r * n, n) / static_cast<double>(n);
  est.mean = pairwise_mean(est.values);
  return est;
}

void write_generating_vector(const std::filesystem::path& path, std::span<const std::uint64_t> z, std::uint64_t n) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << "# " << z.size() << ' ' << n << '\n';
  for (std::uint64_t v : z) out << v << '\n';
  out.flush();
  if (!out) throw IoError(path.string(), "write failed");
}

GeneratingVector read_generating_vector(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  GeneratingVector gv;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno) + ": ";
    std::istringstream ls(line.substr(first));
    if (!have_header) {
      char hash = 0;
      if (!(ls >> hash >> gv.s >> gv.n) || hash != '#')
        throw ValidationError(where + "expected header '# s n'");
      have_header = true;
      continue;
    }
    std::uint64_t v = 0;
    std::string rest;
    if (!(ls >> v) || (ls >> rest)) throw ValidationError(where + "expected one integer");
    gv.z.push_back(v);
  }
  if (!have_header) throw ValidationError(path.string() + ": missing header '# s n'");
  check_n(gv.n);
  if (gv.z.size() != gv.s)
    throw ValidationError(path.string() + ": header says s = " + std::to_string(gv.s) + " but found " +
                          std::to_string(gv.z.size()) + " entries");
  for (std::uint64_t v : gv.z)
    if (v < 1 || v >= gv.n) throw ValidationError(path.string() + ": entries must lie in [1, n)");
  return gv;
}

}  // namespace gevrey::qmc
