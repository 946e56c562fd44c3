#include <doctest.h>

#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <mutex>
#include <random>

#include "gevrey/coefficients/coefficient_model.hpp"
#include "gevrey/common/errors.hpp"
#include "gevrey/qmc/lattice.hpp"
#include "gevrey/qmc/random.hpp"
#include "gevrey/qmc/studies.hpp"

using namespace gevrey;
using namespace gevrey::qmc;

namespace {

// Squared worst-case error by explicit subset enumeration.
double brute_force_sq_error(const std::vector<std::uint64_t>& z, std::uint64_t n, const PODWeights& w) {
  const std::size_t s = z.size();
  double total = 0.0;
  for (std::uint32_t mask = 1; mask < (1u << s); ++mask) {
    std::vector<std::size_t> u;
    for (std::size_t j = 0; j < s; ++j)
      if (mask & (1u << j)) u.push_back(j + 1);
    double avg = 0.0;
    for (std::uint64_t k = 0; k < n; ++k) {
      double prod = 1.0;
      for (std::size_t j : u) {
        const double x = static_cast<double>(k * z[j - 1] % n) / static_cast<double>(n);
        prod *= x * x - x + 1.0 / 6.0;
      }
      avg += prod;
    }
    total += pod_weight(w, u) * avg / static_cast<double>(n);
  }
  return total;
}

PODWeights weights(double delta, double theta, std::vector<double> beta) {
  PODWeights w;
  w.delta = delta;
  w.theta = theta;
  w.beta = std::move(beta);
  return w;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("gevrey_qmc_" + name);
}

}  // namespace

TEST_CASE("phi_theta values and guard") {
  CHECK(std::abs(phi_theta(1.0) - 1.0 / 6.0) <= 1e-14);
  const double two_pi2 = 2.0 * std::numbers::pi * std::numbers::pi;
  for (double theta : {0.55, 0.6, 0.75, 0.9}) {
    const double oracle = 2.0 * boost::math::zeta(2.0 * theta) / std::pow(two_pi2, theta);
    CHECK(phi_theta(theta) == doctest::Approx(oracle).epsilon(1e-13));
    CHECK(phi_theta(theta) > 0.0);
  }
  CHECK_THROWS_AS(phi_theta(0.5), ValidationError);
  CHECK_THROWS_AS(phi_theta(0.5 + 5e-7), ValidationError);
  CHECK_THROWS_AS(phi_theta(1.01), ValidationError);
  CHECK_NOTHROW(phi_theta(0.5 + 2e-6));
}

TEST_CASE("pod weights") {
  const std::vector<double> beta{0.7, 0.3, 0.2, 0.05};
  auto w = weights(1.0, 1.0, beta);
  CHECK(pod_weight(w, std::vector<std::size_t>{}) == 1.0);
  for (std::size_t j = 1; j <= 4; ++j) {
    const std::vector<std::size_t> u{j};
    CHECK(pod_weight(w, u) == doctest::Approx(beta[j - 1] * std::sqrt(6.0)).epsilon(1e-14));
  }
  // delta = 1, theta = 1: |u|! prod beta_j sqrt 6.
  const std::vector<std::size_t> u3{1, 2, 4};
  CHECK(pod_weight(w, u3) == doctest::Approx(6.0 * 0.7 * 0.3 * 0.05 * 6.0 * std::sqrt(6.0)).epsilon(1e-13));

  auto w2 = weights(2.0, 1.0, beta);
  const std::vector<std::size_t> u2{1, 3};
  CHECK(pod_weight(w2, u2) == doctest::Approx(4.0 * 0.7 * 0.2 * 6.0).epsilon(1e-13));

  // General theta against an independent formula.
  auto w3 = weights(1.5, 0.7, beta);
  const double phi = 2.0 * boost::math::zeta(1.4) / std::pow(2.0 * std::numbers::pi * std::numbers::pi, 0.7);
  const double direct = std::pow(std::pow(6.0, 1.5) * 0.7 * 0.3 * 0.05 / std::pow(phi, 1.5), 2.0 / 1.7);
  const std::vector<std::size_t> u4{1, 2, 4};
  CHECK(pod_weight(w3, u4) == doctest::Approx(direct).epsilon(1e-12));
  CHECK(std::log(pod_weight(w3, u4)) == doctest::Approx(log_pod_weight(w3, u4)).epsilon(1e-13));

  // Across the log-space switch at |u| = 20: the ratio is (21^delta beta/sqrt(phi))^(2/(1+theta)).
  auto wide = weights(1.0, 1.0, std::vector<double>(30, 0.5));
  std::vector<std::size_t> u20(20), u21(21);
  for (std::size_t j = 0; j < 21; ++j) {
    if (j < 20) u20[j] = j + 1;
    u21[j] = j + 1;
  }
  CHECK(pod_weight(wide, u21) / pod_weight(wide, u20) == doctest::Approx(21.0 * 0.5 * std::sqrt(6.0)).epsilon(1e-12));
  // Large orders stay finite in log space.
  auto huge = weights(4.0, 0.55, std::vector<double>(200, 1.0));
  std::vector<std::size_t> u200(200);
  for (std::size_t j = 0; j < 200; ++j) u200[j] = j + 1;
  CHECK(std::isfinite(log_pod_weight(huge, u200)));
  CHECK(log_pod_weight(huge, u200) > 700.0);

  CHECK_THROWS_AS(pod_weight(w, std::vector<std::size_t>{5}), ValidationError);
  CHECK_THROWS_AS(weights(0.5, 1.0, beta).validate(), ValidationError);
  CHECK_THROWS_AS(weights(1.0, 1.0, {1.0, -1.0}).validate(), ValidationError);
}

TEST_CASE("beta rules") {
  const auto b = parse_beta_rule("j^-5", 3);
  CHECK(b[0] == 1.0);
  CHECK(b[1] == doctest::Approx(1.0 / 32.0));
  CHECK(b[2] == doctest::Approx(std::pow(3.0, -5.0)));
  const auto c = parse_beta_rule(" 0.5 * j^-2 ", 2);
  CHECK(c[1] == doctest::Approx(0.125));
  const auto d = parse_beta_rule("0.25", 2);
  CHECK(d[0] == 0.25);
  CHECK(d[1] == 0.25);
  CHECK_THROWS_AS(parse_beta_rule("k^-5", 2), ValidationError);
  CHECK_THROWS_AS(parse_beta_rule("-1*j^-2", 2), ValidationError);
  CHECK_THROWS_AS(parse_beta_rule("2j^-2", 2), ValidationError);
}

TEST_CASE("worst-case error matches subset enumeration") {
  std::mt19937_64 gen(11);
  for (std::uint64_t n : {2u, 8u, 32u, 64u}) {
    for (std::size_t s = 1; s <= 4; ++s) {
      std::vector<double> beta(s);
      std::uniform_real_distribution<double> ub(0.05, 1.0);
      for (auto& b : beta) b = ub(gen);
      for (double delta : {1.0, 2.0}) {
        const auto w = weights(delta, 0.8, beta);
        std::vector<std::uint64_t> z(s);
        std::uniform_int_distribution<std::uint64_t> uz(1, n - 1);
        for (auto& v : z) v = uz(gen);
        const double e = worst_case_error(z, n, w);
        CHECK(e * e == doctest::Approx(brute_force_sq_error(z, n, w)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("CBC against exhaustive search") {
  std::mt19937_64 gen(5);
  for (std::uint64_t n : {2u, 4u, 8u, 16u, 32u}) {
    // s = 1: every odd z gives the error of z = 1.
    const auto w1 = weights(1.0, 1.0, {0.9});
    const auto r1 = cbc_construct(1, n, w1);
    CHECK(r1.z.size() == 1);
    CHECK(r1.z[0] == 1);
    CHECK(std::abs(r1.error[0] - worst_case_error(std::vector<std::uint64_t>{1}, n, w1)) <= 1e-12);

    for (int draw = 0; draw < 3; ++draw) {
      std::uniform_real_distribution<double> ub(0.1, 1.0);
      const std::vector<double> beta{ub(gen), ub(gen)};
      const auto w = draw == 0 ? weights(1.0, 1.0, {0.5, 0.5}) : weights(1.0 + draw, 0.6 + 0.2 * draw, beta);
      const auto res = cbc_construct(2, n, w);
      double best = std::numeric_limits<double>::infinity();
      for (std::uint64_t a = 1; a < n; a += 2)
        for (std::uint64_t b = 1; b < n; b += 2) best = std::min(best, std::sqrt(brute_force_sq_error({a, b}, n, w)));
      CHECK(std::abs(res.error[1] - best) <= 1e-12);
      CHECK(std::abs(res.error[1] - std::sqrt(brute_force_sq_error(res.z, n, w))) <= 1e-12);
      // Each prefix error is the minimum over the candidates at that step.
      for (std::uint64_t b = 1; b < n; b += 2)
        CHECK(res.error[1] <= worst_case_error(std::vector<std::uint64_t>{res.z[0], b}, n, w) + 1e-15);
    }
  }
  CHECK_THROWS_AS(cbc_construct(2, 24, weights(1.0, 1.0, {1.0, 1.0})), ValidationError);
  CHECK_THROWS_AS(cbc_construct(3, 16, weights(1.0, 1.0, {1.0, 1.0})), ValidationError);
  CHECK_THROWS_AS(cbc_construct(0, 16, weights(1.0, 1.0, {1.0})), ValidationError);
}

TEST_CASE("CBC is deterministic, odd, and ties go to the smallest z") {
  const auto w = weights(2.0, 0.55, parse_beta_rule("j^-2", 12));
  const auto a = cbc_construct(12, 256, w);
  const auto b = cbc_construct(12, 256, w);
  CHECK(a.z == b.z);
  CHECK(a.error == b.error);
  CHECK(a.z[0] == 1);
  for (auto v : a.z) {
    CHECK(v % 2 == 1);
    CHECK(v < 256);
    // z and n - z score identically; the smaller must win.
    CHECK(v < 128);
  }
  for (std::size_t k = 0; k < a.z.size(); ++k) {
    const std::vector<std::uint64_t> prefix(a.z.begin(), a.z.begin() + static_cast<long>(k) + 1);
    CHECK(a.error[k] == doctest::Approx(worst_case_error(prefix, 256, w)).epsilon(1e-13));
  }
  // More points, smaller error.
  const auto big = cbc_construct(12, 1024, w);
  CHECK(big.error.back() < a.error.back());
}

TEST_CASE("lattice points") {
  LatticeRule rule;
  rule.s = 1;
  rule.n = 4;
  rule.z = {1};
  rule.shifts = {{0.0}};
  const auto p = lattice_points(rule, 0);
  REQUIRE(p.size() == 4);
  CHECK(p[0] == -0.25);
  CHECK(p[1] == 0.0);
  CHECK(p[2] == 0.25);
  CHECK(p[3] == -0.5);

  auto r2 = make_lattice_rule({1, 5}, 16, 3, 42);
  for (std::size_t sh = 0; sh < 3; ++sh) {
    const auto pts = lattice_points(r2, sh);
    for (double v : pts) {
      CHECK(v >= -0.5);
      CHECK(v < 0.5);
    }
  }
  // Unshifted: last point sits at -1/2; shifted set is a translate mod 1.
  LatticeRule base = r2;
  base.shifts = {{0.0, 0.0}};
  const auto p0 = lattice_points(base, 0);
  CHECK(p0[15 * 2] == -0.5);
  CHECK(p0[15 * 2 + 1] == -0.5);
  const auto p1 = lattice_points(r2, 1);
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      double back = p1[i * 2 + j] - r2.shifts[1][j];
      back -= std::floor(back + 0.5);
      CHECK(std::abs(back - p0[i * 2 + j]) <= 1e-15);
    }
  CHECK_THROWS_AS(lattice_points(r2, 3), ValidationError);
  CHECK_THROWS_AS(make_lattice_rule({1, 16}, 16, 1, 0), ValidationError);
  CHECK_THROWS_AS(make_lattice_rule({1}, 12, 1, 0), ValidationError);
}

TEST_CASE("qmc_estimate basics") {
  LatticeRule rule;
  rule.s = 1;
  rule.n = 4;
  rule.z = {1};
  rule.shifts = {{0.0}};
  const auto e = qmc_estimate([](std::span<const double> y) { return y[0]; }, rule);
  CHECK(e.mean == -0.125);

  const auto r2 = make_lattice_rule({1, 3, 7}, 64, 5, 9);
  const auto c = qmc_estimate([](std::span<const double>) { return 2.75; }, r2);
  CHECK(c.values.size() == 5);
  for (double v : c.values) CHECK(v == 2.75);
  CHECK(c.mean == 2.75);

  try {
    qmc_estimate(
        [](std::span<const double> y) {
          if (y[0] > 0.3) throw NumericalError("boom");
          return 0.0;
        },
        r2);
    FAIL("expected failure");
  } catch (const NumericalError& err) {
    CHECK(std::string(err.what()).find("shift ") != std::string::npos);
    CHECK(std::string(err.what()).find("point ") != std::string::npos);
    CHECK(std::string(err.what()).find("boom") != std::string::npos);
  }
}

TEST_CASE("dual lattice exactness on single Fourier modes") {
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::uint64_t n : {2u, 4u, 8u, 16u}) {
    for (std::size_t s = 1; s <= 2; ++s) {
      for (std::uint64_t z2 = 1; z2 < n; z2 += 2) {
        std::vector<std::uint64_t> z{1};
        if (s == 2) z.push_back(z2);
        const auto rule = make_lattice_rule(z, n, 3, 100 + n);
        for (int k1 = -int(n); k1 <= int(n); ++k1)
          for (int k2 = (s == 2 ? -3 : 0); k2 <= (s == 2 ? 3 : 0); ++k2) {
            if (k1 == 0 && k2 == 0) continue;
            const auto dot = [&](std::span<const double> y) { return k1 * y[0] + (s == 2 ? k2 * y[1] : 0.0); };
            const auto re = qmc_estimate([&](std::span<const double> y) { return std::cos(two_pi * dot(y)); }, rule);
            const auto im = qmc_estimate([&](std::span<const double> y) { return std::sin(two_pi * dot(y)); }, rule);
            const long long kz = k1 * static_cast<long long>(z[0]) + (s == 2 ? k2 * static_cast<long long>(z[1]) : 0);
            for (std::size_t r = 0; r < 3; ++r) {
              const double mag = std::hypot(re.values[r], im.values[r]);
              if (((kz % static_cast<long long>(n)) + static_cast<long long>(n)) % static_cast<long long>(n) != 0) {
                CHECK(mag <= 1e-14);
              } else {
                CHECK(mag == doctest::Approx(1.0).epsilon(1e-13));
              }
            }
          }
      }
    }
  }
}

TEST_CASE("counter stream") {
  const CounterStream a(1, 0), b(1, 1), c(2, 0);
  CHECK(a.bits(0) != b.bits(0));
  CHECK(a.bits(0) != c.bits(0));
  CHECK(a.bits(5) == CounterStream(1, 0).bits(5));
  // Known SplitMix64 vector: state 0 gives 0xe220a8397b1dcdaf as first output.
  CHECK(splitmix64_mix(CounterStream::kGolden) == 0xe220a8397b1dcdafULL);
  double sum = 0.0, sq = 0.0;
  const int N = 200000;
  for (int i = 0; i < N; ++i) {
    const double u = a.uniform(static_cast<std::uint64_t>(i));
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sq += u * u;
  }
  CHECK(std::abs(sum / N - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / N));
  CHECK(std::abs(sq / N - 1.0 / 3.0) < 0.005);
}

TEST_CASE("mc_estimate") {
  const auto c = mc_estimate([](std::span<const double>) { return -1.5; }, 3, 64, 7, 4);
  for (double v : c.values) CHECK(v == -1.5);
  CHECK(c.mean == -1.5);

  const std::size_t n = 1000000;
  const auto m = mc_estimate([](std::span<const double> y) { return y[0]; }, 1, n, 2024);
  CHECK(std::abs(m.mean) <= 5.0 / (std::sqrt(12.0) * 1e3));

  const auto f = [](std::span<const double> y) { return y[0] * y[1] + y[2]; };
  const auto r1 = mc_estimate(f, 3, 1000, 99, 3);
  const auto r2 = mc_estimate(f, 3, 1000, 99, 3);
  CHECK(r1.values == r2.values);
  const auto r3 = mc_estimate(f, 3, 1000, 100, 3);
  CHECK(r1.values != r3.values);

  // Nested: the first n samples of a bigger run are the n-sample run.
  std::vector<double> seen;
  std::mutex mu;
  const auto record = [&](std::span<const double> y) {
    std::lock_guard<std::mutex> lock(mu);
    seen.push_back(y[0]);
    return y[0];
  };
  const auto small = mc_estimate(record, 2, 4, 3, 1, 8);
  const auto small_seen = seen;
  const auto s1 = CounterStream(3, 8 + 2).uniform(0) - 0.5;
  CHECK(std::find(small_seen.begin(), small_seen.end(), s1) != small_seen.end());
  const auto big = mc_estimate([](std::span<const double> y) { return y[0]; }, 2, 8, 3, 1, 8);
  double first4 = 0.0;
  for (std::size_t i = 0; i < 4; ++i) first4 += CounterStream(3, 8 + i).uniform(0) - 0.5;
  CHECK(small.mean == doctest::Approx(first4 / 4.0).epsilon(1e-15));
  CHECK(std::isfinite(big.mean));
}

TEST_CASE("QMC rmse for a smooth product decreases with n") {
  const std::size_t s = 4;
  const auto w = weights(1.0, 0.55, parse_beta_rule("j^-2", s));
  const auto f = [](std::span<const double> y) {
    double p = 1.0;
    for (double v : y) p *= 1.0 + v / 4.0;
    return p;
  };
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    std::vector<double> rmse;
    for (std::uint64_t n = 16; n <= 1024; n *= 2) {
      const auto rule = make_lattice_rule(cbc_construct(s, n, w).z, n, 16, seed);
      const auto est = qmc_estimate(f, rule);
      double acc = 0.0;
      for (double v : est.values) acc += (v - 1.0) * (v - 1.0);
      rmse.push_back(std::sqrt(acc / static_cast<double>(est.values.size())));
    }
    for (std::size_t k = 1; k < rmse.size(); ++k) CHECK(rmse[k] <= 1.25 * rmse[k - 1]);
    CHECK(rmse.back() < rmse.front() / 20.0);
  }
}

TEST_CASE("generating vector files") {
  const auto path = temp_file("vec.txt");
  const std::vector<std::uint64_t> z{1, 433, 229, 81};
  write_generating_vector(path, z, 1024);
  {
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "# 4 1024");
  }
  const auto gv = read_generating_vector(path);
  CHECK(gv.s == 4);
  CHECK(gv.n == 1024);
  CHECK(gv.z == z);

  const auto bad = temp_file("bad.txt");
  {
    std::ofstream out(bad);
    out << "# 3 16\n1\n5\n";
  }
  CHECK_THROWS_AS(read_generating_vector(bad), ValidationError);
  {
    std::ofstream out(bad);
    out << "# 2 16\n1\n16\n";
  }
  CHECK_THROWS_AS(read_generating_vector(bad), ValidationError);
  {
    std::ofstream out(bad);
    out << "1\n3\n";
  }
  CHECK_THROWS_AS(read_generating_vector(bad), ValidationError);
  CHECK_THROWS_AS(read_generating_vector(temp_file("missing_dir") / "x.txt"), IoError);
  CHECK_THROWS_AS(write_generating_vector(temp_file("missing_dir") / "x.txt", z, 1024), IoError);
  std::filesystem::remove(path);
  std::filesystem::remove(bad);
}

TEST_CASE("rmse_study on constant coefficients") {
  const auto model = coefficients::CoefficientModel::constant();
  RmseStudyConfig cfg;
  cfg.m = 6;
  cfg.s = 3;
  cfg.n_list = {4, 8, 16};
  cfg.shifts = 4;
  cfg.mc_replicates = 4;
  cfg.seed = 17;
  cfg.weights = default_weights(model, cfg.s);
  const auto res = rmse_study(model, cfg);
  REQUIRE(res.qmc.size() == 3);
  REQUIRE(res.mc.size() == 3);
  for (const auto& r : res.qmc) CHECK(r.rmse == 0.0);
  for (const auto& r : res.mc) CHECK(r.rmse == 0.0);
  CHECK(res.vector_source == "cbc");
  CHECK(res.vectors.size() == 3);

  cfg.n_list = {8, 4};
  CHECK_THROWS_AS(rmse_study(model, cfg), ValidationError);
  cfg.n_list = {4, 12};
  CHECK_THROWS_AS(rmse_study(model, cfg), ValidationError);
}

TEST_CASE("rmse_study bookkeeping on a parametric model") {
  const auto model = coefficients::CoefficientModel::qmc_analytic();
  RmseStudyConfig cfg;
  cfg.m = 6;
  cfg.s = 4;
  cfg.n_list = {4, 8, 16};
  cfg.shifts = 4;
  cfg.mc_replicates = 3;
  cfg.seed = 5;
  cfg.weights = default_weights(model, cfg.s);
  const auto a = rmse_study(model, cfg);
  const auto b = rmse_study(model, cfg);
  CHECK(a.reference == b.reference);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(a.qmc[k].rmse == b.qmc[k].rmse);
    CHECK(a.mc[k].values == b.mc[k].values);
    CHECK(a.qmc[k].values.size() == 4);
    CHECK(a.mc[k].values.size() == 3);
    double acc = 0.0;
    for (double v : a.qmc[k].values) acc += std::pow((a.reference - v) / a.reference, 2);
    CHECK(a.qmc[k].rmse == doctest::Approx(std::sqrt(acc / 4.0)).epsilon(1e-14));
  }
  double mean = 0.0;
  for (double v : a.qmc.back().values) mean += v;
  CHECK(a.reference == doctest::Approx(mean / 4.0).epsilon(1e-15));

  // A fixed vector is used modulo n.
  cfg.fixed_vector = GeneratingVector{4, 1024, {1, 433, 229, 81}};
  const auto c = rmse_study(model, cfg);
  CHECK(c.vector_source == "file");
  CHECK(c.vectors[0] == std::vector<std::uint64_t>{1, 1, 1, 1});
  CHECK(c.vectors[2] == std::vector<std::uint64_t>{1, 1, 5, 1});
}

TEST_CASE("truncation_study") {
  // Depends on y_1 only: every truncation agrees with the reference.
  const auto one = coefficients::CoefficientModel::custom(2.0, {{1, 0.5}});
  TruncationConfig cfg;
  cfg.m = 6;
  cfg.s_list = {1, 2, 3};
  cfg.s_ref = 5;
  cfg.n = 32;
  cfg.shifts = 2;
  cfg.seed = 3;
  cfg.weights = weights(1.0, 0.55, parse_beta_rule("j^-5", 5));
  const auto res = truncation_study(one, cfg);
  REQUIRE(res.records.size() == 3);
  for (const auto& r : res.records) CHECK(r.error == 0.0);

  const auto model = coefficients::CoefficientModel::qmc_analytic();
  const auto t = truncation_study(model, cfg);
  CHECK(t.records[0].error > 0.0);
  CHECK(t.records[2].error < t.records[0].error);

  cfg.s_ref = 3;
  CHECK_THROWS_AS(truncation_study(model, cfg), ValidationError);
}
