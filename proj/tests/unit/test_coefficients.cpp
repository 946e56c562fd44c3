#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/special_functions/zeta.hpp>

#include "doctest.h"
#include "gevrey/coefficients/bound_constants.hpp"
#include "gevrey/coefficients/coefficient_model.hpp"
#include "gevrey/coefficients/zeta.hpp"
#include "gevrey/common/errors.hpp"

using namespace gevrey::coefficients;
using gevrey::ValidationError;
using gevrey::combinatorics::Multiindex;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> random_y(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> y(n);
  for (auto& v : y) v = u(rng);
  return y;
}

}  // namespace

TEST_CASE("zeta against closed forms and boost") {
  CHECK(zeta(2.0) == doctest::Approx(kPi * kPi / 6.0).epsilon(1e-15));
  CHECK(zeta(4.0) == doctest::Approx(std::pow(kPi, 4) / 90.0).epsilon(1e-15));
  CHECK(zeta(5.0) == doctest::Approx(1.03692775514337).epsilon(1e-14));
  for (double s : {1.001, 1.01, 1.5, 2.5, 3.0, 5.0, 7.5, 10.0, 30.0}) {
    const double ref = boost::math::zeta(s);
    CHECK(std::abs(zeta(s) - ref) <= 1e-14 * ref);
  }
  CHECK(zeta5() == zeta(5.0));
  CHECK_THROWS_AS(zeta(1.0), ValidationError);
  CHECK_THROWS_AS(zeta(0.5), ValidationError);
}

TEST_CASE("eval_coefficient examples") {
  const auto gl = CoefficientModel::gl_analytic();
  const std::vector<double> zero{0.0};
  CHECK(eval_coefficient(gl, Field::kA, 0.5, 0.5, zero) == doctest::Approx(2.0).epsilon(1e-15));
  for (double y : {-1.0, -0.3, 0.8}) {
    const std::vector<double> yy{y};
    CHECK(eval_coefficient(gl, Field::kC, 0.2, 0.7, yy) == 1.0);
    CHECK(eval_coefficient(gl, Field::kB, 0.2, 0.7, yy) == 0.0);
  }
  const auto qa = CoefficientModel::qmc_analytic();
  const std::vector<double> y0(100, 0.0);
  CHECK(eval_coefficient(qa, Field::kA, 0.3, 0.6, y0) ==
        doctest::Approx(2.0 + 2.0 * std::exp(-boost::math::zeta(5.0))).epsilon(1e-15));
  const std::vector<double> empty;
  CHECK(eval_coefficient(qa, Field::kA, 0.3, 0.6, empty) == eval_coefficient(qa, Field::kA, 0.3, 0.6, y0));
}

TEST_CASE("series models against direct trigonometric sums") {
  std::mt19937_64 rng(11);
  const auto qa = CoefficientModel::qmc_analytic();
  const auto qg = CoefficientModel::qmc_gevrey2();
  const double z5 = boost::math::zeta(5.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto y = random_y(rng, 100, -0.5, 0.5);
    const auto x = random_y(rng, 2, 0.001, 0.999);
    double s_a = 0.0, s_g = 0.0;
    for (int j = 1; j <= 100; ++j) {
      const double w = std::pow(j, -5.0) * std::sin(j * kPi * x[0]) * std::sin(j * kPi * x[1]);
      s_a += w * y[j - 1];
      s_g += w * std::exp(-1.0 / (y[j - 1] + 0.5));
    }
    CHECK(qa.eval(Field::kA, x[0], x[1], y) == doctest::Approx(2.0 + 2.0 * std::exp(-z5 + s_a)).epsilon(1e-13));
    CHECK(qg.eval(Field::kA, x[0], x[1], y) == doctest::Approx(3.0 + s_g / z5).epsilon(1e-13));
  }
  const auto g3 = CoefficientModel::gl_gevrey3();
  const std::vector<double> y{0.25};
  CHECK(g3.eval(Field::kA, 0.1, 0.4, y) == doctest::Approx(1.0 + 0.5 * std::exp(-1.0 / std::sqrt(1.25))));
}

TEST_CASE("parameter validation") {
  const auto gl = CoefficientModel::gl_analytic();
  const std::vector<double> out{1.5};
  CHECK_THROWS_AS(gl.eval(Field::kA, 0.5, 0.5, out), ValidationError);
  const auto qa = CoefficientModel::qmc_analytic();
  const std::vector<double> out_q{0.0, 0.6};
  CHECK_THROWS_AS(qa.eval(Field::kA, 0.5, 0.5, out_q), ValidationError);
  const std::vector<double> nan_y{std::nan("")};
  CHECK_THROWS_AS(qa.eval(Field::kA, 0.5, 0.5, nan_y), ValidationError);
  const auto g3 = CoefficientModel::gl_gevrey3();
  const std::vector<double> minus_one{-1.0};
  CHECK_THROWS_AS(g3.eval(Field::kA, 0.5, 0.5, minus_one), ValidationError);
  const std::vector<double> ok{0.0};
  CHECK_THROWS_AS(eval_coefficient(gl, Field::kA, 0.0, 0.5, ok), ValidationError);
  CHECK_THROWS_AS(eval_coefficient(gl, Field::kA, 0.5, 1.0, ok), ValidationError);
  CHECK_THROWS_AS(CoefficientModel::from_name("lognormal"), ValidationError);
  CHECK(CoefficientModel::from_name("qmc-gevrey2").parameter_count() == 100);
}

TEST_CASE("sampled field values stay inside the certified ranges") {
  std::mt19937_64 rng(5);
  for (const char* name : {"gl-analytic", "gl-gevrey3", "qmc-analytic", "qmc-gevrey2", "constant"}) {
    const auto model = CoefficientModel::from_name(name);
    const auto box = model.parameter_box();
    const double y_lo = model.kind() == ModelKind::kGlGevrey3 ? -1.0 + 1e-12 : box.lo;
    for (int k = 0; k < 10000; ++k) {
      const auto y = random_y(rng, std::max<std::size_t>(model.parameter_count(), 1), y_lo, box.hi);
      const auto x = random_y(rng, 2, 1e-9, 1.0 - 1e-9);
      const auto& r = model.ranges();
      const double a = model.eval(Field::kA, x[0], x[1], y);
      CHECK_MESSAGE(r.a.contains(a), name);
      CHECK(r.b.contains(model.eval(Field::kB, x[0], x[1], y)));
      CHECK(r.c.contains(model.eval(Field::kC, x[0], x[1], y)));
    }
    CHECK(model.ranges().a.lo > 0.0);
    CHECK(model.ranges().c.lo > 0.0);
    CHECK(model.ranges().b.lo >= 0.0);
  }
}

TEST_CASE("zero-padded parameters evaluate identically") {
  std::mt19937_64 rng(3);
  for (const char* name : {"qmc-analytic", "qmc-gevrey2"}) {
    const auto model = CoefficientModel::from_name(name);
    for (std::size_t s : {1, 5, 20, 99}) {
      auto y = random_y(rng, s, -0.5, 0.5);
      auto padded = y;
      padded.resize(100, 0.0);
      for (double x1 : {0.01, 0.37, 0.9}) {
        CHECK(model.eval(Field::kA, x1, 0.41, y) == model.eval(Field::kA, x1, 0.41, padded));
      }
    }
  }
}

TEST_CASE("custom sine-series table") {
  const auto m = CoefficientModel::parse_custom("# mean and two modes\n0, 2.0\n1, 0.5\n3 0.25\n");
  CHECK(m.kind() == ModelKind::kCustom);
  CHECK(m.parameter_count() == 3);
  CHECK(m.ranges().a.lo == doctest::Approx(2.0 - 0.375));
  const std::vector<double> y{0.5, 0.0, -0.5};
  const double x1 = 0.3, x2 = 0.6;
  const double expect = 2.0 + 0.5 * std::sin(kPi * x1) * std::sin(kPi * x2) * 0.5 -
                        0.25 * std::sin(3 * kPi * x1) * std::sin(3 * kPi * x2) * 0.5;
  CHECK(m.eval(Field::kA, x1, x2, y) == doctest::Approx(expect).epsilon(1e-14));
  CHECK_THROWS_AS(CoefficientModel::parse_custom("1 0.5\nbogus\n"), ValidationError);
  CHECK_THROWS_AS(CoefficientModel::parse_custom("0 0.1\n1 1.0\n"), ValidationError);
  CHECK_THROWS_AS(CoefficientModel::parse_custom("1 0.1\n1 0.2\n"), ValidationError);

  const auto path = std::filesystem::temp_directory_path() / "gevrey_custom_table.txt";
  {
    std::ofstream out(path);
    out << "0 3\n2 1\n";
  }
  CHECK(CoefficientModel::load_custom(path).parameter_count() == 2);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(CoefficientModel::load_custom(path), gevrey::IoError);
}

TEST_CASE("bound constants worked example") {
  const CoefficientBounds b{6.0, 0.0, 2.0, 1.0, 1.0};
  const auto k = bound_constants(b, 0.5);
  CHECK(k.K_a == doctest::Approx(3.0));
  CHECK(k.K_c == doctest::Approx(1.0));
  CHECK(k.lambda1_bar == doctest::Approx(3.0));
  CHECK(k.u1_bar == doctest::Approx(std::sqrt(3.0)));
  CHECK(k.sigma1 == doctest::Approx(12.0));
  CHECK(k.sigma == doctest::Approx(27.0));
  CHECK(k.rho1 == doctest::Approx(1332.0));
  CHECK(k.rho == doctest::Approx(3321.0));
  CHECK_THROWS_AS(bound_constants(b, 0.0), ValidationError);
  CHECK_THROWS_AS(bound_constants(b, 1.0), ValidationError);
}

TEST_CASE("bound constants from models") {
  const auto c = bound_constants(CoefficientModel::constant(2.0, 0.0, 1.0), 0.5);
  CHECK(c.K_a == doctest::Approx(1.0));
  CHECK(c.K_c == doctest::Approx(1.0));
  CHECK(c.lambda1_bar == doctest::Approx(2.0 * kChi1UnitSquare));

  const auto gl = certified_bounds(CoefficientModel::gl_analytic(), 1.0);
  CHECK(gl.a_bar == 6.0);
  CHECK(gl.c_bar == 2.0);
  CHECK(gl.a_low == 1.0);

  for (const char* name : {"gl-analytic", "gl-gevrey3", "qmc-analytic", "qmc-gevrey2", "constant"}) {
    const auto model = CoefficientModel::from_name(name);
    double prev_sigma = INFINITY;
    for (double mu : {0.05, 0.2, 0.5, 0.8, 0.99}) {
      const auto k = bound_constants(model, mu);
      CHECK(k.K_a >= 1.0);
      CHECK(k.K_c >= 1.0);
      CHECK(k.sigma >= 1.0);
      CHECK(k.rho >= 1.0);
      CHECK(k.sigma < prev_sigma);
      prev_sigma = k.sigma;
      const double kk = k.K_a * k.K_c;
      CHECK(std::abs(k.u1_bar * k.u1_bar * k.c_bar / 2.0 - kk) <= 1e-12 * kk);
      CHECK(std::abs(k.lambda1_bar * k.c_bar / (2.0 * k.a_low) - kk) <= 1e-12 * kk);
    }
  }
}

TEST_CASE("theoretical derivative bound") {
  const auto k = bound_constants(CoefficientBounds{6.0, 0.0, 2.0, 1.0, 1.0}, 0.5);
  const std::vector<double> r_rho{k.rho};
  const std::vector<double> r_one{1.0};
  const auto e1 = Multiindex::unit(1);
  auto d = theoretical_derivative_bound(k, e1, 1.0, r_rho);
  CHECK(d.lambda_bound == doctest::Approx(k.lambda1_bar * k.sigma / (2.0 * k.rho)));
  CHECK(d.u_bound == doctest::Approx(k.u1_bar * k.sigma / (2.0 * k.rho)));
  d = theoretical_derivative_bound(k, e1, 1.0, r_one);
  CHECK(d.lambda_bound == doctest::Approx(k.lambda1_bar * k.sigma / 2.0));

  CHECK(theoretical_derivative_bound(k, e1, 2.0, r_one).lambda_bound ==
        doctest::Approx(theoretical_derivative_bound(k, e1, 1.0, r_one).lambda_bound));
  const auto two = Multiindex::unit(1, 2);
  CHECK(theoretical_derivative_bound(k, two, 2.0, r_one).lambda_bound /
            theoretical_derivative_bound(k, two, 1.0, r_one).lambda_bound ==
        doctest::Approx(2.0));

  const std::vector<double> radii{0.7, 1.3, 2.0};
  for (const auto& nu : {Multiindex{2}, Multiindex{1, 1}, Multiindex{3, 0, 2}, Multiindex{0, 4, 1}}) {
    double prev = 0.0;
    for (double delta : {1.0, 1.5, 2.0, 3.0}) {
      const double v = theoretical_derivative_bound(k, nu, delta, radii).lambda_bound;
      CHECK(v >= prev);
      prev = v;
    }
  }
  // Large orders stay finite through the log-space evaluation.
  CHECK(std::isfinite(theoretical_derivative_bound(k, Multiindex::unit(1, 60), 1.0, r_rho).lambda_bound));

  CHECK_THROWS_AS(theoretical_derivative_bound(k, Multiindex{}, 1.0, r_one), ValidationError);
  CHECK_THROWS_AS(theoretical_derivative_bound(k, Multiindex::unit(2), 1.0, r_one), ValidationError);
}
