#include "gevrey/coefficients/coefficient_model.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include "gevrey/coefficients/zeta.hpp"
#include "gevrey/common/errors.hpp"

namespace gevrey::coefficients {

namespace {

constexpr double kPi = std::numbers::pi;

// Partial zeta sum over j = 1..terms; exact enough for range certification.
double partial_zeta5(std::size_t terms) {
  double sum = 0.0;
  for (std::size_t j = terms; j >= 1; --j) sum += std::pow(static_cast<double>(j), -5.0);
  return sum;
}

// sin(j pi x) for j = 1..count by the three-term recurrence.
void sine_table(double x, std::size_t count, std::vector<double>& out) {
  out.resize(count);
  if (count == 0) return;
  const double s1 = std::sin(kPi * x);
  const double two_cos = 2.0 * std::cos(kPi * x);
  double prev = 0.0;
  double cur = s1;
  for (std::size_t j = 0; j < count; ++j) {
    out[j] = cur;
    const double next = two_cos * cur - prev;
    prev = cur;
    cur = next;
  }
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

CoefficientModel CoefficientModel::gl_analytic() {
  CoefficientModel m;
  m.kind_ = ModelKind::kGlAnalytic;
  m.name_ = "gl-analytic";
  m.parameter_count_ = 1;
  m.box_ = {-1.0, 1.0};
  m.ranges_ = {{1.0, 3.0}, {0.0, 0.0}, {1.0, 1.0}};
  return m;
}

CoefficientModel CoefficientModel::gl_gevrey3() {
  CoefficientModel m;
  m.kind_ = ModelKind::kGlGevrey3;
  m.name_ = "gl-gevrey3";
  m.parameter_count_ = 1;
  m.box_ = {-1.0, 1.0};
  // x1 + x2 < 2 and exp(-1/sqrt(y+1)) <= exp(-1/sqrt 2) on (-1, 1].
  m.ranges_ = {{1.0, 1.0 + 2.0 * std::exp(-1.0 / std::sqrt(2.0))}, {0.0, 0.0}, {1.0, 1.0}};
  return m;
}

CoefficientModel CoefficientModel::qmc_analytic(std::size_t terms) {
  if (terms == 0) throw ValidationError("qmc-analytic: needs at least one term");
  CoefficientModel m;
  m.kind_ = ModelKind::kQmcAnalytic;
  m.name_ = "qmc-analytic";
  m.parameter_count_ = terms;
  m.box_ = {-0.5, 0.5};
  for (std::size_t j = 1; j <= terms; ++j) m.decay_.push_back(std::pow(static_cast<double>(j), -5.0));
  const double spread = 0.5 * partial_zeta5(terms);
  const double z5 = zeta5();
  // Outward rounding guard so sampled values never leave the range.
  const double pad = 1e-14;
  m.ranges_ = {{2.0 + 2.0 * std::exp(-z5 - spread) - pad, 2.0 + 2.0 * std::exp(-z5 + spread) + pad},
               {0.0, 0.0},
               {1.0, 1.0}};
  return m;
}

CoefficientModel CoefficientModel::qmc_gevrey2(std::size_t terms) {
  if (terms == 0) throw ValidationError("qmc-gevrey2: needs at least one term");
  CoefficientModel m;
  m.kind_ = ModelKind::kQmcGevrey2;
  m.name_ = "qmc-gevrey2";
  m.parameter_count_ = terms;
  m.box_ = {-0.5, 0.5};
  for (std::size_t j = 1; j <= terms; ++j) m.decay_.push_back(std::pow(static_cast<double>(j), -5.0));
  const double spread = std::exp(-1.0) * partial_zeta5(terms) / zeta5();
  const double pad = 1e-14;
  m.ranges_ = {{3.0 - spread - pad, 3.0 + spread + pad}, {0.0, 0.0}, {1.0, 1.0}};
  return m;
}

CoefficientModel CoefficientModel::constant(double a, double b, double c) {
  if (!(a > 0.0) || !std::isfinite(a)) throw ValidationError("constant model: a must be positive");
  if (!(b >= 0.0) || !std::isfinite(b)) throw ValidationError("constant model: b must be nonnegative");
  if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("constant model: c must be positive");
  CoefficientModel m;
  m.kind_ = ModelKind::kConstant;
  m.name_ = "constant";
  m.parameter_count_ = 0;
  m.box_ = {-1.0, 1.0};
  m.const_a_ = a;
  m.const_b_ = b;
  m.const_c_ = c;
  m.ranges_ = {{a, a}, {b, b}, {c, c}};
  return m;
}

CoefficientModel CoefficientModel::custom(double mean, std::vector<SeriesTerm> terms) {
  if (!std::isfinite(mean)) throw ValidationError("custom model: mean must be finite");
  std::map<std::size_t, double> merged;
  for (const auto& t : terms) {
    if (t.index == 0) throw ValidationError("custom model: term index must be >= 1");
    if (!std::isfinite(t.amplitude)) throw ValidationError("custom model: amplitude must be finite");
    if (merged.count(t.index))
      throw ValidationError("custom model: duplicate term index " + std::to_string(t.index));
    merged[t.index] = t.amplitude;
  }
  CoefficientModel m;
  m.kind_ = ModelKind::kCustom;
  m.name_ = "custom";
  m.box_ = {-0.5, 0.5};
  m.mean_ = mean;
  double spread = 0.0;
  for (const auto& [k, amp] : merged) {
    m.terms_.push_back({k, amp});
    spread += 0.5 * std::abs(amp);
  }
  m.parameter_count_ = merged.empty() ? 0 : merged.rbegin()->first;
  const double lo = mean - spread;
  if (!(lo > 0.0))
    throw ValidationError("custom model: mean - sum|amplitude|/2 = " + std::to_string(lo) +
                          " is not positive, a would not be uniformly elliptic");
  const double pad = 1e-14 * (std::abs(mean) + spread);
  m.ranges_ = {{lo - pad > 0.0 ? lo - pad : lo, mean + spread + pad}, {0.0, 0.0}, {1.0, 1.0}};
  return m;
}

CoefficientModel CoefficientModel::from_name(std::string_view name) {
  if (name == "gl-analytic") return gl_analytic();
  if (name == "gl-gevrey3") return gl_gevrey3();
  if (name == "qmc-analytic") return qmc_analytic();
  if (name == "qmc-gevrey2") return qmc_gevrey2();
  if (name == "constant") return constant();
  throw ValidationError("unknown model '" + std::string(name) +
                        "' (expected gl-analytic, gl-gevrey3, qmc-analytic, qmc-gevrey2, constant)");
}

CoefficientModel CoefficientModel::parse_custom(std::string_view text) {
  double mean = 1.0;
  bool have_mean = false;
  std::vector<SeriesTerm> terms;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    for (char& ch : raw)
      if (ch == ',') ch = ' ';
    const std::string line = trim(raw);
    if (line.empty()) continue;
    std::istringstream fields(line);
    long long index = -1;
    double amp = 0.0;
    std::string extra;
    if (!(fields >> index >> amp) || (fields >> extra) || index < 0)
      throw ValidationError("custom model line " + std::to_string(line_no) +
                            ": expected '<index> <amplitude>', got '" + line + "'");
    if (index == 0) {
      if (have_mean)
        throw ValidationError("custom model line " + std::to_string(line_no) + ": mean given twice");
      mean = amp;
      have_mean = true;
    } else {
      terms.push_back({static_cast<std::size_t>(index), amp});
    }
  }
  return custom(mean, std::move(terms));
}

CoefficientModel CoefficientModel::load_custom(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open coefficient table");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_custom(buf.str());
}

std::optional<GevreyData> CoefficientModel::gevrey_data() const {
  switch (kind_) {
    case ModelKind::kGlAnalytic:
      // |d^n a| = pi^n |sin| <= (a_bar/2) n! pi^n.
      return GevreyData{1.0, {1.0 / kPi}};
    case ModelKind::kQmcAnalytic: {
      // |d^nu a| <= (sup a - 2) prod j^{-5 nu_j} <= (a_bar/2) |nu|! R^-nu.
      GevreyData g{1.0, {}};
      g.radii.reserve(parameter_count_);
      for (std::size_t j = 1; j <= parameter_count_; ++j) g.radii.push_back(std::pow(double(j), 5.0));
      return g;
    }
    default:
      return std::nullopt;
  }
}

void CoefficientModel::validate_parameters(std::span<const double> y) const {
  for (std::size_t j = 0; j < y.size(); ++j) {
    const double v = y[j];
    if (!std::isfinite(v) || v < box_.lo || v > box_.hi)
      throw ValidationError(name_ + ": parameter y_" + std::to_string(j + 1) + " = " + std::to_string(v) +
                            " outside [" + std::to_string(box_.lo) + ", " + std::to_string(box_.hi) + "]");
  }
  if (kind_ == ModelKind::kGlGevrey3 && !y.empty() && !(y[0] + 1.0 > 0.0))
    throw ValidationError("gl-gevrey3: y + 1 must be positive (exp(-1/sqrt(y+1)) undefined at y = -1)");
}

FrozenCoefficient CoefficientModel::freeze(std::span<const double> y) const {
  validate_parameters(y);
  FrozenCoefficient f;
  f.model_ = this;
  f.y1_ = y.empty() ? 0.0 : y[0];
  f.b_ = kind_ == ModelKind::kConstant ? const_b_ : 0.0;
  f.c_ = kind_ == ModelKind::kConstant ? const_c_ : 1.0;
  switch (kind_) {
    case ModelKind::kQmcAnalytic: {
      const std::size_t used = std::min(y.size(), parameter_count_);
      f.amplitudes_.resize(used);
      for (std::size_t j = 0; j < used; ++j) f.amplitudes_[j] = decay_[j] * y[j];
      f.offset_ = -zeta5();
      break;
    }
    case ModelKind::kQmcGevrey2: {
      // Missing components count as y_j = 0, which still contributes exp(-2).
      f.amplitudes_.resize(parameter_count_);
      for (std::size_t j = 0; j < parameter_count_; ++j) {
        const double t = (j < y.size() ? y[j] : 0.0) + 0.5;
        f.amplitudes_[j] = decay_[j] * (t > 0.0 ? std::exp(-1.0 / t) : 0.0);
      }
      break;
    }
    case ModelKind::kCustom: {
      f.amplitudes_.assign(parameter_count_, 0.0);
      for (const auto& t : terms_)
        if (t.index <= y.size()) f.amplitudes_[t.index - 1] = t.amplitude * y[t.index - 1];
      f.offset_ = mean_;
      break;
    }
    default:
      break;
  }
  return f;
}

double CoefficientModel::eval(Field field, double x1, double x2, std::span<const double> y) const {
  return freeze(y).eval(field, x1, x2);
}

double FrozenCoefficient::eval(Field field, double x1, double x2) const {
  switch (field) {
    case Field::kA:
      return a(x1, x2);
    case Field::kB:
      return b_;
    case Field::kC:
      return c_;
  }
  return 0.0;
}

double FrozenCoefficient::a(double x1, double x2) const {
  const auto series = [&]() {
    thread_local std::vector<double> s1, s2;
    sine_table(x1, amplitudes_.size(), s1);
    sine_table(x2, amplitudes_.size(), s2);
    double sum = 0.0;
    for (std::size_t j = 0; j < amplitudes_.size(); ++j) sum += amplitudes_[j] * s1[j] * s2[j];
    return sum;
  };
  switch (model_->kind_) {
    case ModelKind::kConstant:
      return model_->const_a_;
    case ModelKind::kGlAnalytic:
      return 2.0 + std::sin(kPi * (x1 + x2 + y1_));
    case ModelKind::kGlGevrey3:
      return 1.0 + (x1 + x2) * std::exp(-1.0 / std::sqrt(y1_ + 1.0));
    case ModelKind::kQmcAnalytic:
      return 2.0 + 2.0 * std::exp(offset_ + series());
    case ModelKind::kQmcGevrey2:
      return 3.0 + series() / zeta5();
    case ModelKind::kCustom:
      return offset_ + series();
  }
  return 0.0;
}

double eval_coefficient(const CoefficientModel& model, Field field, double x1, double x2,
                        std::span<const double> y) {
  if (!(x1 > 0.0 && x1 < 1.0 && x2 > 0.0 && x2 < 1.0))
    throw ValidationError("eval_coefficient: x = (" + std::to_string(x1) + ", " + std::to_string(x2) +
                          ") not in the open unit square");
  return model.eval(field, x1, x2, y);
}

std::string_view field_name(Field field) {
  switch (field) {
    case Field::kA:
      return "a";
    case Field::kB:
      return "b";
    case Field::kC:
      return "c";
  }
  return "?";
}

}  // namespace gevrey::coefficients
