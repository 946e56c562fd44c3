#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gevrey::coefficients {

enum class ModelKind { kGlAnalytic, kGlGevrey3, kQmcAnalytic, kQmcGevrey2, kConstant, kCustom };

enum class Field { kA, kB, kC };

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return v >= lo && v <= hi; }
};

/// Certified pointwise ranges of a, b, c over D x U.
struct FieldRanges {
  Range a;
  Range b;
  Range c;
};

/// One term amplitude * sin(k pi x1) sin(k pi x2) * y_k of a custom field.
struct SeriesTerm {
  std::size_t index = 0;
  double amplitude = 0.0;
};

/// Gevrey data of the a-coefficient: |d^nu a| <= (a_bar/2) (|nu|!)^delta / (2R)^nu.
struct GevreyData {
  double delta = 1.0;
  std::vector<double> radii;  // R_j for j = 1..radii.size()
};

class CoefficientModel;

/// The fields of a model at one fixed parameter vector. y-dependent factors
/// are computed once, so repeated evaluation over quadrature points is cheap.
class FrozenCoefficient {
 public:
  double a(double x1, double x2) const;
  double b() const noexcept { return b_; }
  double c() const noexcept { return c_; }
  double eval(Field field, double x1, double x2) const;

 private:
  friend class CoefficientModel;
  const CoefficientModel* model_ = nullptr;
  double y1_ = 0.0;
  double b_ = 0.0;
  double c_ = 1.0;
  double offset_ = 0.0;              // series models: mean or exponent shift
  std::vector<double> amplitudes_;   // series models: per-mode factor, index j-1
};

/// Parametric diffusion/reaction/mass coefficients on (0,1)^2.
///
/// Parameters beyond parameter_count() are accepted and ignored, so a vector
/// and its zero-padded extension evaluate identically. Immutable after
/// construction; evaluation is thread-safe.
class CoefficientModel {
 public:
  /// a = 2 + sin(pi (x1 + x2 + y)), b = 0, c = 1, y in [-1, 1].
  static CoefficientModel gl_analytic();
  /// a = 1 + (x1 + x2) exp(-1/sqrt(y + 1)), b = 0, c = 1, y in (-1, 1].
  static CoefficientModel gl_gevrey3();
  /// a = 2 + 2 exp(-zeta(5) + sum_j j^-5 sin(j pi x1) sin(j pi x2) y_j), y_j in [-1/2, 1/2].
  static CoefficientModel qmc_analytic(std::size_t terms = 100);
  /// a = 3 + zeta(5)^-1 sum_j j^-5 sin(j pi x1) sin(j pi x2) exp(-1/(y_j + 1/2)).
  static CoefficientModel qmc_gevrey2(std::size_t terms = 100);
  /// Parameter-independent a, b, c; accepts any parameters in [-1, 1].
  static CoefficientModel constant(double a = 1.0, double b = 0.0, double c = 1.0);
  /// a = mean + sum_k amplitude_k sin(k pi x1) sin(k pi x2) y_k, y_k in [-1/2, 1/2].
  static CoefficientModel custom(double mean, std::vector<SeriesTerm> terms);

  /// Built-in model by name: gl-analytic, gl-gevrey3, qmc-analytic,
  /// qmc-gevrey2, constant.
  static CoefficientModel from_name(std::string_view name);

  /// Plain-text sine-series table: one "index, amplitude" pair per line,
  /// '#' comments. Index 0 sets the mean field (default 1).
  static CoefficientModel load_custom(const std::filesystem::path& path);
  static CoefficientModel parse_custom(std::string_view text);

  ModelKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  std::size_t parameter_count() const noexcept { return parameter_count_; }
  Range parameter_box() const noexcept { return box_; }
  const FieldRanges& ranges() const noexcept { return ranges_; }
  std::optional<GevreyData> gevrey_data() const;

  /// Throws ValidationError if y is outside the parameter domain.
  void validate_parameters(std::span<const double> y) const;

  /// Validates y and binds it. The model must outlive the result.
  FrozenCoefficient freeze(std::span<const double> y) const;

  double eval(Field field, double x1, double x2, std::span<const double> y) const;

 private:
  friend class FrozenCoefficient;
  CoefficientModel() = default;

  ModelKind kind_ = ModelKind::kConstant;
  std::string name_;
  std::size_t parameter_count_ = 0;
  Range box_{-1.0, 1.0};
  FieldRanges ranges_;
  double const_a_ = 1.0;
  double const_b_ = 0.0;
  double const_c_ = 1.0;
  double mean_ = 1.0;
  std::vector<SeriesTerm> terms_;
  std::vector<double> decay_;  // j^-5 for the qmc models
};

/// Pointwise field value with full validation of x and y.
double eval_coefficient(const CoefficientModel& model, Field field, double x1, double x2,
                        std::span<const double> y);

std::string_view field_name(Field field);

}  // namespace gevrey::coefficients
