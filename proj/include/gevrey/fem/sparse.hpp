#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace gevrey::fem {

/// Square compressed-sparse-row matrix with sorted column indices.
struct CsrMatrix {
  std::size_t n = 0;
  std::vector<std::size_t> row_ptr;  // size n + 1
  std::vector<std::size_t> col;
  std::vector<double> val;

  std::size_t nonzeros() const noexcept { return val.size(); }
  /// Entry (i, j), zero if not stored.
  double at(std::size_t i, std::size_t j) const;
  /// Index into val of entry (i, j); throws std::out_of_range if not stored.
  std::size_t slot(std::size_t i, std::size_t j) const;
  /// y = A x.
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;
  double quadratic_form(std::span<const double> x) const;
  std::vector<double> diagonal() const;
  /// Exact structural and numerical symmetry.
  bool is_symmetric() const;
  /// Largest |i - j| over stored entries.
  std::size_t bandwidth() const;
};

/// MatrixMarket coordinate format, general real, 1-based indices.
void write_matrix_market(const CsrMatrix& a, const std::filesystem::path& path);

}  // namespace gevrey::fem
