#include "gevrey/fem/sparse.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include "gevrey/common/errors.hpp"

namespace gevrey::fem {

std::size_t CsrMatrix::slot(std::size_t i, std::size_t j) const {
  const auto first = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[i]);
  const auto last = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j)
    throw std::out_of_range("CsrMatrix: entry (" + std::to_string(i) + ", " + std::to_string(j) + ") not stored");
  return static_cast<std::size_t>(it - col.begin());
}

double CsrMatrix::at(std::size_t i, std::size_t j) const {
  const auto first = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[i]);
  const auto last = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return val[static_cast<std::size_t>(it - col.begin())];
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != n || y.size() != n) throw ValidationError("CsrMatrix::multiply: size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k] * x[col[k]];
    y[i] = s;
  }
}

std::vector<double> CsrMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(n);
  multiply(x, y);
  return y;
}

double CsrMatrix::quadratic_form(std::span<const double> x) const {
  const auto ax = multiply(x);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * ax[i];
  return s;
}

std::vector<double> CsrMatrix::diagonal() const {
  std::vector<double> d(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i] = at(i, i);
  return d;
}

bool CsrMatrix::is_symmetric() const {
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      const std::size_t j = col[k];
      const auto first = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[j]);
      const auto last = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[j + 1]);
      const auto it = std::lower_bound(first, last, i);
      if (it == last || *it != i) return false;
      if (val[static_cast<std::size_t>(it - col.begin())] != val[k]) return false;
    }
  return true;
}

std::size_t CsrMatrix::bandwidth() const {
  std::size_t bw = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
      bw = std::max(bw, col[k] > i ? col[k] - i : i - col[k]);
  return bw;
}

void write_matrix_market(const CsrMatrix& a, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.n << ' ' << a.n << ' ' << a.nonzeros() << '\n';
  char buf[64];
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      const auto res = std::to_chars(buf, buf + sizeof buf, a.val[k]);
      out << i + 1 << ' ' << a.col[k] + 1 << ' ' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf))
          << '\n';
    }
  if (!out) throw IoError(path.string(), "write failed");
}

}  // namespace gevrey::fem
