#include "gevrey/combinatorics/multiindex.hpp"

#include <algorithm>
#include <sstream>

#include "gevrey/common/errors.hpp"

namespace gevrey::combinatorics {

Multiindex::Multiindex(std::initializer_list<unsigned> exponents)
    : Multiindex(std::vector<unsigned>(exponents)) {}

Multiindex::Multiindex(const std::vector<unsigned>& exponents) {
  for (std::size_t k = 0; k < exponents.size(); ++k) set(k + 1, exponents[k]);
}

Multiindex Multiindex::unit(std::size_t dim, unsigned exponent) {
  Multiindex nu;
  nu.set(dim, exponent);
  return nu;
}

unsigned Multiindex::operator[](std::size_t dim) const {
  const auto it = entries_.find(dim);
  return it == entries_.end() ? 0u : it->second;
}

void Multiindex::set(std::size_t dim, unsigned exponent) {
  if (dim == 0) throw ValidationError("multiindex dimensions are 1-based");
  order_ -= (*this)[dim];
  if (exponent == 0) {
    entries_.erase(dim);
  } else {
    entries_[dim] = exponent;
  }
  order_ += exponent;
}

std::string Multiindex::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [dim, e] : entries_) {
    if (!first) os << ", ";
    os << dim << ':' << e;
    first = false;
  }
  os << '}';
  return os.str();
}

bool is_below(const Multiindex& m, const Multiindex& nu) {
  for (const auto& [dim, e] : m.entries()) {
    if (e > nu[dim]) return false;
  }
  return true;
}

Multiindex difference(const Multiindex& nu, const Multiindex& m) {
  if (!is_below(m, nu)) throw ValidationError("difference requires m <= nu");
  Multiindex out = nu;
  for (const auto& [dim, e] : m.entries()) out.set(dim, nu[dim] - e);
  return out;
}

BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt result = 1;
  for (unsigned i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

BigInt binomial(const Multiindex& nu, const Multiindex& m) {
  if (!is_below(m, nu)) return 0;
  BigInt result = 1;
  for (const auto& [dim, e] : nu.entries()) result *= binomial(e, m[dim]);
  return result;
}

void for_each_below(const Multiindex& nu, const std::function<void(const Multiindex&)>& visit,
                    std::size_t support_cap) {
  if (nu.support_size() > support_cap) {
    throw ValidationError("multiindex support " + std::to_string(nu.support_size()) +
                          " exceeds enumeration cap " + std::to_string(support_cap));
  }
  std::vector<std::size_t> dims;
  std::vector<unsigned> limits;
  for (const auto& [dim, e] : nu.entries()) {
    dims.push_back(dim);
    limits.push_back(e);
  }
  std::vector<unsigned> digits(dims.size(), 0);
  Multiindex m;
  for (;;) {
    visit(m);
    std::size_t k = 0;
    while (k < digits.size() && digits[k] == limits[k]) {
      digits[k] = 0;
      m.set(dims[k], 0);
      ++k;
    }
    if (k == digits.size()) return;
    ++digits[k];
    m.set(dims[k], digits[k]);
  }
}

std::vector<Multiindex> all_multiindices(std::size_t dim, unsigned max_order) {
  std::vector<Multiindex> out;
  std::vector<unsigned> e(dim, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t k, unsigned left) {
    if (k == dim) {
      out.emplace_back(e);
      return;
    }
    for (unsigned v = 0; v <= left; ++v) {
      e[k] = v;
      rec(k + 1, left - v);
    }
    e[k] = 0;
  };
  rec(0, max_order);
  return out;
}

}  // namespace gevrey::combinatorics
