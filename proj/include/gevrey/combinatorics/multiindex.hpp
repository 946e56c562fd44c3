#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include "gevrey/combinatorics/rational.hpp"

namespace gevrey::combinatorics {

/// Finitely supported sequence of nonnegative integers. Dimensions are
/// 1-based; only nonzero entries are stored.
class Multiindex {
 public:
  Multiindex() = default;
  /// Entry k of the list is the exponent of dimension k+1.
  Multiindex(std::initializer_list<unsigned> exponents);
  explicit Multiindex(const std::vector<unsigned>& exponents);

  static Multiindex unit(std::size_t dim, unsigned exponent = 1);

  unsigned operator[](std::size_t dim) const;
  void set(std::size_t dim, unsigned exponent);

  /// |nu|, the sum of all entries.
  unsigned order() const noexcept { return order_; }
  std::size_t support_size() const noexcept { return entries_.size(); }
  const std::map<std::size_t, unsigned>& entries() const noexcept { return entries_; }
  bool is_zero() const noexcept { return entries_.empty(); }

  friend bool operator==(const Multiindex&, const Multiindex&) = default;

  std::string to_string() const;

 private:
  std::map<std::size_t, unsigned> entries_;
  unsigned order_ = 0;
};

/// Componentwise partial order m <= nu.
bool is_below(const Multiindex& m, const Multiindex& nu);

/// nu - m; requires is_below(m, nu).
Multiindex difference(const Multiindex& nu, const Multiindex& m);

BigInt binomial(unsigned n, unsigned k);

/// Multi-binomial prod_j binom(nu_j, m_j); zero unless m <= nu.
BigInt binomial(const Multiindex& nu, const Multiindex& m);

inline constexpr std::size_t kDefaultSupportCap = 8;

/// Visits every m with 0 <= m <= nu by odometer enumeration over the support
/// of nu, starting at m = 0. Rejects nu with more than support_cap nonzero
/// entries.
void for_each_below(const Multiindex& nu, const std::function<void(const Multiindex&)>& visit,
                    std::size_t support_cap = kDefaultSupportCap);

/// All nu with support in {1..dim} and |nu| <= max_order.
std::vector<Multiindex> all_multiindices(std::size_t dim, unsigned max_order);

}  // namespace gevrey::combinatorics
