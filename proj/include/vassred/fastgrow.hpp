#ifndef VASSRED_FASTGROW_HPP
#define VASSRED_FASTGROW_HPP

#include <cstddef>

#include <boost/multiprecision/cpp_int.hpp>

namespace vassred {

using BigNat = boost::multiprecision::cpp_int;

/// Largest intermediate value, in bits, an evaluation may produce before it
/// gives up with ResourceLimit.
constexpr std::size_t kDefaultMaxBits = std::size_t{1} << 20;

/// A_1(n) = 2n, A_{i+1}(n) = A_i^n(1).
BigNat ack(unsigned i, const BigNat& n, std::size_t max_bits = kDefaultMaxBits);

/// F_1(n) = 2n, F_{i+1}(n) = F_i^{n/4}(4); n must be a positive multiple of 4.
BigNat f_value(unsigned i, const BigNat& n, std::size_t max_bits = kDefaultMaxBits);

}  // namespace vassred

#endif  // VASSRED_FASTGROW_HPP
