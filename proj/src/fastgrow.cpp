#include "vassred/fastgrow.hpp"

#include <map>
#include <string>
#include <vector>

#include "vassred/error.hpp"

namespace vassred {

namespace {

std::size_t bits(const BigNat& v) { return v == 0 ? 0 : msb(v) + 1; }

// Both families share G_1(n) = 2n and G_{i+1}(n) = G_i^{count(n)}(seed),
// with (count, seed) = (n, 1) for A and (n/4, 4) for F.  Every level at
// least doubles its argument, so count > max_bits already overflows the cap.
class Hierarchy {
 public:
  Hierarchy(unsigned divisor, unsigned seed, std::size_t max_bits)
      : divisor_(divisor), seed_(seed), max_bits_(max_bits) {}

  BigNat eval(unsigned level, const BigNat& n) {
    if (level == 1) return check(n << 1);
    if (memo_.size() < level) memo_.resize(level);
    auto& memo = memo_[level - 1];
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    const BigNat count = n / divisor_;
    if (count > max_bits_) throw limit();
    const auto times = count.convert_to<std::size_t>();
    BigNat v = seed_;
    if (level == 2) {
      v = check(v << times);  // 2^times * seed
    } else {
      for (std::size_t k = 0; k < times; ++k) v = eval(level - 1, v);
    }
    memo.emplace(n, v);
    return v;
  }

 private:
  BigNat check(BigNat v) const {
    if (bits(v) > max_bits_) throw limit();
    return v;
  }
  ResourceLimit limit() const {
    return ResourceLimit("value exceeds the cap of " + std::to_string(max_bits_) + " bits");
  }

  unsigned divisor_;
  unsigned seed_;
  std::size_t max_bits_;
  std::vector<std::map<BigNat, BigNat>> memo_;
};

}  // namespace

BigNat ack(unsigned i, const BigNat& n, std::size_t max_bits) {
  if (i < 1 || n < 1) throw Error("ack requires i >= 1 and n >= 1");
  return Hierarchy(1, 1, max_bits).eval(i, n);
}

BigNat f_value(unsigned i, const BigNat& n, std::size_t max_bits) {
  if (i < 1) throw Error("f_value requires i >= 1");
  if (n < 4 || n % 4 != 0) throw Error("f_value requires n to be a positive multiple of 4");
  return Hierarchy(4, 4, max_bits).eval(i, n);
}

}  // namespace vassred
