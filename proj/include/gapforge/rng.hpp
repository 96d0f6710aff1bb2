#ifndef GAPFORGE_RNG_HPP
#define GAPFORGE_RNG_HPP

#include <array>
#include <cstdint>
#include <limits>

namespace gapforge {

// Philox4x32-10 counter-based generator (Salmon et al. constants) with a
// 64-bit key. Satisfies UniformRandomBitGenerator with 32-bit output.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  explicit Philox4x32(std::uint64_t key = 0) : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)} {}

  // Stream for one draw: key = seed xor draw_index.
  static Philox4x32 for_draw(std::uint64_t seed, std::uint64_t draw) { return Philox4x32(seed ^ draw); }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (pos_ == 4) {
      block_ = bijection(counter_, key_);
      increment();
      pos_ = 0;
    }
    return block_[pos_++];
  }

  // The raw 10-round bijection.
  static Counter bijection(Counter c, Key k) {
    for (int r = 0; r < 10; ++r) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
      c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
      k[0] += kWeyl0;
      k[1] += kWeyl1;
    }
    return c;
  }

 private:
  void increment() {
    for (auto& w : counter_)
      if (++w != 0) break;
  }

  Key key_;
  Counter counter_{0, 0, 0, 0};
  Counter block_{};
  int pos_ = 4;
};

}  // namespace gapforge

#endif
