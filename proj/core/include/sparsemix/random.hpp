#ifndef SPARSEMIX_RANDOM_HPP_
#define SPARSEMIX_RANDOM_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>

namespace sparsemix {

namespace detail {

/// Philox4x32-10 on `Lanes` independent counters at once; the interleaved
/// rounds let the multiplies overlap.
template <std::size_t Lanes>
inline void philox4x32_10_batch(std::uint32_t (&c0)[Lanes], std::uint32_t (&c1)[Lanes],
                                std::uint32_t (&c2)[Lanes], std::uint32_t (&c3)[Lanes],
                                std::uint32_t k0, std::uint32_t k1) {
  for (int round = 0; round < 10; ++round) {
    for (std::size_t j = 0; j < Lanes; ++j) {
      const std::uint64_t p0 = std::uint64_t{0xD2511F53U} * c0[j];
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57U} * c2[j];
      c0[j] = static_cast<std::uint32_t>(p1 >> 32U) ^ c1[j] ^ k0;
      c2[j] = static_cast<std::uint32_t>(p0 >> 32U) ^ c3[j] ^ k1;
      c1[j] = static_cast<std::uint32_t>(p1);
      c3[j] = static_cast<std::uint32_t>(p0);
    }
    k0 += 0x9E3779B9U;
    k1 += 0xBB67AE85U;
  }
}

}  // namespace detail

/// Philox4x32-10 block function (Salmon et al., Random123). Maps a 128-bit
/// counter and a 64-bit key to 128 pseudo-random bits.
inline std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                  std::array<std::uint32_t, 2> key) {
  std::uint32_t c0[1] = {ctr[0]};
  std::uint32_t c1[1] = {ctr[1]};
  std::uint32_t c2[1] = {ctr[2]};
  std::uint32_t c3[1] = {ctr[3]};
  detail::philox4x32_10_batch(c0, c1, c2, c3, key[0], key[1]);
  return {c0[0], c1[0], c2[0], c3[0]};
}

/// Which error probability a stream serves. Direct sampling under H0 and
/// importance sampling under H1 for the false-alarm probability share a tag,
/// so the two estimators see the same underlying normals.
enum class StreamTarget : std::uint32_t { FalseAlarm = 0, MissDetection = 1 };

/// Calibration and evaluation draws must never share a stream.
enum class StreamPurpose : std::uint32_t { Evaluation = 0, Calibration = 1 };

/// Identity of a family of per-trial substreams.
struct StreamId {
  StreamTarget target = StreamTarget::FalseAlarm;
  StreamPurpose purpose = StreamPurpose::Evaluation;

  /// Packs target and purpose into the 8-bit tag field of the counter.
  [[nodiscard]] std::uint32_t tag() const {
    return static_cast<std::uint32_t>(target) | (static_cast<std::uint32_t>(purpose) << 1U);
  }
  friend bool operator==(const StreamId&, const StreamId&) = default;
};

/*
 * Counter-based random stream.
 *
 * The Philox key is the master seed; the counter is
 *   word 0      block index (low 32 bits)
 *   word 1      block index (high 16 bits) | lane (8 bits) | tag (8 bits)
 *   words 2, 3  trial index
 * so the stream of any (seed, trial, tag, lane) can be reconstructed without
 * touching any other. Satisfies UniformRandomBitGenerator.
 */
class CounterStream {
 public:
  using result_type = std::uint32_t;

  CounterStream(std::uint64_t seed, std::uint64_t trial, std::uint32_t tag, std::uint32_t lane = 0);

  result_type operator()() {
    if (pos_ == buffer_.size()) {
      refill();
    }
    return buffer_[pos_++];
  }

  /// Uniform double on [0, 1) with 53 random bits.
  double uniform01() {
    const std::uint64_t hi = (*this)();
    const std::uint64_t lo = (*this)();
    return static_cast<double>(((hi << 32U) | lo) >> 11U) * 0x1.0p-53;
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

 private:
  void refill() {
    if (block_ + kBatch - 1 > kMaxBlock) {
      exhausted();
    }
    std::uint32_t c0[kBatch];
    std::uint32_t c1[kBatch];
    std::uint32_t c2[kBatch];
    std::uint32_t c3[kBatch];
    for (std::size_t j = 0; j < kBatch; ++j) {
      const std::uint64_t b = block_ + j;
      c0[j] = static_cast<std::uint32_t>(b);
      c1[j] = (counter_[1] & 0xFFFF0000U) | static_cast<std::uint32_t>(b >> 32U);
      c2[j] = counter_[2];
      c3[j] = counter_[3];
    }
    detail::philox4x32_10_batch(c0, c1, c2, c3, key_[0], key_[1]);
    for (std::size_t j = 0; j < kBatch; ++j) {
      buffer_[4 * j] = c0[j];
      buffer_[4 * j + 1] = c1[j];
      buffer_[4 * j + 2] = c2[j];
      buffer_[4 * j + 3] = c3[j];
    }
    block_ += kBatch;
    pos_ = 0;
  }
  [[noreturn]] static void exhausted();

  static constexpr std::size_t kBatch = 4;
  static constexpr std::uint64_t kMaxBlock = (std::uint64_t{1} << 48U) - 1;

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4 * kBatch> buffer_{};
  std::size_t pos_ = 4 * kBatch;
};

/// The two independent streams a trial needs: one for the N(0,1) draws and one
/// for the mixture labels. Keeping them apart makes the normal draws of a trial
/// identical under both hypotheses.
struct TrialStreams {
  CounterStream values;
  CounterStream labels;

  TrialStreams(std::uint64_t seed, std::uint64_t trial, StreamId id)
      : values(seed, trial, id.tag(), 0), labels(seed, trial, id.tag(), 1) {}
};

/// SplitMix64 finalizer; used to derive per-cell seeds from the master seed.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
  z = (z ^ (z >> 30U)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27U)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31U);
}

}  // namespace sparsemix

#endif  // SPARSEMIX_RANDOM_HPP_
