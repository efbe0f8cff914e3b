#include "sparsemix/random.hpp"

#include <stdexcept>

namespace sparsemix {

CounterStream::CounterStream(std::uint64_t seed, std::uint64_t trial, std::uint32_t tag,
                             std::uint32_t lane)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32U)},
      counter_{0, ((lane & 0xFFU) << 16U) | ((tag & 0xFFU) << 24U),
               static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32U)} {}

void CounterStream::exhausted() { throw std::length_error("CounterStream: substream exhausted"); }

}  // namespace sparsemix
