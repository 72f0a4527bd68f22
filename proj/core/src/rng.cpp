#include "seedscope/rng.hpp"

#include "seedscope/error.hpp"

namespace seedscope {

Rng Rng::stream(std::uint64_t base_seed, std::uint64_t replicate,
                StreamPurpose purpose) {
  const auto tag = static_cast<std::uint64_t>(purpose);
  return Rng(mix64(mix64(base_seed + replicate) ^ mix64(tag * 0xd1b54a32d192ed03ULL)));
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw PreconditionError("Rng::below: bound must be positive");
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = max() - (max() % bound + 1) % bound;
  std::uint64_t draw = engine_();
  while (draw > limit) draw = engine_();
  return draw % bound;
}

}  // namespace seedscope
