#include "sfaas/rng.hpp"

#include <cmath>

#include "sfaas/errors.hpp"

namespace sfaas {

namespace {

std::seed_seq make_seed(std::uint64_t master_seed, StreamId id) {
  const auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  const auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  return std::seed_seq{lo(master_seed), hi(master_seed), static_cast<std::uint32_t>(id.kind),
                       lo(id.entity), hi(id.entity)};
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, StreamId id) : id_(id) {
  auto seq = make_seed(master_seed, id);
  engine_.seed(seq);
}

double RngStream::uniform01() {
  // (k + 1) / 2^53 for k in [0, 2^53): never 0, reaches 1 exactly.
  return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

double exp_from_uniform(double u, double rate) { return -std::log(u) / rate; }

double exp_sample(double rate, RngStream& stream) {
  if (!(rate > 0.0)) throw ConfigError("exponential rate must be positive");
  return exp_from_uniform(stream.uniform01(), rate);
}

std::uint64_t replication_seed(std::uint64_t master_seed, std::uint64_t index) {
  RngStream s(master_seed, {StreamKind::Replication, index});
  return s.next_u64();
}

}  // namespace sfaas
