#pragma once

#include <cstdint>
#include <random>

namespace sfaas {

// Entity families that own an independent random stream.
enum class StreamKind : std::uint32_t {
  ClientArrival = 1,
  ClientPhase = 2,
  ContainerService = 3,
  Dispatch = 4,
  NetworkTrigger = 5,
  Replication = 6,
};

struct StreamId {
  StreamKind kind;
  std::uint64_t entity;
};

// A reproducible random stream. Output depends only on the master seed and the
// stream id, so adding or renumbering other entities never perturbs it.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, StreamId id);

  // Uniform in (0, 1], 53-bit resolution. Computed by hand rather than via
  // std::uniform_real_distribution so the sequence is identical across
  // standard library implementations.
  double uniform01();

  std::uint64_t next_u64() { return engine_(); }
  StreamId id() const { return id_; }

 private:
  StreamId id_;
  std::mt19937_64 engine_;
};

// Inverse-transform exponential draw: -ln(u) / rate.
double exp_from_uniform(double u, double rate);

// Throws ConfigError when rate <= 0.
double exp_sample(double rate, RngStream& stream);

// Seed of replication `index` under a master seed; feeds RngStream for that
// replication's entities.
std::uint64_t replication_seed(std::uint64_t master_seed, std::uint64_t index);

}  // namespace sfaas
