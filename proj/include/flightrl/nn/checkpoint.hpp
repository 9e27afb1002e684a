#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "flightrl/nn/adam.hpp"
#include "flightrl/nn/network.hpp"

namespace flightrl::nn {

// Binary checkpoint container. Little-endian throughout; doubles are IEEE-754
// binary64. The byte layout is documented in docs/formats.md and guarded by a
// round-trip test; bump kCheckpointVersion on any layout change.
//
// A checkpoint is a sequence of named, typed sections so that an agent can
// store several networks, their optimizer states, scalars, and its RNG stream
// in one file, and `inspect` can walk the file without further context.

inline constexpr char kCheckpointMagic[8] = {'F', 'R', 'L', 'C', 'K', 'P', 'T', '\0'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

enum class SectionType : std::uint32_t {
  network = 1,      // NetworkParams
  adam = 2,         // AdamState (+ shape header)
  scalar = 3,       // one double
  counter = 4,      // one int64
  text = 5,         // UTF-8 string (rng streams, metadata)
  scalar_adam = 6,  // ScalarAdam
};

struct Section {
  SectionType type{};
  std::vector<std::uint8_t> payload;
};

class Checkpoint {
 public:
  void put_network(const std::string& name, const NetworkParams& p);
  void put_adam(const std::string& name, const AdamState& st);
  void put_scalar(const std::string& name, double v);
  void put_counter(const std::string& name, std::int64_t v);
  void put_text(const std::string& name, const std::string& v);
  void put_scalar_adam(const std::string& name, const ScalarAdam& st);

  NetworkParams get_network(const std::string& name) const;
  AdamState get_adam(const std::string& name) const;
  double get_scalar(const std::string& name) const;
  std::int64_t get_counter(const std::string& name) const;
  std::string get_text(const std::string& name) const;
  ScalarAdam get_scalar_adam(const std::string& name) const;

  bool has(const std::string& name) const { return sections_.count(name) != 0; }
  const std::map<std::string, Section>& sections() const { return sections_; }

  void save(const std::string& path) const;
  static Checkpoint load(const std::string& path);

  void write(std::ostream& os) const;
  static Checkpoint read(std::istream& is);

 private:
  const Section& section(const std::string& name, SectionType expect) const;
  std::map<std::string, Section> sections_;
};

// Human-readable listing: section names, types, shapes, counters.
std::string describe_checkpoint(const Checkpoint& c);

}  // namespace flightrl::nn
