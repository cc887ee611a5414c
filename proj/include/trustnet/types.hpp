#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace trustnet {

/// Dense peer identifier. Stable for the lifetime of a simulation run.
struct PeerId {
  std::uint32_t value = 0;

  constexpr PeerId() = default;
  constexpr explicit PeerId(std::uint32_t v) : value(v) {}
  constexpr std::size_t index() const { return value; }

  friend constexpr auto operator<=>(PeerId, PeerId) = default;
};

/// A content item: category index (1-based) plus popularity rank inside it.
struct FileId {
  std::uint16_t category = 1;
  std::uint32_t rank = 1;

  friend constexpr auto operator<=>(const FileId&, const FileId&) = default;
};

enum class Outcome : std::uint8_t { authentic, fake };

/// Raised when an operation is called with arguments outside its domain.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string to_string(PeerId p);
std::string to_string(const FileId& f);
const char* to_string(Outcome o);

}  // namespace trustnet

template <>
struct std::hash<trustnet::PeerId> {
  std::size_t operator()(trustnet::PeerId p) const noexcept { return std::hash<std::uint32_t>{}(p.value); }
};
