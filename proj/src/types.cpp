#include "trustnet/rng.hpp"
#include "trustnet/types.hpp"

namespace trustnet {

std::string to_string(PeerId p) { return std::to_string(p.value); }

std::string to_string(const FileId& f) { return std::to_string(f.category) + ":" + std::to_string(f.rank); }

const char* to_string(Outcome o) { return o == Outcome::authentic ? "authentic" : "fake"; }

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace

std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
  return splitmix64(h ^ index);
}

}  // namespace trustnet
