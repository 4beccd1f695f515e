#include "pulsebench/seeding.hpp"

namespace pulsebench {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, SeedStream stream, std::uint64_t index) {
    auto s = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(stream)));
    return splitmix64(s + splitmix64(index + 0x632be59bd9b4e019ULL));
}

}  // namespace pulsebench
