#include "qem/rng.hpp"

namespace qem
{
std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(splitmix64(seed))};
    engine_.seed(seq);
}

Rng Rng::split(std::uint64_t id) const
{
    return Rng(splitmix64(seed_ ^ splitmix64(id + 0x632be59bd9b4e019ULL)));
}

Rng Rng::split(std::string_view name) const
{
    // FNV-1a
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : name)
    {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return this->split(h);
}

double Rng::uniform()
{
    // 53 random bits
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal()
{
    return normal_(engine_);
}

}  // namespace qem
