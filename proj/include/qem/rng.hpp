#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qem
{
//---------------------------------------------------------------------------//
/*!
 * Seeded random stream that can be split into independent child streams.
 *
 * Children are keyed by an integer or a name so that the stream used by a
 * given trial does not depend on how many draws other trials consumed.
 */
class Rng
{
  public:
    explicit Rng(std::uint64_t seed = 0);

    Rng split(std::uint64_t id) const;
    Rng split(std::string_view name) const;

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }
    //! Uniform on [0, 1)
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();
    //! Index drawn from an unnormalized discrete distribution
    template<class It>
    std::size_t discrete(It first, It last);

    std::mt19937_64& engine() { return engine_; }

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

template<class It>
std::size_t Rng::discrete(It first, It last)
{
    double total = 0;
    for (It it = first; it != last; ++it)
        total += *it;
    double target = this->uniform() * total;
    double acc = 0;
    std::size_t idx = 0;
    std::size_t last_positive = 0;
    for (It it = first; it != last; ++it, ++idx)
    {
        if (*it > 0)
            last_positive = idx;
        acc += *it;
        if (target < acc)
            return idx;
    }
    // Round-off at the top end
    return last_positive;
}

}  // namespace qem
