#include "kacsim/rng.hpp"

#include <array>
#include <cmath>

namespace kacsim {

std::uint64_t mix64(std::uint64_t x) noexcept
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::mt19937_64 seeded_engine(const RngStreamKey& key)
{
  std::uint64_t h = mix64(key.master_seed);
  h = mix64(h ^ mix64(key.replica_index + 0x632be59bd9b4e019ULL));
  h = mix64(h ^ (static_cast<std::uint64_t>(key.tag) + 1) * 0xd6e8feb86659fd93ULL);

  std::array<std::uint32_t, 8> words{};
  std::uint64_t s = h;
  for (std::size_t k = 0; k < words.size(); k += 2) {
    s = mix64(s);
    words[k] = static_cast<std::uint32_t>(s);
    words[k + 1] = static_cast<std::uint32_t>(s >> 32);
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

} // namespace

Rng::Rng(const RngStreamKey& key) : key_(key), engine_(seeded_engine(key)) {}

double Rng::uniform() noexcept
{
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) noexcept
{
  // Rejection on the top of the range keeps the result unbiased.
  const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % n + 1) % n;
  std::uint64_t x = engine_();
  while (x > limit) {
    x = engine_();
  }
  return x % n;
}

double Rng::exponential(double rate) noexcept
{
  return -std::log1p(-uniform()) / rate;
}

double Rng::normal() noexcept
{
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double x = 0.0;
  double y = 0.0;
  double r2 = 0.0;
  do {
    x = 2.0 * uniform() - 1.0;
    y = 2.0 * uniform() - 1.0;
    r2 = x * x + y * y;
  } while (r2 >= 1.0 || r2 == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(r2) / r2);
  spare_normal_ = y * scale;
  has_spare_ = true;
  return x * scale;
}

} // namespace kacsim
