#pragma once

#include <cmath>

namespace cmlk::detail {

inline long long isqrt_ll(long long n) {
  if (n < 0) return -1;
  auto r = static_cast<long long>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline __int128 isqrt_128(__int128 n) {
  if (n < 0) return -1;
  auto r = static_cast<__int128>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace cmlk::detail
