#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace outcode {

// splitmix64; used both as a generator and as a seed/stream mixer so that
// every consumer derives its stream deterministically from (root seed, tag).
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (tag + 1));
  std::uint64_t a = splitmix64(s);
  std::uint64_t b = splitmix64(s);
  return a ^ (b << 1);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 1) : state_(seed) {
    // warm up so nearby seeds decorrelate
    splitmix64(state_);
    splitmix64(state_);
  }

  std::uint64_t next_u64() { return splitmix64(state_); }

  // uniform in [0, 1)
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [0, n)
  std::uint64_t uniform_index(std::uint64_t n) {
    // modulo bias is < 2^-40 for desk-scale n; acceptable here
    return next_u64() % n;
  }

  // standard normal via polar rejection (no trig; deterministic)
  double gaussian() {
    for (;;) {
      double u = 2.0 * uniform() - 1.0;
      double v = 2.0 * uniform() - 1.0;
      double s = u * u + v * v;
      if (s > 0.0 && s < 1.0) {
        double f = std::sqrt(-2.0 * std::log(s) / s);
        return u * f;
      }
    }
  }

  // unit vector uniform on the sphere S^{d-1}
  void unit_vector(int d, double* out) {
    for (;;) {
      double norm2 = 0.0;
      for (int a = 0; a < d; ++a) {
        out[a] = gaussian();
        norm2 += out[a] * out[a];
      }
      if (norm2 > 1e-24) {
        double inv = 1.0 / std::sqrt(norm2);
        for (int a = 0; a < d; ++a) out[a] *= inv;
        return;
      }
    }
  }

  // uniform point in the unit ball (direction times radius^(1/d))
  void ball_point(int d, double* out) {
    unit_vector(d, out);
    double r = std::pow(uniform(), 1.0 / double(d));
    for (int a = 0; a < d; ++a) out[a] *= r;
  }

  // k distinct indices from [0, n), order of draw preserved
  std::vector<int> sample_without_replacement(int n, int k) {
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::vector<int> out;
    out.reserve(k);
    for (int i = 0; i < k && i < n; ++i) {
      int j = i + int(uniform_index(std::uint64_t(n - i)));
      std::swap(idx[i], idx[j]);
      out.push_back(idx[i]);
    }
    return out;
  }

 private:
  std::uint64_t state_;
};

// Stateless per-index uniform in [0,1); used for index-keyed label noise so
// that repeated queries of the same index see the same draw regardless of
// query order.
inline double indexed_uniform(std::uint64_t seed, std::uint64_t index, std::uint64_t slot = 0) {
  std::uint64_t s = mix_seed(mix_seed(seed, index), slot);
  return double(splitmix64(s) >> 11) * 0x1.0p-53;
}

}  // namespace outcode
