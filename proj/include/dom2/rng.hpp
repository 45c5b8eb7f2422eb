#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <string_view>
#include <vector>

namespace dom2 {

// xoshiro256++ with splitmix64 seeding. Hand-rolled so that every stream is
// bit-reproducible across platforms and serializable into checkpoints
// (std::normal_distribution is implementation-defined, so we cannot use it).
class Rng {
  public:
    Rng() : Rng(0) {}

    explicit Rng(uint64_t seed) {
        uint64_t x = seed;
        for (auto& w : s_) w = splitmix64(x);
        gauss_valid_ = false;
        gauss_cache_ = 0.0;
    }

    // Derives an independent stream from (seed, label, index). Used to give
    // every consumer (minibatch draws, noise, dropout, ...) its own stream so
    // that skipping one consumer does not shift any other.
    static Rng stream(uint64_t seed, std::string_view label, uint64_t index = 0) {
        uint64_t h = 0x9e3779b97f4a7c15ULL ^ seed;
        for (char c : label) {
            h ^= static_cast<uint8_t>(c);
            h *= 0x100000001b3ULL;
        }
        h ^= index + 0x632be59bd9b4e019ULL;
        h = splitmix64(h);
        return Rng(h);
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo,hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased integer in [0,n) (Lemire's method with rejection).
    uint64_t below(uint64_t n) {
        uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto lo = static_cast<uint64_t>(m);
        if (lo < n) {
            const uint64_t t = (0 - n) % n;
            while (lo < t) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * n;
                lo = static_cast<uint64_t>(m);
            }
        }
        return static_cast<uint64_t>(m >> 64);
    }

    // Standard normal via Box-Muller; the spare value is cached (and
    // serialized) so draws stay reproducible across checkpoint resume.
    double gaussian() {
        if (gauss_valid_) {
            gauss_valid_ = false;
            return gauss_cache_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925287 * u2;
        gauss_cache_ = r * std::sin(a);
        gauss_valid_ = true;
        return r * std::cos(a);
    }

    template <class T>
    void fill_gaussian(T* dst, size_t n) {
        for (size_t i = 0; i < n; ++i) dst[i] = static_cast<T>(gaussian());
    }

    template <class T>
    void fill_uniform(T* dst, size_t n, double lo, double hi) {
        for (size_t i = 0; i < n; ++i) dst[i] = static_cast<T>(uniform(lo, hi));
    }

    // Bernoulli(p) as an exact threshold on the raw 64-bit draw.
    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return next_u64() < static_cast<uint64_t>(p * 0x1p64);
    }

    // 41 bytes of state: 4x u64 + cached gaussian + valid flag.
    static constexpr size_t kStateBytes = 4 * 8 + 8 + 1;

    void save_state(std::vector<uint8_t>& out) const {
        size_t off = out.size();
        out.resize(off + kStateBytes);
        std::memcpy(out.data() + off, s_, 32);
        std::memcpy(out.data() + off + 32, &gauss_cache_, 8);
        out[off + 40] = gauss_valid_ ? 1 : 0;
    }

    void load_state(const uint8_t* data) {
        std::memcpy(s_, data, 32);
        std::memcpy(&gauss_cache_, data + 32, 8);
        gauss_valid_ = data[40] != 0;
    }

    static uint64_t splitmix64(uint64_t& x) {
        x += 0x9e3779b97f4a7c15ULL;
        uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Stateless hash of (key, index) into a well-mixed 64-bit value.
    static uint64_t splitmix64_once(uint64_t key, uint64_t index) {
        uint64_t x = key ^ (0x9e3779b97f4a7c15ULL * (index + 1));
        uint64_t a = splitmix64(x);
        return splitmix64(x) ^ a;
    }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t s_[4];
    double gauss_cache_;
    bool gauss_valid_;
};

} // namespace dom2
