#include "flowline/des.hpp"

#include <cmath>

namespace flowline {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
    return splitmix64(splitmix64(seed) ^ fnv1a(label));
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    return splitmix64(splitmix64(seed) ^ splitmix64(salt + 0x632be59bd9b4e019ULL));
}

RandomStream::RandomStream(std::uint64_t seed, std::string_view stream_id)
    : engine_(derive_seed(seed, stream_id)) {}

double RandomStream::uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

double RandomStream::uniform(double low, double high) {
    return std::uniform_real_distribution<double>(low, high)(engine_);
}

double RandomStream::exponential(double mean) {
    if (mean <= 0.0) return 0.0;
    return std::exponential_distribution<double>(1.0 / mean)(engine_);
}

std::size_t RandomStream::index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

SimTime sample_time(const Distribution& dist, RandomStream& stream) {
    return dist.minimum + stream.exponential(dist.exp_mean);
}

double performance_coefficient(int workers, double c) {
    return std::exp(-c * workers);
}

SimTime sample_worker_time(double minimum, double relative_spread, int workers, double c, RandomStream& stream) {
    return minimum * performance_coefficient(workers, c) + stream.exponential(relative_spread * minimum);
}

}  // namespace flowline
