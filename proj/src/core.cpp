#include "spade/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace spade {

Bounds::Bounds(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.empty() || lower_.size() != upper_.size())
        throw std::invalid_argument("bounds: lower and upper must be nonempty and of equal length");
    for (std::size_t d = 0; d < lower_.size(); ++d)
        if (!(lower_[d] < upper_[d]))
            throw std::invalid_argument("bounds: lower[" + std::to_string(d) + "] must be < upper");
}

Bounds Bounds::uniform(std::size_t dim, double lo, double hi) {
    return Bounds(Vector(dim, lo), Vector(dim, hi));
}

bool Bounds::contains(std::span<const double> x) const {
    if (x.size() != dimension()) return false;
    for (std::size_t d = 0; d < x.size(); ++d)
        if (x[d] < lower_[d] || x[d] > upper_[d]) return false;
    return true;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) noexcept : seed_(seed), engine_(seed) {}

std::uint64_t Rng::next() noexcept { return engine_(); }

double Rng::uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::size_t Rng::below(std::size_t n) noexcept {
    // Lemire's multiply-shift; the bias for n << 2^64 is negligible here.
    return static_cast<std::size_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
}

double Rng::normal() noexcept {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Rng Rng::split(std::uint64_t stream) const noexcept {
    std::uint64_t sm = seed_ ^ (0xd1b54a32d192ed03ULL * (stream + 1));
    return Rng(splitmix64(sm));
}

Vector clamp_velocity(Vector v, std::span<const double> v_max) {
    for (std::size_t d = 0; d < v.size(); ++d) v[d] = std::clamp(v[d], -v_max[d], v_max[d]);
    return v;
}

Vector reflect_or_clip_position(Vector x, const Bounds& bounds) {
    for (std::size_t d = 0; d < x.size(); ++d)
        x[d] = std::clamp(x[d], bounds.lower()[d], bounds.upper()[d]);
    return x;
}

void clip_particle(Particle& p, const Bounds& bounds) {
    for (std::size_t d = 0; d < p.position.size(); ++d) {
        const double lo = bounds.lower()[d];
        const double hi = bounds.upper()[d];
        if (p.position[d] < lo) {
            p.position[d] = lo;
            p.velocity[d] = 0.0;
        } else if (p.position[d] > hi) {
            p.position[d] = hi;
            p.velocity[d] = 0.0;
        }
    }
}

void evaluate_and_update_pbest(Particle& p, const Objective& obj) {
    const double f = obj.evaluate(p.position);
    if (std::isnan(f)) throw std::runtime_error("objective '" + obj.name + "' returned NaN");
    p.fitness = f;
    if (p.pbest.empty() || f < p.pbest_fitness) {
        p.pbest = p.position;
        p.pbest_fitness = f;
        p.refresh_gap_counter = 0;
    } else {
        ++p.refresh_gap_counter;
    }
}

Vector velocity_limits(const Bounds& bounds, double fraction) {
    Vector v(bounds.dimension());
    for (std::size_t d = 0; d < v.size(); ++d) v[d] = fraction * bounds.range(d);
    return v;
}

Particle random_particle(const Bounds& bounds, std::span<const double> v_max, Rng& rng) {
    Particle p;
    const std::size_t dim = bounds.dimension();
    p.position.resize(dim);
    p.velocity.resize(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        p.position[d] = rng.uniform(bounds.lower()[d], bounds.upper()[d]);
        p.velocity[d] = rng.uniform(-v_max[d], v_max[d]);
    }
    return p;
}

}  // namespace spade
