#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spade {

using Vector = std::vector<double>;

/// Box constraints of a search space.
class Bounds {
public:
    Bounds(Vector lower, Vector upper);

    /// The same interval [lo, hi] on every one of `dim` axes.
    static Bounds uniform(std::size_t dim, double lo, double hi);

    std::size_t dimension() const noexcept { return lower_.size(); }
    const Vector& lower() const noexcept { return lower_; }
    const Vector& upper() const noexcept { return upper_; }
    double range(std::size_t d) const { return upper_[d] - lower_[d]; }
    bool contains(std::span<const double> x) const;

private:
    Vector lower_;
    Vector upper_;
};

/// One swarm member. Minimization: lower fitness is better.
struct Particle {
    Vector position;
    Vector velocity;
    Vector pbest;
    double pbest_fitness = std::numeric_limits<double>::infinity();
    double fitness = std::numeric_limits<double>::infinity();
    std::size_t refresh_gap_counter = 0;
};

/// An evaluatable minimization problem.
struct Objective {
    std::string name;
    Bounds bounds;
    std::function<double(std::span<const double>)> evaluate;
    std::optional<double> known_optimum;

    std::size_t dimension() const noexcept { return bounds.dimension(); }

    /// Distance to the known optimum, or the raw fitness when none is known.
    double error(double fitness) const { return known_optimum ? fitness - *known_optimum : fitness; }
};

/// Anything that yields uniform draws in [0, 1) and uniform indices in [0, n).
template <class R>
concept UniformSource = requires(R& r, std::size_t n) {
    { r.uniform() } -> std::convertible_to<double>;
    { r.below(n) } -> std::convertible_to<std::size_t>;
};

/// Seeded random stream over std::mt19937_64.
///
/// Real and integer draws are derived from raw engine output, not from the
/// std distributions, so a seed reproduces a run on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) noexcept;

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next() noexcept;
    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform() noexcept;
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n); n must be positive.
    std::size_t below(std::size_t n) noexcept;
    /// Standard normal draw (Box-Muller, no cached spare).
    double normal() noexcept;

    /// Independent stream for a sub-task, derived from this stream's seed.
    Rng split(std::uint64_t stream) const noexcept;

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

static_assert(UniformSource<Rng>);

/// Componentwise clip of a velocity into [-v_max[d], v_max[d]].
Vector clamp_velocity(Vector v, std::span<const double> v_max);

/// Clip a position into the box. Interior points are unchanged.
Vector reflect_or_clip_position(Vector x, const Bounds& bounds);

/// Clip `p.position` into the box and zero the velocity of every clipped axis.
void clip_particle(Particle& p, const Bounds& bounds);

/// Evaluate the current position and refresh the personal best.
///
/// The refresh gap counter is reset on improvement and incremented otherwise.
/// Throws std::runtime_error naming the objective if it returns NaN.
void evaluate_and_update_pbest(Particle& p, const Objective& obj);

/// Half-width of the velocity box: `fraction` of each axis' range.
Vector velocity_limits(const Bounds& bounds, double fraction = 0.1);

/// Uniform position in the box and uniform velocity in [-v_max, v_max].
Particle random_particle(const Bounds& bounds, std::span<const double> v_max, Rng& rng);

}  // namespace spade
