#pragma once

#include "spade/core.hpp"

#include <array>
#include <cmath>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace spade {

enum class Var { T = 0, I = 1, V = 2 };

char to_char(Var v);

inline constexpr int structure_count = 192;

/// Structure of dx_i/dt = s1 k1 x_i + s2 k2 x_a + s3 k3 x_b x_c + s4 k4.
struct EquationStructure {
    std::array<int, 4> signs{1, 1, 1, 1};  ///< +1 or -1.
    Var a = Var::I;
    Var b = Var::T;
    Var c = Var::T;

    bool operator==(const EquationStructure&) const = default;
};

/// Serial 1..192 of equation `eq` (0 = T, 1 = I, 2 = V).
///
/// The unordered pair (b, c) varies fastest over TT, TI, TV, II, IV, VV; then
/// x_a over the two variables other than x_eq; then the sign pattern as a
/// 4-bit counter with '+' = 0 and s4 the least significant bit.
EquationStructure decode_structure(int serial, int eq);
int encode_structure(const EquationStructure& s, int eq);

using State = std::array<double, 3>;

struct OdeGenome {
    std::array<std::array<double, 4>, 3> k{};  ///< k1..k4 per equation.
    std::array<int, 3> serial{1, 1, 1};
};

/// The generating model: dT = 80 - 0.15 T - 2e-5 T V, dI = 2e-5 T V - 0.55 I,
/// dV = 495 I - 0.55 V - 2e-5 T V.
OdeGenome true_hiv_genome();

/// Decoded right-hand side of a genome.
class GenomeRhs {
public:
    explicit GenomeRhs(const OdeGenome& genome);
    State operator()(const State& x) const noexcept;

private:
    std::array<std::array<double, 4>, 3> coef_{};  ///< Signs folded into k.
    std::array<EquationStructure, 3> structure_{};
};

GenomeRhs genome_rhs(const OdeGenome& genome);

template <std::size_t N>
struct BasicTrajectory {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<std::array<double, N>> states;
    bool divergent = false;
    std::size_t completed_steps = 0;

    double time(std::size_t k) const noexcept { return t0 + static_cast<double>(k) * dt; }
};

using Trajectory = BasicTrajectory<3>;

/// Fixed-step classical RK4 producing `points` states starting at `init`.
/// A non-finite state stops integration and marks the result divergent.
template <std::size_t N, class F>
BasicTrajectory<N> integrate(const F& rhs, const std::array<double, N>& init, double t0, double dt,
                             std::size_t points) {
    if (!(dt > 0.0)) throw std::invalid_argument("integrate: step size must be positive");
    BasicTrajectory<N> traj;
    traj.t0 = t0;
    traj.dt = dt;
    traj.states.reserve(points);
    if (points == 0) return traj;
    traj.states.push_back(init);
    std::array<double, N> x = init;
    const auto axpy = [](const std::array<double, N>& base, double h, const std::array<double, N>& d) {
        std::array<double, N> out;
        for (std::size_t i = 0; i < N; ++i) out[i] = base[i] + h * d[i];
        return out;
    };
    for (std::size_t step = 1; step < points; ++step) {
        const auto k1 = rhs(x);
        const auto k2 = rhs(axpy(x, 0.5 * dt, k1));
        const auto k3 = rhs(axpy(x, 0.5 * dt, k2));
        const auto k4 = rhs(axpy(x, dt, k3));
        bool finite = true;
        for (std::size_t i = 0; i < N; ++i) {
            x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            finite = finite && std::isfinite(x[i]);
        }
        if (!finite) {
            traj.divergent = true;
            return traj;
        }
        traj.states.push_back(x);
        traj.completed_steps = step;
    }
    return traj;
}

/// Target-data protocol.
struct OdeProtocol {
    double t0 = 0.0;
    double dt = 0.1;
    std::size_t points = 100;
    State init{100.0, 150.0, 50000.0};
    double k_lower = 0.0;
    double k_upper = 1000.0;
};

inline constexpr double divergence_penalty = 1e12;

Trajectory integrate_genome(const OdeGenome& genome, const OdeProtocol& protocol);

/// Sum of squared differences over every variable and time point. A divergent
/// candidate scores 1e12 minus its completed step count.
double ode_objective(const OdeGenome& genome, const Trajectory& target, const OdeProtocol& protocol);

/// x[0..11] are k1..k4 of equations T, I, V; x[12..14] are structure
/// coordinates, rounded to the nearest integer and clamped into 1..192.
OdeGenome encode_search_point(std::span<const double> x);

/// Nearest serial for one structure coordinate.
int structure_serial(double coordinate);

/// Full structure + parameter inference ("ode", 15-D). The target is computed
/// once and shared by every copy of the returned objective.
Objective make_ode_objective(const OdeProtocol& protocol = {});

/// Parameter-only inference with the true structure frozen ("ode-params", 12-D).
Objective make_ode_params_objective(const OdeProtocol& protocol = {});

/// CSV with header `t,T,I,V`.
void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);

}  // namespace spade
