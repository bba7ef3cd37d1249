#include "spade/ode.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace spade {

namespace {

constexpr std::array<std::array<Var, 2>, 6> pairs{{
    {Var::T, Var::T},
    {Var::T, Var::I},
    {Var::T, Var::V},
    {Var::I, Var::I},
    {Var::I, Var::V},
    {Var::V, Var::V},
}};

std::array<Var, 2> others(int eq) {
    switch (eq) {
        case 0: return {Var::I, Var::V};
        case 1: return {Var::T, Var::V};
        case 2: return {Var::T, Var::I};
    }
    throw std::out_of_range("equation index must be 0, 1 or 2");
}

std::size_t idx(Var v) { return static_cast<std::size_t>(v); }

}  // namespace

char to_char(Var v) {
    switch (v) {
        case Var::T: return 'T';
        case Var::I: return 'I';
        case Var::V: return 'V';
    }
    return '?';
}

EquationStructure decode_structure(int serial, int eq) {
    if (serial < 1 || serial > structure_count)
        throw std::out_of_range("structure serial " + std::to_string(serial) + " outside 1..192");
    const auto candidates = others(eq);
    const int i = serial - 1;
    EquationStructure s;
    s.b = pairs[static_cast<std::size_t>(i % 6)][0];
    s.c = pairs[static_cast<std::size_t>(i % 6)][1];
    s.a = candidates[static_cast<std::size_t>((i / 6) % 2)];
    const int bits = i / 12;
    for (int j = 0; j < 4; ++j) s.signs[static_cast<std::size_t>(j)] = (bits >> (3 - j)) & 1 ? -1 : 1;
    return s;
}

int encode_structure(const EquationStructure& s, int eq) {
    const auto candidates = others(eq);
    const auto a_it = std::find(candidates.begin(), candidates.end(), s.a);
    if (a_it == candidates.end()) throw std::invalid_argument("x_a must differ from the equation's own variable");
    const Var lo = std::min(s.b, s.c);
    const Var hi = std::max(s.b, s.c);
    const auto p_it = std::find(pairs.begin(), pairs.end(), std::array<Var, 2>{lo, hi});
    int bits = 0;
    for (int sign : s.signs) {
        if (sign != 1 && sign != -1) throw std::invalid_argument("signs must be +1 or -1");
        bits = bits * 2 + (sign < 0 ? 1 : 0);
    }
    return 1 + static_cast<int>(p_it - pairs.begin()) + 6 * static_cast<int>(a_it - candidates.begin()) + 12 * bits;
}

OdeGenome true_hiv_genome() {
    OdeGenome g;
    g.k[0] = {0.15, 0.0, 0.00002, 80.0};
    g.k[1] = {0.55, 0.0, 0.00002, 0.0};
    g.k[2] = {0.55, 900.0 * 0.55, 0.00002, 0.0};
    g.serial[0] = encode_structure({{-1, 1, -1, 1}, Var::I, Var::T, Var::V}, 0);
    g.serial[1] = encode_structure({{-1, 1, 1, 1}, Var::T, Var::T, Var::V}, 1);
    g.serial[2] = encode_structure({{-1, 1, -1, 1}, Var::I, Var::T, Var::V}, 2);
    return g;
}

GenomeRhs::GenomeRhs(const OdeGenome& genome) {
    for (std::size_t e = 0; e < 3; ++e) {
        structure_[e] = decode_structure(genome.serial[e], static_cast<int>(e));
        for (std::size_t j = 0; j < 4; ++j) coef_[e][j] = structure_[e].signs[j] * genome.k[e][j];
    }
}

State GenomeRhs::operator()(const State& x) const noexcept {
    State dx;
    for (std::size_t e = 0; e < 3; ++e) {
        const auto& s = structure_[e];
        const auto& k = coef_[e];
        dx[e] = k[0] * x[e] + k[1] * x[idx(s.a)] + k[2] * x[idx(s.b)] * x[idx(s.c)] + k[3];
    }
    return dx;
}

GenomeRhs genome_rhs(const OdeGenome& genome) { return GenomeRhs(genome); }

Trajectory integrate_genome(const OdeGenome& genome, const OdeProtocol& protocol) {
    return integrate(GenomeRhs(genome), protocol.init, protocol.t0, protocol.dt, protocol.points);
}

double ode_objective(const OdeGenome& genome, const Trajectory& target, const OdeProtocol& protocol) {
    const Trajectory traj = integrate_genome(genome, protocol);
    if (traj.divergent) return divergence_penalty - static_cast<double>(traj.completed_steps);
    const std::size_t rows = std::min(traj.states.size(), target.states.size());
    double sse = 0.0;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t v = 0; v < 3; ++v) {
            const double d = traj.states[r][v] - target.states[r][v];
            sse += d * d;
        }
    // A finite but astronomically wrong candidate still ranks below any divergent one.
    return std::isfinite(sse) ? std::min(sse, divergence_penalty - static_cast<double>(protocol.points)) :
                                divergence_penalty - static_cast<double>(protocol.points);
}

int structure_serial(double coordinate) {
    const double r = std::round(coordinate);
    if (!(r >= 1.0)) return 1;
    if (r >= structure_count) return structure_count;
    return static_cast<int>(r);
}

OdeGenome encode_search_point(std::span<const double> x) {
    if (x.size() != 15) throw std::invalid_argument("ODE search point must have 15 coordinates");
    OdeGenome g;
    for (std::size_t e = 0; e < 3; ++e)
        for (std::size_t j = 0; j < 4; ++j) g.k[e][j] = x[4 * e + j];
    for (std::size_t e = 0; e < 3; ++e) g.serial[e] = structure_serial(x[12 + e]);
    return g;
}

Objective make_ode_objective(const OdeProtocol& protocol) {
    auto target = std::make_shared<const Trajectory>(integrate_genome(true_hiv_genome(), protocol));
    Vector lo(15, protocol.k_lower);
    Vector hi(15, protocol.k_upper);
    for (std::size_t e = 12; e < 15; ++e) {
        lo[e] = 1.0;
        hi[e] = structure_count;
    }
    return Objective{"ode", Bounds(std::move(lo), std::move(hi)),
                     [target, protocol](std::span<const double> x) {
                         return ode_objective(encode_search_point(x), *target, protocol);
                     },
                     0.0};
}

Objective make_ode_params_objective(const OdeProtocol& protocol) {
    auto target = std::make_shared<const Trajectory>(integrate_genome(true_hiv_genome(), protocol));
    const auto serials = true_hiv_genome().serial;
    return Objective{"ode-params", Bounds::uniform(12, protocol.k_lower, protocol.k_upper),
                     [target, protocol, serials](std::span<const double> x) {
                         OdeGenome g;
                         for (std::size_t e = 0; e < 3; ++e)
                             for (std::size_t j = 0; j < 4; ++j) g.k[e][j] = x[4 * e + j];
                         g.serial = serials;
                         return ode_objective(g, *target, protocol);
                     },
                     0.0};
}

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "t,T,I,V\n" << std::setprecision(17);
    for (std::size_t k = 0; k < traj.states.size(); ++k)
        out << traj.time(k) << ',' << traj.states[k][0] << ',' << traj.states[k][1] << ',' << traj.states[k][2] << '\n';
}

}  // namespace spade
