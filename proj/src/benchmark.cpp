#include "spade/benchmark.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace spade {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double schwefel_optimum = 4.209687462275036e+002;

double elliptic(std::span<const double> z) {
    const std::size_t n = z.size();
    double f = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = n > 1 ? 6.0 * static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
        f += std::pow(10.0, e) * z[i] * z[i];
    }
    return f;
}

double bent_cigar(std::span<const double> z) {
    double f = z[0] * z[0];
    for (std::size_t i = 1; i < z.size(); ++i) f += 1e6 * z[i] * z[i];
    return f;
}

double discus(std::span<const double> z) {
    double f = 1e6 * z[0] * z[0];
    for (std::size_t i = 1; i < z.size(); ++i) f += z[i] * z[i];
    return f;
}

double rosenbrock(std::span<const double> z) {
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < z.size(); ++i) {
        const double a = z[i] * z[i] - z[i + 1];
        const double b = z[i] - 1.0;
        f += 100.0 * a * a + b * b;
    }
    return f;
}

double ackley(std::span<const double> z) {
    const double n = static_cast<double>(z.size());
    double s1 = 0.0;
    double s2 = 0.0;
    for (double v : z) {
        s1 += v * v;
        s2 += std::cos(2.0 * pi * v);
    }
    return std::numbers::e - 20.0 * std::exp(-0.2 * std::sqrt(s1 / n)) - std::exp(s2 / n) + 20.0;
}

double weierstrass(std::span<const double> z) {
    constexpr double a = 0.5;
    constexpr double b = 3.0;
    constexpr int k_max = 20;
    std::array<double, k_max + 1> ak{};
    std::array<double, k_max + 1> bk{};
    double offset = 0.0;
    for (int k = 0; k <= k_max; ++k) {
        ak[k] = std::pow(a, k);
        bk[k] = std::pow(b, k);
        offset += ak[k] * std::cos(2.0 * pi * bk[k] * 0.5);
    }
    double f = 0.0;
    for (double v : z)
        for (int k = 0; k <= k_max; ++k) f += ak[k] * std::cos(2.0 * pi * bk[k] * (v + 0.5));
    return f - static_cast<double>(z.size()) * offset;
}

double griewank(std::span<const double> z) {
    double s = 0.0;
    double p = 1.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        s += z[i] * z[i];
        p *= std::cos(z[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return 1.0 + s / 4000.0 - p;
}

double rastrigin(std::span<const double> z) {
    double f = 0.0;
    for (double v : z) f += v * v - 10.0 * std::cos(2.0 * pi * v) + 10.0;
    return f;
}

// Modified Schwefel with the boundary penalty outside [-500, 500].
double schwefel(std::span<const double> z) {
    const double n = static_cast<double>(z.size());
    double f = 0.0;
    for (double v : z) {
        if (v > 500.0) {
            const double m = 500.0 - std::fmod(v, 500.0);
            f -= m * std::sin(std::sqrt(std::abs(m)));
            f += (v - 500.0) * (v - 500.0) / (10000.0 * n);
        } else if (v < -500.0) {
            const double m = std::fmod(std::abs(v), 500.0) - 500.0;
            f -= m * std::sin(std::sqrt(std::abs(m)));
            f += (v + 500.0) * (v + 500.0) / (10000.0 * n);
        } else {
            f -= v * std::sin(std::sqrt(std::abs(v)));
        }
    }
    return f + 4.189828872724338e+002 * n;
}

double katsuura(std::span<const double> z) {
    const double n = static_cast<double>(z.size());
    const double expo = 10.0 / std::pow(n, 1.2);
    double f = 1.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        double t = 0.0;
        for (int j = 1; j <= 32; ++j) {
            const double p = std::ldexp(1.0, j);
            const double v = p * z[i];
            t += std::abs(v - std::floor(v + 0.5)) / p;
        }
        f *= std::pow(1.0 + static_cast<double>(i + 1) * t, expo);
    }
    return 10.0 / (n * n) * (f - 1.0);
}

double happycat(std::span<const double> z) {
    const double n = static_cast<double>(z.size());
    double r2 = 0.0;
    double s = 0.0;
    for (double v : z) {
        r2 += v * v;
        s += v;
    }
    return std::pow(std::abs(r2 - n), 0.25) + (0.5 * r2 + s) / n + 0.5;
}

double hgbat(std::span<const double> z) {
    const double n = static_cast<double>(z.size());
    double r2 = 0.0;
    double s = 0.0;
    for (double v : z) {
        r2 += v * v;
        s += v;
    }
    return std::sqrt(std::abs(r2 * r2 - s * s)) + (0.5 * r2 + s) / n + 0.5;
}

double griewank_rosenbrock(std::span<const double> z) {
    const std::size_t n = z.size();
    double f = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = z[i];
        const double y = z[(i + 1) % n];
        const double a = x * x - y;
        const double b = x - 1.0;
        const double t = 100.0 * a * a + b * b;
        f += t * t / 4000.0 - std::cos(t) + 1.0;
    }
    return f;
}

double scaffer_f6(std::span<const double> z) {
    const std::size_t n = z.size();
    double f = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r2 = z[i] * z[i] + z[(i + 1) % n] * z[(i + 1) % n];
        const double s = std::sin(std::sqrt(r2));
        const double d = 1.0 + 0.001 * r2;
        f += 0.5 + (s * s - 0.5) / (d * d);
    }
    return f;
}

}  // namespace

std::string to_string(BaseFunction f) {
    switch (f) {
        case BaseFunction::elliptic: return "elliptic";
        case BaseFunction::bent_cigar: return "bent_cigar";
        case BaseFunction::discus: return "discus";
        case BaseFunction::rosenbrock: return "rosenbrock";
        case BaseFunction::ackley: return "ackley";
        case BaseFunction::weierstrass: return "weierstrass";
        case BaseFunction::griewank: return "griewank";
        case BaseFunction::rastrigin: return "rastrigin";
        case BaseFunction::schwefel: return "schwefel";
        case BaseFunction::katsuura: return "katsuura";
        case BaseFunction::happycat: return "happycat";
        case BaseFunction::hgbat: return "hgbat";
        case BaseFunction::griewank_rosenbrock: return "griewank_rosenbrock";
        case BaseFunction::scaffer_f6: return "scaffer_f6";
    }
    return "?";
}

double base_value(BaseFunction f, std::span<const double> z) {
    if (z.empty()) throw std::invalid_argument("base_value: empty point");
    switch (f) {
        case BaseFunction::elliptic: return elliptic(z);
        case BaseFunction::bent_cigar: return bent_cigar(z);
        case BaseFunction::discus: return discus(z);
        case BaseFunction::rosenbrock: return rosenbrock(z);
        case BaseFunction::ackley: return ackley(z);
        case BaseFunction::weierstrass: return weierstrass(z);
        case BaseFunction::griewank: return griewank(z);
        case BaseFunction::rastrigin: return rastrigin(z);
        case BaseFunction::schwefel: return schwefel(z);
        case BaseFunction::katsuura: return katsuura(z);
        case BaseFunction::happycat: return happycat(z);
        case BaseFunction::hgbat: return hgbat(z);
        case BaseFunction::griewank_rosenbrock: return griewank_rosenbrock(z);
        case BaseFunction::scaffer_f6: return scaffer_f6(z);
    }
    throw std::invalid_argument("base_value: unknown function");
}

Vector base_optimum(BaseFunction f, std::size_t dim) {
    switch (f) {
        case BaseFunction::rosenbrock:
        case BaseFunction::griewank_rosenbrock: return Vector(dim, 1.0);
        case BaseFunction::schwefel: return Vector(dim, schwefel_optimum);
        case BaseFunction::happycat:
        case BaseFunction::hgbat: return Vector(dim, -1.0);
        default: return Vector(dim, 0.0);
    }
}

RotationMatrix RotationMatrix::identity(std::size_t dim) {
    RotationMatrix r;
    r.dim = dim;
    r.m.assign(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) r.m[i * dim + i] = 1.0;
    return r;
}

double RotationMatrix::orthogonality_defect() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) {
            double s = 0.0;
            for (std::size_t k = 0; k < dim; ++k) s += (*this)(r, k) * (*this)(c, k);
            worst = std::max(worst, std::abs(s - (r == c ? 1.0 : 0.0)));
        }
    return worst;
}

RotationMatrix random_rotation(std::size_t dim, Rng& rng) {
    Eigen::MatrixXd g(dim, dim);
    for (Eigen::Index r = 0; r < g.rows(); ++r)
        for (Eigen::Index c = 0; c < g.cols(); ++c) g(r, c) = rng.normal();
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(g.rows(), g.cols());
    const Eigen::MatrixXd& packed = qr.matrixQR();
    // Fix column signs so the factorization (and hence the draw) is unique.
    for (Eigen::Index c = 0; c < q.cols(); ++c)
        if (packed(c, c) < 0) q.col(c) *= -1.0;
    RotationMatrix out;
    out.dim = dim;
    out.m.resize(dim * dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c)
            out.m[r * dim + c] = q(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    return out;
}

double eval_benchmark(const TransformedFunction& fn, std::span<const double> x) {
    const std::size_t n = fn.dimension();
    if (x.size() != n) throw std::invalid_argument("eval_benchmark: dimension mismatch");
    Vector y(n);
    for (std::size_t d = 0; d < n; ++d) {
        if (x[d] < fn.lower || x[d] > fn.upper)
            throw std::out_of_range("eval_benchmark: coordinate " + std::to_string(d) + " outside the search range");
        y[d] = fn.scale * (x[d] - fn.shift[d]);
    }
    Vector z(n);
    if (fn.rotation) {
        for (std::size_t r = 0; r < n; ++r) {
            double s = 0.0;
            for (std::size_t c = 0; c < n; ++c) s += (*fn.rotation)(r, c) * y[c];
            z[r] = s;
        }
    } else {
        z = y;
    }
    if (!fn.offset.empty())
        for (std::size_t d = 0; d < n; ++d) z[d] += fn.offset[d];
    return base_value(fn.base, z) + fn.bias;
}

const SuiteEntry& suite_entry(int id) {
    static const std::array<SuiteEntry, 16> suite{{
        {1, BaseFunction::elliptic, true, 1.0},
        {2, BaseFunction::bent_cigar, true, 1.0},
        {3, BaseFunction::discus, true, 1.0},
        {4, BaseFunction::rosenbrock, true, 2.048 / 100.0},
        {5, BaseFunction::ackley, true, 1.0},
        {6, BaseFunction::weierstrass, true, 0.5 / 100.0},
        {7, BaseFunction::griewank, true, 600.0 / 100.0},
        {8, BaseFunction::rastrigin, false, 5.12 / 100.0},
        {9, BaseFunction::rastrigin, true, 5.12 / 100.0},
        {10, BaseFunction::schwefel, false, 1000.0 / 100.0},
        {11, BaseFunction::schwefel, true, 1000.0 / 100.0},
        {12, BaseFunction::katsuura, true, 5.0 / 100.0},
        {13, BaseFunction::happycat, true, 5.0 / 100.0},
        {14, BaseFunction::hgbat, true, 5.0 / 100.0},
        {15, BaseFunction::griewank_rosenbrock, true, 5.0 / 100.0},
        {16, BaseFunction::scaffer_f6, true, 1.0},
    }};
    if (id < 1 || id > 16) throw std::out_of_range("suite function id must be in 1..16");
    return suite[static_cast<std::size_t>(id - 1)];
}

TransformData random_transform(std::size_t dim, Rng& rng) {
    TransformData t;
    t.shift.resize(dim);
    for (double& s : t.shift) s = rng.uniform(-80.0, 80.0);
    t.rotation = random_rotation(dim, rng);
    return t;
}

std::filesystem::path transform_file_name(const std::filesystem::path& dir, int id, std::size_t dim) {
    return dir / ("F" + std::to_string(id) + "_D" + std::to_string(dim) + ".txt");
}

std::optional<TransformData> load_transform(const std::filesystem::path& dir, int id, std::size_t dim) {
    const auto path = transform_file_name(dir, id, dim);
    std::ifstream in(path);
    if (!in) return std::nullopt;
    auto read_row = [&](std::size_t row) {
        std::string line;
        if (!std::getline(in, line))
            throw std::runtime_error(path.string() + ": missing line " + std::to_string(row + 1));
        std::istringstream ls(line);
        Vector values;
        double v = 0.0;
        while (ls >> v) values.push_back(v);
        if (values.size() != dim)
            throw std::runtime_error(path.string() + ": line " + std::to_string(row + 1) + " has " +
                                     std::to_string(values.size()) + " values, expected " + std::to_string(dim));
        return values;
    };
    TransformData t;
    t.shift = read_row(0);
    t.rotation.dim = dim;
    t.rotation.m.reserve(dim * dim);
    for (std::size_t r = 0; r < dim; ++r) {
        const Vector row = read_row(r + 1);
        t.rotation.m.insert(t.rotation.m.end(), row.begin(), row.end());
    }
    return t;
}

void save_transform(const std::filesystem::path& dir, int id, const TransformData& data) {
    const std::size_t dim = data.shift.size();
    std::ofstream out(transform_file_name(dir, id, dim));
    if (!out) throw std::runtime_error("cannot write transform file for F" + std::to_string(id));
    out << std::setprecision(17);
    for (std::size_t d = 0; d < dim; ++d) out << (d ? " " : "") << data.shift[d];
    out << '\n';
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) out << (c ? " " : "") << data.rotation(r, c);
        out << '\n';
    }
}

TransformedFunction make_suite_function(int id, const TransformData& data) {
    const SuiteEntry& e = suite_entry(id);
    TransformedFunction fn;
    fn.base = e.base;
    fn.shift = data.shift;
    if (e.rotated) fn.rotation = data.rotation;
    fn.scale = e.scale;
    fn.offset = base_optimum(e.base, data.shift.size());
    fn.bias = 100.0 * id;
    return fn;
}

Objective make_benchmark_objective(TransformedFunction fn, std::string name) {
    const std::size_t dim = fn.dimension();
    Objective obj{std::move(name), Bounds::uniform(dim, fn.lower, fn.upper), {}, fn.bias};
    obj.evaluate = [fn = std::move(fn)](std::span<const double> x) { return eval_benchmark(fn, x); };
    return obj;
}

}  // namespace spade
