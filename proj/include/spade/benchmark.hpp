#pragma once

#include "spade/core.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace spade {

/// Base landscapes of the shifted/rotated simple-multimodal suite.
enum class BaseFunction {
    elliptic,
    bent_cigar,
    discus,
    rosenbrock,
    ackley,
    weierstrass,
    griewank,
    rastrigin,
    schwefel,
    katsuura,
    happycat,
    hgbat,
    griewank_rosenbrock,
    scaffer_f6,
};

std::string to_string(BaseFunction f);

/// Untransformed value of the base function at z.
double base_value(BaseFunction f, std::span<const double> z);

/// Location of the base function's global minimum in its own coordinates.
Vector base_optimum(BaseFunction f, std::size_t dim);

/// Row-major D x D matrix.
struct RotationMatrix {
    std::size_t dim = 0;
    std::vector<double> m;

    double operator()(std::size_t r, std::size_t c) const { return m[r * dim + c]; }
    static RotationMatrix identity(std::size_t dim);
    /// Largest |(M M^T - I)_rc|.
    double orthogonality_defect() const;
};

/// Random orthogonal matrix from the QR factorization of a Gaussian matrix.
RotationMatrix random_rotation(std::size_t dim, Rng& rng);

/// f(x) = base(M (scale (x - shift)) + offset) + bias.
///
/// `offset` moves the base optimum onto x = shift, so f(shift) = bias up to
/// the base function's own value at its optimum.
struct TransformedFunction {
    BaseFunction base = BaseFunction::rastrigin;
    Vector shift;
    std::optional<RotationMatrix> rotation;
    double scale = 1.0;
    Vector offset;
    double bias = 0.0;
    double lower = -100.0;
    double upper = 100.0;

    std::size_t dimension() const noexcept { return shift.size(); }
};

/// Evaluate; throws std::out_of_range outside [lower, upper]^D.
double eval_benchmark(const TransformedFunction& fn, std::span<const double> x);

/// Per-function layout of the simple suite (F1..F16).
struct SuiteEntry {
    int id = 0;
    BaseFunction base = BaseFunction::rastrigin;
    bool rotated = true;
    double scale = 1.0;
};

const SuiteEntry& suite_entry(int id);

/// Shift and rotation of one suite function for one dimension.
struct TransformData {
    Vector shift;
    RotationMatrix rotation;
};

/// Shift uniform in [-80, 80]^D and a random orthogonal rotation.
TransformData random_transform(std::size_t dim, Rng& rng);

/// Reads `<dir>/F<id>_D<dim>.txt`: one line of D shift values, then D lines of D
/// rotation entries. Returns nullopt if the file does not exist.
std::optional<TransformData> load_transform(const std::filesystem::path& dir, int id, std::size_t dim);
void save_transform(const std::filesystem::path& dir, int id, const TransformData& data);
std::filesystem::path transform_file_name(const std::filesystem::path& dir, int id, std::size_t dim);

/// Suite function `id` with the given transform (rotation dropped for the
/// unrotated entries). Bias is 100 * id.
TransformedFunction make_suite_function(int id, const TransformData& data);

Objective make_benchmark_objective(TransformedFunction fn, std::string name);

}  // namespace spade
