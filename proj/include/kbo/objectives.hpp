#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace kbo {

/// Axis-aligned box [lo_k, hi_k] per coordinate.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    static Box cube(double lo, double hi, std::size_t dim);

    std::size_t dim() const noexcept { return lo.size(); }
    /// Throws unless lo < hi in every coordinate.
    void check() const;
    bool contains(std::span<const double> x) const;
};

/// Benchmark objective with a known global minimizer.
struct Objective {
    std::string name;
    std::size_t dim = 0;
    std::function<double(std::span<const double>)> eval;
    std::vector<double> minimizer;
    Box init_box;
    bool differentiable = true;
    /// False for members added as plumbing rather than taken from the
    /// benchmark protocol.
    bool from_protocol = true;
};

/// 10 + sum_k (x_k^2 - 10 cos(2 pi x_k)). The offset is a single 10 (not
/// 10 d), so the minimum value is 10 (1 - d).
double rastrigin(std::span<const double> x);
/// Conventional 10 d + sum_k (x_k^2 - 10 cos(2 pi x_k)).
double rastrigin_std(std::span<const double> x);
/// sum_k (|x_k sin x_k| + 0.2 |x_k|).
double modified_alpine(std::span<const double> x);
/// sum_{k<d} 100 (x_{k+1} - x_k^2)^2 + (1 - x_k)^2.
double rosenbrock(std::span<const double> x);
double sphere(std::span<const double> x);
double l1_norm(std::span<const double> x);
double ackley(std::span<const double> x);

/// Lower corner and upper corner of the default experiment box; it excludes
/// the minimizer of every registered objective.
inline constexpr double kDefaultInitLo = -5.12;
inline constexpr double kDefaultInitHi = -2.0;

/// Builds a registered objective. Throws std::invalid_argument on an unknown
/// name or dim == 0.
Objective make_objective(const std::string& name, std::size_t dim);

/// Names accepted by make_objective, in registration order.
std::vector<std::string> objective_names();

/// x -> obj(x - shift), with minimizer and init box moved by `shift`.
Objective translate(const Objective& obj, std::span<const double> shift);

/// Dispatch with a dimension check.
double eval_objective(const Objective& obj, std::span<const double> x);

}  // namespace kbo
