#include "kbo/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kbo {

Box Box::cube(double lo, double hi, std::size_t dim)
{
    return Box{std::vector<double>(dim, lo), std::vector<double>(dim, hi)};
}

void Box::check() const
{
    if (lo.empty() || lo.size() != hi.size()) {
        throw std::invalid_argument("box: empty or mismatched bounds");
    }
    for (std::size_t k = 0; k < lo.size(); ++k) {
        if (!(lo[k] < hi[k]) || !std::isfinite(lo[k]) || !std::isfinite(hi[k])) {
            throw std::invalid_argument("box: degenerate in coordinate "
                                        + std::to_string(k));
        }
    }
}

bool Box::contains(std::span<const double> x) const
{
    if (x.size() != lo.size()) {
        return false;
    }
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k] < lo[k] || x[k] > hi[k]) {
            return false;
        }
    }
    return true;
}

double rastrigin(std::span<const double> x)
{
    double sum = 10.0;
    for (double xk : x) {
        sum += xk * xk - 10.0 * std::cos(2.0 * std::numbers::pi * xk);
    }
    return sum;
}

double rastrigin_std(std::span<const double> x)
{
    double sum = 10.0 * static_cast<double>(x.size());
    for (double xk : x) {
        sum += xk * xk - 10.0 * std::cos(2.0 * std::numbers::pi * xk);
    }
    return sum;
}

double modified_alpine(std::span<const double> x)
{
    double sum = 0.0;
    for (double xk : x) {
        sum += std::abs(xk * std::sin(xk)) + 0.2 * std::abs(xk);
    }
    return sum;
}

double rosenbrock(std::span<const double> x)
{
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < x.size(); ++k) {
        double const a = x[k + 1] - x[k] * x[k];
        double const b = 1.0 - x[k];
        sum += 100.0 * a * a + b * b;
    }
    return sum;
}

double sphere(std::span<const double> x)
{
    double sum = 0.0;
    for (double xk : x) {
        sum += xk * xk;
    }
    return sum;
}

double l1_norm(std::span<const double> x)
{
    double sum = 0.0;
    for (double xk : x) {
        sum += std::abs(xk);
    }
    return sum;
}

double ackley(std::span<const double> x)
{
    if (x.empty()) {
        return 0.0;
    }
    double sq = 0.0;
    double cs = 0.0;
    for (double xk : x) {
        sq += xk * xk;
        cs += std::cos(2.0 * std::numbers::pi * xk);
    }
    auto const n = static_cast<double>(x.size());
    return -20.0 * std::exp(-0.2 * std::sqrt(sq / n)) - std::exp(cs / n) + 20.0
           + std::numbers::e;
}

namespace {

struct Entry {
    const char* name;
    double (*fn)(std::span<const double>);
    double minimizer;
    bool differentiable;
    bool from_protocol;
};

// clang-format off
constexpr Entry kRegistry[] = {
    {"rastrigin",       &rastrigin,       0.0, true,  true},
    {"rastrigin_std",   &rastrigin_std,   0.0, true,  false},
    {"modified_alpine", &modified_alpine, 0.0, false, true},
    {"rosenbrock",      &rosenbrock,      1.0, true,  true},
    {"ackley",          &ackley,          0.0, true,  false},
    {"sphere",          &sphere,          0.0, true,  false},
    {"l1_norm",         &l1_norm,         0.0, false, false},
};
// clang-format on

}  // namespace

Objective make_objective(const std::string& name, std::size_t dim)
{
    if (dim == 0) {
        throw std::invalid_argument("objective '" + name + "': dim must be >= 1");
    }
    auto const it = std::find_if(std::begin(kRegistry), std::end(kRegistry),
                                 [&](const Entry& e) { return name == e.name; });
    if (it == std::end(kRegistry)) {
        throw std::invalid_argument("unknown objective '" + name + "'");
    }
    Objective obj;
    obj.name = name;
    obj.dim = dim;
    obj.eval = it->fn;
    obj.minimizer.assign(dim, it->minimizer);
    obj.init_box = Box::cube(kDefaultInitLo, kDefaultInitHi, dim);
    obj.differentiable = it->differentiable;
    obj.from_protocol = it->from_protocol;
    return obj;
}

std::vector<std::string> objective_names()
{
    std::vector<std::string> names;
    for (const Entry& e : kRegistry) {
        names.emplace_back(e.name);
    }
    return names;
}

Objective translate(const Objective& obj, std::span<const double> shift)
{
    if (shift.size() != obj.dim) {
        throw std::invalid_argument("translate: shift has wrong dimension");
    }
    Objective moved = obj;
    std::vector<double> a(shift.begin(), shift.end());
    moved.eval = [inner = obj.eval, a](std::span<const double> x) {
        std::vector<double> y(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) {
            y[k] = x[k] - a[k];
        }
        return inner(y);
    };
    for (std::size_t k = 0; k < obj.dim; ++k) {
        moved.minimizer[k] += a[k];
        moved.init_box.lo[k] += a[k];
        moved.init_box.hi[k] += a[k];
    }
    return moved;
}

double eval_objective(const Objective& obj, std::span<const double> x)
{
    if (x.size() != obj.dim) {
        throw std::invalid_argument("objective '" + obj.name + "': expected "
                                    + std::to_string(obj.dim) + " coordinates, got "
                                    + std::to_string(x.size()));
    }
    return obj.eval(x);
}

}  // namespace kbo
