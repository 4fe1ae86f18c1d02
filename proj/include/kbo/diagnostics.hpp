#pragma once

#include <span>
#include <utility>
#include <vector>

namespace kbo {

class ParticleEnsemble;

/// Exponent and target of the V_p moment. theory() enforces 1 < p < alpha < 2;
/// the plain constructor accepts any p > 0.
struct MomentParams {
    double p;
    std::vector<double> target;

    static MomentParams theory(double p, double alpha, std::vector<double> target);
};

struct TheoryConstants {
    double b_p_alpha = 0.0;
    double c_p_alpha = 0.0;
    double omega_d = 0.0;
    /// nu p > gamma^alpha B_{p,alpha}
    bool condition_ok = false;
};

/// (1/N) sum_i |x_i - target|^p, Euclidean norm.
double v_p_moment(const ParticleEnsemble& ensemble, std::span<const double> target,
                  double p);
double v_p_moment(const ParticleEnsemble& ensemble, const MomentParams& params);

/// ||consensus - minimizer||_inf <= 0.25.
bool success_check(std::span<const double> consensus,
                   std::span<const double> minimizer);

inline constexpr double kSuccessRadius = 0.25;

/// Fraction of particles within Euclidean distance r of `center`.
double mass_in_ball(const ParticleEnsemble& ensemble, std::span<const double> center,
                    double r);

/// Volume of the unit ball in R^d.
double omega_d(int d);

/// 2^alpha G((d+p)/2) G((alpha-p)/2) / (|G(-p/2)| + G((d+p-alpha)/2)),
/// G = Gamma. Requires 1 < p < alpha < 2 and d >= 1.
double b_p_alpha(int d, double p, double alpha);

/// Same numerator over the product |G(-p/2)| G((d+p-alpha)/2). For
/// comparison only.
double b_p_alpha_product(int d, double p, double alpha);

TheoryConstants c_p_alpha(double nu, double gamma, int d, double p, double alpha);

/// Negated least-squares slope of log V_p against t, after dropping the first
/// floor(burn_in_fraction * n) samples. Needs >= 3 samples, all V_p > 0.
double fit_decay_rate(std::span<const std::pair<double, double>> vp_trajectory,
                      double burn_in_fraction = 0.1);

/// Least-squares slope of y against x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

}  // namespace kbo
