#pragma once

#include "fairmatch/instance.hpp"
#include "fairmatch/policies.hpp"

namespace fairmatch {

// Symmetric non-adaptive vector on the star graph: edge f_0 carries z0 and
// each of f_1..f_K carries z_rest / K. The z values are rate-scaled, i.e.
// edge j is probed in a given round with probability z_j / T, which is the
// per-arrival sampling probability when the rates are 1 (T = K + 1).
//
// Fairness is normalized to unit rates; at T = K + 1 it coincides with
// min_v E[|M_v|] / r_v of build_star_instance(K, eps).
struct StarValues {
  double profit = 0.0;
  double fairness = 0.0;
  double matches_center = 0.0;  // E[|M_{v0}|]
  double matches_leaf = 0.0;    // E[|M_{vj}|], any j >= 1
};

// Exact finite-T sums. Throws std::invalid_argument unless z0, z_rest >= 0,
// z0 + z_rest <= 1, K >= 1, T >= 1 and eps in (0,1).
StarValues star_curves(double z0, double z_rest, int K, double eps, int T);

// T -> infinity limit of star_curves.
StarValues star_limit(double z0, double z_rest, int K, double eps);

// Benchmarks of the unit-rate star: OPT-P = 1, OPT-F = eps / (K + eps).
double star_opt_p();
double star_opt_f(int K, double eps);

// P / OPT-P + F / OPT-F.
double star_ratio_sum(const StarValues& s, int K, double eps);

// 1 - 1/e + 2 eps.
double star_ratio_cap(double eps);

// The same symmetric policy as a per-arrival vector on `star`, an instance
// from build_star_instance(K, eps, T): s_j = z_j / r_j.
NonAdaptiveVector star_vector(const Instance& star, double z0, double z_rest);

}  // namespace fairmatch
