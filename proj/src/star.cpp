#include "fairmatch/star.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fairmatch {

namespace {

void check_params(double z0, double z_rest, int K, double eps) {
  if (z0 < 0.0 || z_rest < 0.0 || z0 + z_rest > 1.0 + 1e-12)
    throw std::invalid_argument("star: need z0, z_rest >= 0 and z0 + z_rest <= 1");
  if (K < 1) throw std::invalid_argument("star: K must be >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("star: eps must be in (0,1)");
}

// Expected number of probes-while-available per unit of z:
// sum_{t=1}^T (1/T) (1 - z/T)^(t-1), or its limit (1 - e^-z)/z.
StarValues assemble(double z0, double z_rest, int K, double eps, double survival) {
  StarValues s;
  s.matches_center = z0 * survival;
  s.matches_leaf = z_rest / K * eps * survival;
  s.profit = s.matches_center + K * s.matches_leaf;
  s.fairness = std::min(s.matches_center, s.matches_leaf);
  return s;
}

}  // namespace

StarValues star_curves(double z0, double z_rest, int K, double eps, int T) {
  check_params(z0, z_rest, K, eps);
  if (T < 1) throw std::invalid_argument("star: T must be >= 1");
  const double z = z0 + z_rest;
  const double survival = z == 0.0 ? 1.0 : -std::expm1(T * std::log1p(-z / T)) / z;
  return assemble(z0, z_rest, K, eps, survival);
}

StarValues star_limit(double z0, double z_rest, int K, double eps) {
  check_params(z0, z_rest, K, eps);
  const double z = z0 + z_rest;
  const double survival = z == 0.0 ? 1.0 : -std::expm1(-z) / z;
  return assemble(z0, z_rest, K, eps, survival);
}

double star_opt_p() { return 1.0; }

double star_opt_f(int K, double eps) { return eps / (K + eps); }

double star_ratio_sum(const StarValues& s, int K, double eps) {
  return s.profit / star_opt_p() + s.fairness / star_opt_f(K, eps);
}

double star_ratio_cap(double eps) { return 1.0 - std::exp(-1.0) + 2.0 * eps; }

NonAdaptiveVector star_vector(const Instance& star, double z0, double z_rest) {
  const std::size_t K = star.num_request_types() - 1;
  if (star.num_drivers() != 1 || K < 1 || star.num_edges() != K + 1)
    throw std::invalid_argument("star_vector: not a star instance");
  std::vector<double> z(star.num_edges(), 0.0);
  for (EdgeId f = 0; f < star.num_edges(); ++f) {
    const RequestIndex v = star.edge(f).request_type;
    const double rate_scaled = v == 0 ? z0 : z_rest / static_cast<double>(K);
    z[f] = rate_scaled / star.request_type(v).rate;
  }
  return NonAdaptiveVector(star, std::move(z));
}

}  // namespace fairmatch
