#pragma once

#include <utility>

#include "polyel/config.hpp"
#include "polyel/model.hpp"

namespace polyel {

/// Minimizes max_a phi(x; a) through the smoothed surrogate
/// mu log sum_a exp(phi_mu(x; a) / mu) with mu-continuation. The reported
/// radius is always the exact objective at the returned translation.
Solution solve_direct(const Instance& inst, const SolverConfig& cfg = {});

/// Euclidean projection onto the probability simplex (sort-and-threshold).
Vec project_simplex(const Vec& v);

/// Projected gradient ascent on the Lagrangean dual over the demand simplex;
/// every gradient evaluation is a Weber solve over the difference points
/// {a - u} with weights {alpha_a w_u}. After the global ascent phase the
/// near-active face is polished until the primal-dual gap closes.
/// The certificate's dual values are certified lower bounds (Weber value
/// minus the inner tolerance), so weak duality holds for every record.
std::pair<Solution, DualCertificate> solve_lagrangean(const Instance& inst,
                                                      const SolverConfig& cfg = {});

}  // namespace polyel
