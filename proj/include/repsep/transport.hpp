#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "repsep/data_model.hpp"

namespace repsep {

/// A vertex of the transportation polytope with uniform marginals: every
/// row of `plan` sums to 1/Ni, every column to 1/Nj.
struct TransportPlan {
  Matrix plan;
  double cost = 0.0;
};

/// Exact minimizer of sum_ij plan_ij * cost_ij over the uniform-marginal
/// transportation polytope, via primal network simplex on the bipartite
/// graph. The returned plan is basic: at most Ni + Nj - 1 nonzeros.
TransportPlan solve_transport(const Matrix& cost);

/// Exhaustive oracle for tiny instances (Ni * Nj <= 30): all permutations
/// when square, otherwise every basis (spanning tree of K_{Ni,Nj}).
TransportPlan brute_force_transport(const Matrix& cost);

inline constexpr std::size_t kBruteForceCellLimit = 30;

namespace detail {

struct BasicCell {
  Eigen::Index row;
  Eigen::Index col;
};

/// Solver output plus the optimality certificate from the final basis.
struct CertifiedTransport {
  TransportPlan result;
  Vector row_potential;
  Vector col_potential;
  std::vector<BasicCell> basis;
  std::size_t pivots = 0;
  std::size_t degenerate_pivots = 0;
  bool used_bland = false;
};

CertifiedTransport solve_transport_certified(const Matrix& cost);

}  // namespace detail
}  // namespace repsep
