#include "repsep/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace repsep {
namespace {

void check_cost(const Matrix& cost, const char* who) {
  if (cost.rows() < 1 || cost.cols() < 1) throw Error(std::string(who) + ": zero-sized cost matrix");
  if (!cost.allFinite()) throw Error(std::string(who) + ": non-finite cost entry");
}

// Flows are integers in units of 1 / (m * n * scale). Row i supplies
// n * scale + 1, column j demands m * scale, and the last column absorbs the
// m extra units. No proper subset of rows can then exactly meet a subset of
// columns, so every basis is nondegenerate; rounding flow / scale recovers
// the unperturbed vertex because perturbation terms never exceed m < scale / 2.
class NetworkSimplex {
 public:
  explicit NetworkSimplex(const Matrix& cost)
      : cost_(cost), m_(cost.rows()), n_(cost.cols()), scale_(2 * m_ + 2) {
    const double max_abs = cost_.cwiseAbs().maxCoeff();
    tolerance_ = 1e-11 * std::max(1.0, max_abs);
    in_basis_.assign(static_cast<std::size_t>(m_ * n_), -1);
  }

  detail::CertifiedTransport solve() {
    northwest_corner();
    const std::size_t bland_after = static_cast<std::size_t>(m_ * n_);
    const std::size_t max_pivots = 1000 + 50 * static_cast<std::size_t>(m_ * n_) * static_cast<std::size_t>(m_ + n_);
    std::size_t streak = 0;
    bool bland = false;
    detail::CertifiedTransport out;

    while (true) {
      compute_potentials();
      const auto entering = bland ? price_first() : price_most_negative();
      if (entering < 0) break;
      if (out.pivots >= max_pivots) throw Error("solve_transport: pivot limit exceeded");
      const std::int64_t theta = pivot(entering);
      ++out.pivots;
      if (theta == 0) {
        ++out.degenerate_pivots;
        if (++streak >= bland_after) bland = true;
      } else {
        streak = 0;
      }
    }
    out.used_bland = bland;
    extract(out);
    return out;
  }

 private:
  struct Arc {
    Eigen::Index row;
    Eigen::Index col;
    std::int64_t flow;
  };

  Eigen::Index node_of_col(Eigen::Index c) const { return m_ + c; }
  std::size_t cell_index(Eigen::Index r, Eigen::Index c) const { return static_cast<std::size_t>(r * n_ + c); }

  void add_arc(Eigen::Index r, Eigen::Index c, std::int64_t flow) {
    in_basis_[cell_index(r, c)] = static_cast<int>(arcs_.size());
    arcs_.push_back({r, c, flow});
  }

  void northwest_corner() {
    std::vector<std::int64_t> supply(static_cast<std::size_t>(m_), n_ * scale_ + 1);
    std::vector<std::int64_t> demand(static_cast<std::size_t>(n_), m_ * scale_);
    demand.back() += m_;
    Eigen::Index i = 0, j = 0;
    while (j < n_) {
      auto& s = supply[static_cast<std::size_t>(i)];
      auto& d = demand[static_cast<std::size_t>(j)];
      const std::int64_t amount = std::min(s, d);
      add_arc(i, j, amount);
      s -= amount;
      d -= amount;
      if (s == 0 && i < m_ - 1) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  void build_adjacency() {
    adjacency_.assign(static_cast<std::size_t>(m_ + n_), {});
    for (std::size_t a = 0; a < arcs_.size(); ++a) {
      adjacency_[static_cast<std::size_t>(arcs_[a].row)].push_back(a);
      adjacency_[static_cast<std::size_t>(node_of_col(arcs_[a].col))].push_back(a);
    }
  }

  Eigen::Index other_end(const Arc& arc, Eigen::Index node) const {
    return node == arc.row ? node_of_col(arc.col) : arc.row;
  }

  // u_r + v_c = cost on every basic cell, u_0 = 0.
  void compute_potentials() {
    build_adjacency();
    row_pot_.setZero(m_);
    col_pot_.setZero(n_);
    std::vector<char> seen(static_cast<std::size_t>(m_ + n_), 0);
    std::vector<Eigen::Index> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const auto node = stack.back();
      stack.pop_back();
      for (auto a : adjacency_[static_cast<std::size_t>(node)]) {
        const auto& arc = arcs_[a];
        const auto next = other_end(arc, node);
        if (seen[static_cast<std::size_t>(next)]) continue;
        seen[static_cast<std::size_t>(next)] = 1;
        if (next >= m_) {
          col_pot_(arc.col) = cost_(arc.row, arc.col) - row_pot_(arc.row);
        } else {
          row_pot_(arc.row) = cost_(arc.row, arc.col) - col_pot_(arc.col);
        }
        stack.push_back(next);
      }
    }
  }

  double reduced(Eigen::Index r, Eigen::Index c) const { return cost_(r, c) - row_pot_(r) - col_pot_(c); }

  std::ptrdiff_t price_most_negative() const {
    double best = -tolerance_;
    std::ptrdiff_t best_cell = -1;
    for (Eigen::Index r = 0; r < m_; ++r)
      for (Eigen::Index c = 0; c < n_; ++c) {
        if (in_basis_[cell_index(r, c)] >= 0) continue;
        const double rc = reduced(r, c);
        if (rc < best) {
          best = rc;
          best_cell = static_cast<std::ptrdiff_t>(cell_index(r, c));
        }
      }
    return best_cell;
  }

  std::ptrdiff_t price_first() const {
    for (Eigen::Index r = 0; r < m_; ++r)
      for (Eigen::Index c = 0; c < n_; ++c)
        if (in_basis_[cell_index(r, c)] < 0 && reduced(r, c) < -tolerance_)
          return static_cast<std::ptrdiff_t>(cell_index(r, c));
    return -1;
  }

  // Pushes flow around the cycle closed by the entering cell and swaps it
  // into the basis. Returns the step length.
  std::int64_t pivot(std::ptrdiff_t entering) {
    const Eigen::Index er = static_cast<Eigen::Index>(entering) / n_;
    const Eigen::Index ec = static_cast<Eigen::Index>(entering) % n_;

    // Tree path from column node ec back to row node er.
    const std::size_t nodes = static_cast<std::size_t>(m_ + n_);
    std::vector<std::ptrdiff_t> parent_arc(nodes, -1);
    std::vector<char> seen(nodes, 0);
    std::vector<Eigen::Index> queue{er};
    seen[static_cast<std::size_t>(er)] = 1;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const auto node = queue[q];
      for (auto a : adjacency_[static_cast<std::size_t>(node)]) {
        const auto next = other_end(arcs_[a], node);
        if (seen[static_cast<std::size_t>(next)]) continue;
        seen[static_cast<std::size_t>(next)] = 1;
        parent_arc[static_cast<std::size_t>(next)] = static_cast<std::ptrdiff_t>(a);
        queue.push_back(next);
      }
    }
    std::vector<std::size_t> path;
    for (Eigen::Index node = node_of_col(ec); node != er;) {
      const auto a = parent_arc[static_cast<std::size_t>(node)];
      if (a < 0) throw Error("solve_transport: basis is not a spanning tree");
      path.push_back(static_cast<std::size_t>(a));
      node = other_end(arcs_[static_cast<std::size_t>(a)], node);
    }

    // Arcs at even positions along the path lose flow. Ties leave by
    // smallest cell index (Bland's leaving rule).
    std::int64_t theta = std::numeric_limits<std::int64_t>::max();
    std::ptrdiff_t leaving = -1;
    std::size_t leaving_cell = 0;
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const auto& arc = arcs_[path[k]];
      const auto cell = cell_index(arc.row, arc.col);
      if (leaving < 0 || arc.flow < theta || (arc.flow == theta && cell < leaving_cell)) {
        theta = arc.flow;
        leaving = static_cast<std::ptrdiff_t>(path[k]);
        leaving_cell = cell;
      }
    }
    for (std::size_t k = 0; k < path.size(); ++k) arcs_[path[k]].flow += (k % 2 == 0) ? -theta : theta;

    auto& out = arcs_[static_cast<std::size_t>(leaving)];
    in_basis_[cell_index(out.row, out.col)] = -1;
    out = {er, ec, theta};
    in_basis_[cell_index(er, ec)] = static_cast<int>(leaving);
    return theta;
  }

  void extract(detail::CertifiedTransport& out) const {
    const double mass = static_cast<double>(m_ * n_);
    Matrix units = Matrix::Zero(m_, n_);
    for (const auto& arc : arcs_) {
      const auto rounded = (arc.flow + scale_ / 2) / scale_;
      units(arc.row, arc.col) = static_cast<double>(rounded);
      out.basis.push_back({arc.row, arc.col});
    }
    for (Eigen::Index r = 0; r < m_; ++r)
      if (units.row(r).sum() != static_cast<double>(n_)) throw Error("solve_transport: row marginal violated");
    for (Eigen::Index c = 0; c < n_; ++c)
      if (units.col(c).sum() != static_cast<double>(m_)) throw Error("solve_transport: column marginal violated");

    out.result.plan = units / mass;
    out.result.cost = units.cwiseProduct(cost_).sum() / mass;
    out.row_potential = row_pot_;
    out.col_potential = col_pot_;
  }

  const Matrix& cost_;
  Eigen::Index m_;
  Eigen::Index n_;
  std::int64_t scale_;
  double tolerance_ = 0;
  std::vector<Arc> arcs_;
  std::vector<int> in_basis_;
  std::vector<std::vector<std::size_t>> adjacency_;
  Vector row_pot_;
  Vector col_pot_;
};

// Union-find with undo for the include/exclude spanning-tree enumeration.
class RollbackDsu {
 public:
  explicit RollbackDsu(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) const {
    while (parent_[x] != x) x = parent_[x];
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    history_.push_back(b);
    return true;
  }

  void undo() {
    const auto b = history_.back();
    history_.pop_back();
    size_[parent_[b]] -= size_[b];
    parent_[b] = b;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::vector<std::size_t> history_;
};

class BasisEnumerator {
 public:
  explicit BasisEnumerator(const Matrix& cost)
      : cost_(cost), m_(cost.rows()), n_(cost.cols()), dsu_(static_cast<std::size_t>(m_ + n_)) {}

  TransportPlan run() {
    chosen_.reserve(static_cast<std::size_t>(m_ + n_ - 1));
    const auto nodes = static_cast<std::size_t>(m_ + n_);
    degree_.assign(nodes, 0);
    deg_.assign(nodes, 0);
    incident_.assign(nodes, 0);
    inc_.assign(nodes, 0);
    balance_.assign(nodes, 0);
    flow_.assign(nodes, 0);
    leaves_.reserve(2 * nodes);
    recurse(0);
    if (best_units_.size() == 0) throw Error("brute_force_transport: no feasible basis found");
    const double mass = static_cast<double>(m_ * n_);
    return {best_units_ / mass, best_cost_units_ / mass};
  }

 private:
  void recurse(Eigen::Index cell) {
    const auto need = static_cast<std::size_t>(m_ + n_ - 1);
    if (chosen_.size() == need) {
      evaluate();
      return;
    }
    const Eigen::Index total = m_ * n_;
    if (chosen_.size() + static_cast<std::size_t>(total - cell) < need) return;
    const Eigen::Index r = cell / n_, c = cell % n_;
    const auto row = static_cast<std::size_t>(r), col = static_cast<std::size_t>(m_ + c);
    if (dsu_.unite(row, col)) {
      const auto e = chosen_.size();
      chosen_.push_back(cell);
      ++degree_[row];
      ++degree_[col];
      incident_[row] ^= e;  // xor of incident edges names the last one left
      incident_[col] ^= e;
      recurse(cell + 1);
      --degree_[row];
      --degree_[col];
      incident_[row] ^= e;
      incident_[col] ^= e;
      chosen_.pop_back();
      dsu_.undo();
    }
    // the last cell of a row or column with no basic cell cannot be skipped
    if (c == n_ - 1 && degree_[row] == 0) return;
    if (r == m_ - 1 && degree_[col] == 0) return;
    recurse(cell + 1);
  }

  // Leaf elimination on the tree with integer supplies n and demands m.
  void evaluate() {
    const auto nodes = static_cast<std::size_t>(m_ + n_);
    const auto edges = chosen_.size();
    for (std::size_t v = 0; v < nodes; ++v) {
      deg_[v] = degree_[v];
      inc_[v] = incident_[v];
      balance_[v] = v < static_cast<std::size_t>(m_) ? n_ : -m_;
    }
    leaves_.clear();
    for (std::size_t v = 0; v < nodes; ++v)
      if (deg_[v] == 1) leaves_.push_back(v);
    std::size_t remaining = edges;
    double total = 0;
    while (remaining > 0 && !leaves_.empty()) {
      const auto v = leaves_.back();
      leaves_.pop_back();
      if (deg_[v] != 1) continue;
      const auto e = inc_[v];
      const auto r = static_cast<std::size_t>(chosen_[e] / n_), c = static_cast<std::size_t>(m_ + chosen_[e] % n_);
      const std::int64_t flow = v == r ? balance_[r] : -balance_[c];
      if (flow < 0) return;  // infeasible basis
      flow_[e] = flow;
      total += static_cast<double>(flow) * cost_(chosen_[e] / n_, chosen_[e] % n_);
      balance_[r] -= flow;
      balance_[c] += flow;
      --remaining;
      for (const auto u : {r, c}) {
        --deg_[u];
        inc_[u] ^= e;
        if (deg_[u] == 1) leaves_.push_back(u);
      }
    }
    if (remaining > 0) return;
    if (best_units_.size() == 0 || total < best_cost_units_) {
      best_cost_units_ = total;
      best_units_ = Matrix::Zero(m_, n_);
      for (std::size_t e = 0; e < edges; ++e)
        best_units_(chosen_[e] / n_, chosen_[e] % n_) = static_cast<double>(flow_[e]);
    }
  }

  const Matrix& cost_;
  Eigen::Index m_;
  Eigen::Index n_;
  RollbackDsu dsu_;
  std::vector<Eigen::Index> chosen_;
  Matrix best_units_;
  double best_cost_units_ = 0;
  std::vector<int> degree_, deg_;
  std::vector<std::size_t> incident_, inc_, leaves_;
  std::vector<std::int64_t> balance_, flow_;
};

}  // namespace

namespace detail {

CertifiedTransport solve_transport_certified(const Matrix& cost) {
  check_cost(cost, "solve_transport");
  return NetworkSimplex(cost).solve();
}

}  // namespace detail

TransportPlan solve_transport(const Matrix& cost) { return detail::solve_transport_certified(cost).result; }

TransportPlan brute_force_transport(const Matrix& cost) {
  check_cost(cost, "brute_force_transport");
  const auto cells = static_cast<std::size_t>(cost.rows() * cost.cols());
  if (cells > kBruteForceCellLimit)
    throw Error("brute_force_transport: " + std::to_string(cost.rows()) + "x" + std::to_string(cost.cols()) +
                " exceeds the " + std::to_string(kBruteForceCellLimit) + "-cell limit");

  if (cost.rows() == cost.cols()) {
    const Eigen::Index n = cost.rows();
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    std::vector<Eigen::Index> best = perm;
    double best_sum = std::numeric_limits<double>::infinity();
    do {
      double sum = 0;
      for (Eigen::Index i = 0; i < n; ++i) sum += cost(i, perm[static_cast<std::size_t>(i)]);
      if (sum < best_sum) {
        best_sum = sum;
        best = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    Matrix plan = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) plan(i, best[static_cast<std::size_t>(i)]) = 1.0 / static_cast<double>(n);
    return {plan, best_sum / static_cast<double>(n)};
  }
  if (cost.rows() < cost.cols()) {
    // same problem with the roles swapped; tall shapes prune earlier
    const Matrix transposed = cost.transpose();
    auto t = BasisEnumerator(transposed).run();
    return {t.plan.transpose(), t.cost};
  }
  return BasisEnumerator(cost).run();
}

}  // namespace repsep
