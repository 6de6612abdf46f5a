// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>

#include "repsep/metrics.hpp"
#include "repsep/separability.hpp"
#include "repsep/synthetic.hpp"
#include "repsep/transport.hpp"
#include "support.hpp"

using namespace repsep;
namespace fs = std::filesystem;

namespace {

// Tolerances and workload sizes.
constexpr int kSquareInstances = 200;
constexpr int kRectInstances = 60;
constexpr double kRectTol = 1e-9;
constexpr double kTransportSeconds = 10.0;
constexpr int kVertexPairs = 50;
constexpr double kVertexTol = 1e-8;
constexpr int kInvariancePairs = 20;
constexpr double kRotationTol = 1e-6;
constexpr double kPermutationTol = 1e-8;
constexpr double kInvertibleTol = 1e-6;
constexpr int kNestingPairs = 100;
constexpr double kNestingTol = 1e-9;
constexpr double kLowNoise = 0.5;
constexpr double kHighNoise = 8.0;
constexpr double kSyntheticSeconds = 60.0;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

Outcome transport_oracle() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  int square_bad = 0;
  for (int t = 0; t < kSquareInstances; ++t) {
    const Eigen::Index n = 1 + t % 5;
    const auto cost = testing::random_integer_costs(rng, n, n);
    const auto plan = solve_transport(cost);
    // integer-scaled: n * plan is 0/1, so the selected cells sum to an integer cost
    long long scaled = 0;
    bool vertex = true;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        const double v = plan.plan(i, j) * static_cast<double>(n);
        const long long k = std::llround(v);
        vertex = vertex && (k == 0 || k == 1) && std::abs(v - static_cast<double>(k)) < 1e-12;
        scaled += k * std::llround(cost(i, j));
      }
    const auto oracle = std::llround(testing::min_permutation_sum(cost));
    if (!vertex || scaled != oracle || std::llround(plan.cost * static_cast<double>(n)) != oracle) ++square_bad;
  }
  const std::vector<std::pair<int, int>> shapes = {{2, 3}, {3, 2}, {2, 7}, {3, 4}, {4, 3}, {3, 5}, {5, 3},
                                                   {2, 9}, {3, 7}, {4, 5}, {5, 4}, {4, 6}, {6, 4}, {5, 6}, {3, 10}};
  int rect_bad = 0;
  double worst = 0;
  for (int t = 0; t < kRectInstances; ++t) {
    const auto [m, n] = shapes[static_cast<std::size_t>(t) % shapes.size()];
    const auto cost = testing::random_integer_costs(rng, m, n);
    const double gap = std::abs(solve_transport(cost).cost - brute_force_transport(cost).cost);
    worst = std::max(worst, gap);
    if (gap > kRectTol) ++rect_bad;
  }
  const double secs = seconds_since(start);
  return {square_bad == 0 && rect_bad == 0 && secs < kTransportSeconds,
          std::to_string(kSquareInstances) + " square (" + std::to_string(square_bad) + " mismatches), " +
              std::to_string(kRectInstances) + " rectangular (max gap " + fmt(worst) + "), " + fmt(secs) + " s"};
}

Outcome vertex_property() {
  std::mt19937_64 rng(202);
  double worst = 0;
  for (int t = 0; t < kVertexPairs; ++t) {
    const Eigen::Index n = 2 + t % 11;
    const auto xi = testing::centered_model(rng, 40, n, "a");
    const auto xj = testing::centered_model(rng, 40, n, "b");
    const Matrix p = softmatch_align(xi, xj).transport.plan * static_cast<double>(n);
    // distance to the nearest 0/1 entry, plus every row and column holding a single 1
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) worst = std::max(worst, std::min(std::abs(p(i, j)), std::abs(p(i, j) - 1)));
    for (Eigen::Index i = 0; i < n; ++i) {
      worst = std::max(worst, std::abs(p.row(i).maxCoeff() - 1));
      worst = std::max(worst, std::abs(p.col(i).maxCoeff() - 1));
    }
  }
  return {worst <= kVertexTol, std::to_string(kVertexPairs) + " pairs, max deviation " + fmt(worst)};
}

ActivationMatrix transformed(const ActivationMatrix& x, const Matrix& right) {
  return ActivationMatrix(x.model_id(), x.data() * right, true);
}

Outcome invariance() {
  std::mt19937_64 rng(303);
  std::uniform_int_distribution<Eigen::Index> width(3, 12);
  double rot = 0, perm = 0, inv = 0;
  for (int t = 0; t < kInvariancePairs; ++t) {
    const auto ni = width(rng), nj = width(rng);
    const auto xi = testing::centered_model(rng, 50, ni, "i");
    const auto xj = testing::centered_model(rng, 50, nj, "j");
    const auto qi = testing::random_orthogonal(rng, ni), qj = testing::random_orthogonal(rng, nj);
    for (const auto metric : {Metric::rsa, Metric::procrustes}) {
      const double base = similarity_score(metric, xi, xj);
      rot = std::max(rot, std::abs(similarity_score(metric, transformed(xi, qi), xj) - base));
      rot = std::max(rot, std::abs(similarity_score(metric, xi, transformed(xj, qj)) - base));
    }
    const auto pi = testing::permutation_matrix(testing::random_permutation(rng, ni));
    const auto pj = testing::permutation_matrix(testing::random_permutation(rng, nj));
    for (const auto metric : kAllMetrics) {
      const double base = similarity_score(metric, xi, xj);
      perm = std::max(perm, std::abs(similarity_score(metric, transformed(xi, pi), xj) - base));
      perm = std::max(perm, std::abs(similarity_score(metric, xi, transformed(xj, pj)) - base));
    }
    Matrix a = testing::gaussian(rng, ni, ni) + 2.0 * Matrix::Identity(ni, ni);
    const double base = linear_predictivity_score(xi, xj);
    inv = std::max(inv, std::abs(linear_predictivity_score(transformed(xi, a), xj) - base));
  }
  return {rot <= kRotationTol && perm <= kPermutationTol && inv <= kInvertibleTol,
          "orthogonal " + fmt(rot) + ", permutation " + fmt(perm) + ", invertible source " + fmt(inv)};
}

Outcome nesting() {
  std::mt19937_64 rng(404);
  int violations = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (int t = 0; t < kNestingPairs; ++t) {
    const Eigen::Index n = 2 + t % 15;
    const auto xi = testing::centered_model(rng, 30 + t % 40, n, "i");
    const auto xj = testing::centered_model(rng, xi.stimuli(), n, "j");
    const double gap = linear_predictivity_score(xi, xj) - procrustes_score(xi, xj);
    worst = std::min(worst, gap);
    if (gap < -kNestingTol) ++violations;
  }
  return {violations == 0, std::to_string(kNestingPairs) + " pairs, " + std::to_string(violations) +
                               " violations, smallest gap " + fmt(worst)};
}

Outcome golden_values() {
  const std::vector<double> w{0.9, 0.8}, b{0.1, 0.2}, pos{0.9, 0.4}, neg{0.6, 0.1};
  const double d = dprime_directional(w, b);
  const double auc = roc_auc(pos, neg).auc;
  Matrix s(4, 4);
  s << 1, 0.8, 0.2, 0.2, 0.8, 1, 0.2, 0.2, 0.2, 0.2, 1, 0.8, 0.2, 0.2, 0.8, 1;
  const SimilarityMatrix sim{Metric::rsa, {"a1", "a2", "b1", "b2"}, s, true};
  const double sil = silhouette_pair(sim, {"a1", "a2"}, {"b1", "b2"});
  const SimilarityMatrix flat{Metric::rsa, {"a1", "a2", "b1", "b2"}, Matrix::Constant(4, 4, 0.3), true};
  const bool trivial = dprime_directional(w, w) == 0.0 && roc_auc(w, w).auc == 0.5 &&
                       silhouette_pair(flat, {"a1", "a2"}, {"b1", "b2"}) == 0.0;
  return {std::abs(d - 14.0) <= 1e-9 && auc == 0.75 && std::abs(sil - 0.75) <= 1e-12 && trivial,
          "dprime " + fmt(d) + ", auc " + fmt(auc) + ", silhouette " + fmt(sil) +
              (trivial ? ", identical distributions ok" : ", identical distributions WRONG")};
}

Outcome synthetic_recovery() {
  const auto start = std::chrono::steady_clock::now();
  std::ostringstream detail;
  bool pass = true;
  for (const double noise : {kLowNoise, kHighNoise}) {
    SyntheticSpec spec;
    spec.noise = noise;
    spec.seed = 505;
    const auto corpus = make_synthetic_families(spec);
    detail << "noise " << noise << ":";
    for (const auto metric : kAllMetrics) {
      const auto sim = pairwise_similarity(std::span<const ActivationMatrix>(corpus.models), metric, {}, 1);
      const auto report = build_report(sim, corpus.records);
      double min_d = std::numeric_limits<double>::infinity();
      for (const auto& p : report.pairs) min_d = std::min(min_d, p.dprime);
      if (noise == kLowNoise) {
        pass = pass && min_d > 2.0 && report.global_auc > 0.95;
        detail << ' ' << metric_name(metric) << "(min d' " << fmt(min_d) << ", auc " << fmt(report.global_auc) << ")";
      } else {
        pass = pass && report.global_auc < 0.7;
        detail << ' ' << metric_name(metric) << "(auc " << fmt(report.global_auc) << ")";
      }
    }
    detail << "; ";
  }
  const double secs = seconds_since(start);
  detail << fmt(secs) << " s";
  return {pass && secs < kSyntheticSeconds, detail.str()};
}

int shell(const std::string& cmd) { return std::system(("REPSEP_LOG=error " + cmd + " > /dev/null").c_str()); }

Outcome determinism() {
  const auto dir = testing::scratch_dir("acceptance_determinism");
  const std::string bin = REPSEP_CLI_PATH;
  const auto manifest = fs::path(REPSEP_SOURCE_DIR) / "data/toy/manifest.json";
  const std::vector<std::pair<std::string, int>> runs = {{"a1", 1}, {"b1", 1}, {"a8", 8}, {"b8", 8}};
  for (const auto& [name, jobs] : runs) {
    testing::write_text(dir / ("config_" + name + ".json"),
                        "{\"manifest\": \"" + manifest.generic_string() + "\", \"out\": \"" + name + "\", \"jobs\": " +
                            std::to_string(jobs) + "}");
    const auto cfg = (dir / ("config_" + name + ".json")).string();
    if (shell(bin + " similarity --config " + cfg) != 0 || shell(bin + " separability --config " + cfg) != 0)
      return {false, "run " + name + " failed"};
  }
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(dir / "a1")) {
    if (entry.path().extension() != ".json") continue;
    const auto reference = testing::read_text(entry.path());
    for (const auto& [name, jobs] : runs) {
      const auto other = dir / name / entry.path().filename();
      if (!fs::exists(other) || testing::read_text(other) != reference)
        return {false, entry.path().filename().string() + " differs in run " + name};
    }
    ++compared;
  }
  return {compared == 8, std::to_string(compared) + " JSON files identical across 4 runs (jobs 1 and 8)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"transport solver matches brute-force oracles", transport_oracle},
      {"square soft-matching plan is a scaled permutation", vertex_property},
      {"metric invariances", invariance},
      {"linear predictivity >= procrustes", nesting},
      {"separability golden values", golden_values},
      {"synthetic family recovery", synthetic_recovery},
      {"end-to-end CLI determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
