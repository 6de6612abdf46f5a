#include "repsep/separability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "repsep/numerics.hpp"

namespace repsep {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Moments {
  double mean;
  double variance;
};

Moments population_moments(std::span<const double> xs) {
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, ss / n};
}

std::vector<std::size_t> indices_of(const SimilarityMatrix& sim, const std::vector<std::string>& ids) {
  std::vector<std::size_t> out;
  for (const auto& id : ids) {
    const auto it = std::find(sim.model_ids.begin(), sim.model_ids.end(), id);
    if (it == sim.model_ids.end()) throw Error("model '" + id + "' is not in the similarity matrix");
    out.push_back(static_cast<std::size_t>(it - sim.model_ids.begin()));
  }
  return out;
}

double score(const SimilarityMatrix& sim, std::size_t i, std::size_t j) {
  return sim.scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

// Mean s(i) of `members` against `others`.
double silhouette_side(const SimilarityMatrix& sim, std::span<const std::size_t> members,
                       std::span<const std::size_t> others) {
  double total = 0;
  for (auto i : members) {
    double a = 0;
    for (auto j : members)
      if (j != i) a += 1.0 - score(sim, i, j);
    a /= static_cast<double>(members.size() - 1);
    double b = 0;
    for (auto j : others) b += 1.0 - score(sim, i, j);
    b /= static_cast<double>(others.size());
    const double denom = std::max(a, b);
    total += denom == 0 ? 0.0 : (b - a) / denom;
  }
  return total / static_cast<double>(members.size());
}

void append_within(const SimilarityMatrix& sim, std::span<const std::size_t> family, std::vector<double>& out) {
  for (std::size_t x = 0; x < family.size(); ++x)
    for (std::size_t y = x + 1; y < family.size(); ++y) out.push_back(score(sim, family[x], family[y]));
}

}  // namespace

PairSample pair_sample(const SimilarityMatrix& sim, std::span<const std::size_t> family_a,
                       std::span<const std::size_t> family_b) {
  PairSample s;
  append_within(sim, family_a, s.within_a);
  append_within(sim, family_b, s.within_b);
  for (auto i : family_a)
    for (auto j : family_b) s.between.push_back(score(sim, i, j));
  return s;
}

double dprime_directional(std::span<const double> within, std::span<const double> between) {
  if (within.empty() || between.empty()) throw Error("dprime: need at least one within and one between score");
  const auto w = population_moments(within);
  const auto b = population_moments(between);
  const double numerator = w.mean - b.mean;
  const double pooled = std::sqrt(0.5 * (w.variance + b.variance));
  if (pooled < 1e-15) {
    if (std::abs(numerator) <= 1e-15) return 0.0;
    return numerator > 0 ? kInf : -kInf;
  }
  return numerator / pooled;
}

DPrimePair dprime_pair(const PairSample& sample) {
  const bool has_a = !sample.within_a.empty();
  const bool has_b = !sample.within_b.empty();
  if (!has_a && !has_b) throw Error("dprime_pair: neither family has two members");
  if (has_a != has_b) {
    const auto& within = has_a ? sample.within_a : sample.within_b;
    return {dprime_directional(within, sample.between), true};
  }
  const double da = dprime_directional(sample.within_a, sample.between);
  const double db = dprime_directional(sample.within_b, sample.between);
  // Opposite infinities cancel instead of producing NaN.
  if (std::isinf(da) && std::isinf(db) && (da > 0) != (db > 0)) return {0.0, false};
  return {0.5 * (da + db), false};
}

double silhouette_pair(const SimilarityMatrix& sim, std::span<const std::size_t> family_a,
                       std::span<const std::size_t> family_b) {
  if (family_a.size() < 2 || family_b.size() < 2) throw Error("silhouette: each family needs at least two members");
  return 0.5 * (silhouette_side(sim, family_a, family_b) + silhouette_side(sim, family_b, family_a));
}

double silhouette_pair(const SimilarityMatrix& sim, const std::vector<std::string>& family_a,
                       const std::vector<std::string>& family_b) {
  const auto a = indices_of(sim, family_a);
  const auto b = indices_of(sim, family_b);
  return silhouette_pair(sim, std::span<const std::size_t>(a), std::span<const std::size_t>(b));
}

RocCurve roc_auc(std::span<const double> positives, std::span<const double> negatives) {
  if (positives.empty() || negatives.empty()) throw Error("roc_auc: positives and negatives must be nonempty");
  std::vector<double> all(positives.begin(), positives.end());
  all.insert(all.end(), negatives.begin(), negatives.end());
  const auto ranks = average_ranks(all);
  const double n_pos = static_cast<double>(positives.size());
  const double n_neg = static_cast<double>(negatives.size());
  const double rank_sum = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(positives.size()), 0.0);

  RocCurve curve;
  curve.auc = (rank_sum - n_pos * (n_pos + 1) / 2) / (n_pos * n_neg);

  std::vector<std::pair<double, bool>> scored;
  for (double p : positives) scored.emplace_back(p, true);
  for (double n : negatives) scored.emplace_back(n, false);
  std::sort(scored.begin(), scored.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  curve.points.push_back({0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < scored.size();) {
    std::size_t j = i;
    while (j < scored.size() && scored[j].first == scored[i].first) {
      (scored[j].second ? tp : fp) += 1;
      ++j;
    }
    curve.points.push_back({static_cast<double>(fp) / n_neg, static_cast<double>(tp) / n_pos});
    i = j;
  }
  return curve;
}

const FamilyPairStats& SeparabilityReport::pair(const std::string& a, const std::string& b) const {
  for (const auto& p : pairs)
    if ((p.a == a && p.b == b) || (p.a == b && p.b == a)) return p;
  throw Error("no family pair (" + a + ", " + b + ") in report");
}

SeparabilityReport build_report(const SimilarityMatrix& sim, const std::vector<ModelRecord>& records) {
  std::map<std::string, std::string> family_of;
  for (const auto& r : records) family_of[r.model_id] = r.family;

  SeparabilityReport report;
  report.metric = sim.metric;
  std::vector<std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < sim.model_ids.size(); ++i) {
    const auto it = family_of.find(sim.model_ids[i]);
    if (it == family_of.end()) throw Error("build_report: model '" + sim.model_ids[i] + "' has no family label");
    const auto pos = std::find(report.families.begin(), report.families.end(), it->second);
    if (pos == report.families.end()) {
      report.families.push_back(it->second);
      members.push_back({i});
    } else {
      members[static_cast<std::size_t>(pos - report.families.begin())].push_back(i);
    }
  }
  if (report.families.size() < 2) throw Error("build_report: need at least two families");
  for (std::size_t f = 0; f < members.size(); ++f)
    if (members[f].size() < 2)
      throw Error("build_report: family '" + report.families[f] + "' has fewer than two members");

  std::vector<double> dprimes, silhouettes, aucs;
  for (std::size_t fa = 0; fa < members.size(); ++fa) {
    for (std::size_t fb = fa + 1; fb < members.size(); ++fb) {
      const auto sample = pair_sample(sim, members[fa], members[fb]);
      FamilyPairStats stats;
      stats.a = report.families[fa];
      stats.b = report.families[fb];
      const auto dp = dprime_pair(sample);
      stats.dprime = dp.value;
      if (dp.single_direction) stats.flags.emplace_back("dprime_single_direction");
      if (std::isinf(dp.value)) {
        stats.flags.emplace_back("dprime_infinite");
        ++report.summary.infinite_dprime_count;
      } else {
        dprimes.push_back(dp.value);
      }
      stats.silhouette = silhouette_pair(sim, members[fa], members[fb]);
      std::vector<double> positives = sample.within_a;
      positives.insert(positives.end(), sample.within_b.begin(), sample.within_b.end());
      stats.auc = roc_auc(positives, sample.between).auc;
      silhouettes.push_back(stats.silhouette);
      aucs.push_back(stats.auc);
      report.pairs.push_back(std::move(stats));
    }
  }

  std::vector<double> within_all, between_all;
  for (std::size_t fa = 0; fa < members.size(); ++fa) {
    append_within(sim, members[fa], within_all);
    for (std::size_t fb = fa + 1; fb < members.size(); ++fb)
      for (auto i : members[fa])
        for (auto j : members[fb]) between_all.push_back(score(sim, i, j));
  }
  auto global = roc_auc(within_all, between_all);
  report.global_auc = global.auc;
  report.roc = std::move(global.points);

  const auto mean = [](const std::vector<double>& xs) {
    return xs.empty() ? 0.0 : std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  };
  report.summary.dprime_mean = mean(dprimes);
  report.summary.dprime_pooled = dprime_directional(within_all, between_all);
  report.summary.silhouette_mean = mean(silhouettes);
  report.summary.auc_mean = mean(aucs);
  return report;
}

}  // namespace repsep
