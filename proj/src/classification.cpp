#include <algorithm>
#include <cmath>
#include <numeric>

#include "summer/evaluation.hpp"

namespace summer {

namespace {

constexpr double kPairZCritical = 1.96;

}  // namespace

std::optional<double> auc_mann_whitney(std::span<const double> positives,
                                       std::span<const double> negatives) {
  if (positives.empty() || negatives.empty()) return std::nullopt;
  std::vector<double> all;
  all.reserve(positives.size() + negatives.size());
  all.insert(all.end(), positives.begin(), positives.end());
  all.insert(all.end(), negatives.begin(), negatives.end());
  const auto ranks = average_ranks(all);
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < positives.size(); ++i) rank_sum += ranks[i];
  const double np = static_cast<double>(positives.size());
  const double nn = static_cast<double>(negatives.size());
  const double u = rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * nn);
}

ClassificationResult classification_analysis(std::span<const ClassificationItem> items) {
  ClassificationResult result;
  std::vector<const ClassificationItem*> usable;
  for (const auto& item : items) {
    if (item.mos_std && item.vote_count && *item.vote_count >= 1.0) {
      usable.push_back(&item);
    } else {
      ++result.excluded;
    }
  }

  std::vector<double> different_gap;
  std::vector<double> similar_gap;
  std::vector<double> better_minus_worse;
  for (std::size_t i = 0; i < usable.size(); ++i) {
    const ClassificationItem& a = *usable[i];
    for (std::size_t j = i + 1; j < usable.size(); ++j) {
      const ClassificationItem& b = *usable[j];
      const double mos_gap = a.mos - b.mos;
      const double se = std::sqrt(*a.mos_std * *a.mos_std / *a.vote_count +
                                  *b.mos_std * *b.mos_std / *b.vote_count);
      const bool different =
          se > 0.0 ? std::fabs(mos_gap) / se > kPairZCritical : mos_gap != 0.0;
      const double objective_gap = a.objective - b.objective;
      if (different) {
        different_gap.push_back(std::fabs(objective_gap));
        better_minus_worse.push_back(mos_gap > 0.0 ? objective_gap : -objective_gap);
      } else {
        similar_gap.push_back(std::fabs(objective_gap));
      }
    }
  }
  result.different_pairs = different_gap.size();
  result.similar_pairs = similar_gap.size();
  result.auc_different_similar = auc_mann_whitney(different_gap, similar_gap);
  if (!better_minus_worse.empty()) {
    std::vector<double> worse_minus_better(better_minus_worse.size());
    std::transform(better_minus_worse.begin(), better_minus_worse.end(),
                   worse_minus_better.begin(), [](double d) { return -d; });
    result.auc_better_worse = auc_mann_whitney(better_minus_worse, worse_minus_better);
    const auto correct = std::count_if(better_minus_worse.begin(), better_minus_worse.end(),
                                       [](double d) { return d > 0.0; });
    result.c0 = static_cast<double>(correct) / static_cast<double>(better_minus_worse.size());
  }
  return result;
}

}  // namespace summer
