#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "hypercomp/harness.hpp"
#include "shuffle.hpp"

namespace hypercomp {

namespace {

// Members of each class in order of appearance, shuffled per class.
std::map<int, std::vector<std::size_t>> shuffled_strata(std::span<const int> labels,
                                                        std::uint64_t seed) {
  if (labels.empty()) throw std::invalid_argument("split: no documents");
  std::map<int, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < labels.size(); ++i) strata[labels[i]].push_back(i);
  std::mt19937_64 engine(seed);
  for (auto& [cls, members] : strata) detail::fisher_yates(members, engine);
  return strata;
}

}  // namespace

Split holdout_split(std::span<const int> labels, double train_ratio, std::uint64_t seed) {
  if (!(train_ratio > 0.0 && train_ratio < 1.0)) {
    throw std::invalid_argument("holdout ratio must lie in (0, 1)");
  }
  Split split;
  for (const auto& [cls, members] : shuffled_strata(labels, seed)) {
    const auto n_test = static_cast<std::size_t>(
        std::llround((1.0 - train_ratio) * static_cast<double>(members.size())));
    split.test.insert(split.test.end(), members.begin(),
                      members.begin() + static_cast<std::ptrdiff_t>(n_test));
    split.train.insert(split.train.end(), members.begin() + static_cast<std::ptrdiff_t>(n_test),
                       members.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::vector<Split> kfold_split(std::span<const int> labels, int folds, std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("k-fold needs at least 2 folds");
  const auto strata = shuffled_strata(labels, seed);
  for (const auto& [cls, members] : strata) {
    if (members.size() < static_cast<std::size_t>(folds)) {
      throw std::invalid_argument("class " + std::to_string(cls) + " has " +
                                  std::to_string(members.size()) + " members, fewer than " +
                                  std::to_string(folds) + " folds");
    }
  }
  std::vector<int> fold_of(labels.size());
  for (const auto& [cls, members] : strata) {
    for (std::size_t m = 0; m < members.size(); ++m) {
      fold_of[members[m]] = static_cast<int>(m % static_cast<std::size_t>(folds));
    }
  }
  std::vector<Split> out(static_cast<std::size_t>(folds));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (int f = 0; f < folds; ++f) {
      auto& s = out[static_cast<std::size_t>(f)];
      (fold_of[i] == f ? s.test : s.train).push_back(i);
    }
  }
  return out;
}

std::vector<Split> make_splits(std::span<const int> labels, const SplitSpec& spec) {
  if (const auto* h = std::get_if<HoldoutSplit>(&spec.scheme)) {
    return {holdout_split(labels, h->train_ratio, spec.seed)};
  }
  return kfold_split(labels, std::get<KFoldSplit>(spec.scheme).folds, spec.seed);
}

}  // namespace hypercomp
