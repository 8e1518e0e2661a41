#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rptopic/projector.hpp"

namespace rptopic {

inline constexpr double kDefaultZeta = 0.05;
inline constexpr std::size_t kProjectionsPerTopic = 150;

struct DetectOptions {
  std::size_t projections = 0;  // P
  double zeta = kDefaultZeta;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  bool record_trace = false;
};

// Empirical solid angles: qhat[i] = hits[i] / P.
struct SolidAngleProfile {
  std::vector<double> qhat;
  std::vector<std::uint64_t> hits;
  std::size_t projections = 0;
  double zeta = kDefaultZeta;
  std::uint64_t seed = 0;
  // With DetectOptions::record_trace: words incremented by each projection.
  std::vector<std::vector<std::size_t>> trace;
};

struct NovelWordSet {
  std::vector<std::size_t> indices;
  // Same-cluster companions of each selected word (within zeta/2 of it).
  std::vector<std::vector<std::size_t>> clusters;

  std::size_t size() const { return indices.size(); }
};

// Distance surrogate E_ii + E_jj - 2 E_ij used for zeta-clustering.
double cooc_distance(const CoocSource& source, std::size_t i, std::size_t j);

SolidAngleProfile estimate_solid_angles(const CoocSource& source, const DetectOptions& options);

// Walks words by decreasing qhat and admits those zeta/2-distant from every
// word already admitted. Throws InsufficientExtremesError if fewer than K
// positive-qhat words can be admitted.
NovelWordSet select_novel_words(const SolidAngleProfile& profile, const CoocSource& source,
                                std::size_t num_topics);

// Same walk restricted to qhat > tau and capped at k_max; returns the count.
std::size_t estimate_K(const SolidAngleProfile& profile, const CoocSource& source, double tau,
                       std::size_t k_max);

// Full walk result for the threshold variant.
NovelWordSet walk_extremes(const SolidAngleProfile& profile, const CoocSource& source,
                           double tau, std::size_t cap);

// Per-word cluster id: 1-based topic for selected words and their companions,
// 0 otherwise.
std::vector<std::size_t> cluster_labels(const NovelWordSet& novel, std::size_t num_words);

}  // namespace rptopic
