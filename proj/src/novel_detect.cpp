#include "rptopic/novel_detect.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>

#include "rptopic/error.hpp"
#include "rptopic/kernels.hpp"
#include "rptopic/parallel.hpp"

namespace rptopic {
namespace {

using kernels::kBlock;

struct Neighborhood {
  std::vector<std::uint8_t> far;   // far[j]: j is zeta/2-distant and not silent
  std::vector<std::size_t> near;   // non-silent j != k within zeta/2
};

Neighborhood build_neighborhood(const CoocSource& source, std::size_t k, double threshold) {
  const std::size_t w = source.num_words();
  std::vector<double> row(w);
  source.row(k, row);
  const auto diag = source.diag();
  const auto silent = source.silent();
  Neighborhood nb;
  nb.far.resize(w);
  kernels::active().far_mask(row.data(), diag.data(), diag[k], threshold, silent.data(),
                             nb.far.data(), w);
  for (std::size_t j = 0; j < w; ++j) {
    if (j != k && !nb.far[j] && !silent[j]) nb.near.push_back(j);
  }
  return nb;
}

// Neighborhoods are built on first use; the set of maximizers is small.
class NeighborhoodCache {
 public:
  NeighborhoodCache(const CoocSource& source, double threshold)
      : source_(source), threshold_(threshold), slots_(source.num_words()) {}

  const Neighborhood& get(std::size_t k) {
    {
      std::lock_guard lock(mutex_);
      if (slots_[k]) return *slots_[k];
    }
    auto built = std::make_shared<const Neighborhood>(build_neighborhood(source_, k, threshold_));
    std::lock_guard lock(mutex_);
    if (!slots_[k]) slots_[k] = std::move(built);
    return *slots_[k];
  }

 private:
  const CoocSource& source_;
  double threshold_;
  std::vector<std::shared_ptr<const Neighborhood>> slots_;
  std::mutex mutex_;
};

}  // namespace

double cooc_distance(const CoocSource& source, std::size_t i, std::size_t j) {
  const auto row = cooc_entries(source, i);
  const auto diag = source.diag();
  return (diag[i] + diag[j]) - 2.0 * row[j];
}

SolidAngleProfile estimate_solid_angles(const CoocSource& source, const DetectOptions& options) {
  if (options.projections == 0) throw Error("number of projections must be at least 1");
  if (!(options.zeta > 0.0)) throw Error("zeta must be positive");
  const std::size_t w = source.num_words();
  const std::size_t p = options.projections;
  const auto silent = source.silent();
  const auto& k = kernels::active();

  NeighborhoodCache cache(source, options.zeta / 2.0);
  const std::size_t blocks = (p + kBlock - 1) / kBlock;
  const std::size_t threads = std::min(resolve_threads(options.threads), blocks);
  std::vector<std::vector<std::uint64_t>> partial(threads, std::vector<std::uint64_t>(w, 0));
  std::vector<std::vector<std::size_t>> trace(options.record_trace ? p : 0);

  parallel_for(blocks, threads, [&](std::size_t begin, std::size_t end, std::size_t worker) {
    std::vector<double> dirs(w * kBlock);
    std::vector<double> proj(w * kBlock);
    std::vector<double> one(w);
    std::vector<double> v(w);
    auto& hits = partial[worker];
    for (std::size_t b = begin; b < end; ++b) {
      const std::size_t r0 = b * kBlock;
      const std::size_t lanes = std::min(kBlock, p - r0);
      std::fill(dirs.begin(), dirs.end(), 0.0);
      for (std::size_t lane = 0; lane < lanes; ++lane) {
        Rng rng = make_rng(options.seed, "direction", r0 + lane);
        fill_standard_normal(one, rng);
        for (std::size_t i = 0; i < w; ++i) dirs[i * kBlock + lane] = one[i];
      }
      source.project_block(dirs, proj);
      for (std::size_t lane = 0; lane < lanes; ++lane) {
        for (std::size_t i = 0; i < w; ++i) v[i] = proj[i * kBlock + lane];
        const std::size_t top = k.argmax_masked(v.data(), silent.data(), w);
        if (top == w) throw Error("every word is silent; nothing to project");
        ++hits[top];
        std::vector<std::size_t>* record = options.record_trace ? &trace[r0 + lane] : nullptr;
        if (record) record->push_back(top);
        for (std::size_t c : cache.get(top).near) {
          const Neighborhood& nc = cache.get(c);
          if (v[c] > k.max_masked(v.data(), nc.far.data(), w)) {
            ++hits[c];
            if (record) record->push_back(c);
          }
        }
      }
    }
  });

  SolidAngleProfile profile;
  profile.projections = p;
  profile.zeta = options.zeta;
  profile.seed = options.seed;
  profile.hits.assign(w, 0);
  for (const auto& h : partial) {
    for (std::size_t i = 0; i < w; ++i) profile.hits[i] += h[i];
  }
  profile.qhat.resize(w);
  for (std::size_t i = 0; i < w; ++i) {
    profile.qhat[i] = static_cast<double>(profile.hits[i]) / static_cast<double>(p);
  }
  profile.trace = std::move(trace);
  return profile;
}

NovelWordSet walk_extremes(const SolidAngleProfile& profile, const CoocSource& source,
                           double tau, std::size_t cap) {
  const std::size_t w = source.num_words();
  if (profile.qhat.size() != w) throw DimensionError("solid-angle profile length differs from W");
  const auto diag = source.diag();
  const auto silent = source.silent();
  const double threshold = profile.zeta / 2.0;

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < w; ++i) {
    if (profile.qhat[i] > tau && !silent[i]) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return profile.qhat[a] > profile.qhat[b];
  });

  NovelWordSet out;
  std::vector<double> row(w);
  std::vector<std::uint8_t> far(w);
  for (std::size_t i : order) {
    if (out.size() >= cap) break;
    source.row(i, row);
    bool distinct = true;
    for (std::size_t p : out.indices) {
      if ((diag[p] + diag[i]) - 2.0 * row[p] < threshold) {
        distinct = false;
        break;
      }
    }
    if (!distinct) continue;
    kernels::active().far_mask(row.data(), diag.data(), diag[i], threshold, silent.data(),
                               far.data(), w);
    std::vector<std::size_t> companions;
    for (std::size_t j = 0; j < w; ++j) {
      if (j != i && !far[j] && !silent[j]) companions.push_back(j);
    }
    out.indices.push_back(i);
    out.clusters.push_back(std::move(companions));
  }
  return out;
}

NovelWordSet select_novel_words(const SolidAngleProfile& profile, const CoocSource& source,
                                std::size_t num_topics) {
  if (num_topics == 0) throw Error("number of topics must be at least 1");
  NovelWordSet out = walk_extremes(profile, source, 0.0, num_topics);
  if (out.size() < num_topics) throw InsufficientExtremesError(out.size(), num_topics);
  return out;
}

std::size_t estimate_K(const SolidAngleProfile& profile, const CoocSource& source, double tau,
                       std::size_t k_max) {
  if (tau < 0.0) throw Error("tau must be nonnegative");
  if (k_max == 0) throw Error("K_max must be at least 1");
  return walk_extremes(profile, source, tau, k_max).size();
}

std::vector<std::size_t> cluster_labels(const NovelWordSet& novel, std::size_t num_words) {
  std::vector<std::size_t> labels(num_words, 0);
  for (std::size_t t = 0; t < novel.size(); ++t) {
    for (std::size_t j : novel.clusters[t]) {
      if (labels[j] == 0) labels[j] = t + 1;
    }
  }
  for (std::size_t t = 0; t < novel.size(); ++t) labels[novel.indices[t]] = t + 1;
  return labels;
}

}  // namespace rptopic
