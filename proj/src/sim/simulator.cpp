// Copyright 2026 The intentdiv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "intentdiv/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "intentdiv/errors.hpp"

namespace intentdiv {

namespace {

enum Purpose : std::uint64_t {
  kCatalogStream = 1,
  kProfileStream = 2,
  kIntentDraw = 5,
  kConsumeCoin = 6,
  kContinueCoin = 7,
};

std::uint64_t HashId(std::string_view id) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : id) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string PaddedId(char prefix, std::size_t value, std::size_t width) {
  std::string digits = std::to_string(value);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return prefix + digits;
}

// Cumulative Zipf weights over creators.
std::vector<double> CreatorCdf(std::size_t n_creators, double exponent) {
  std::vector<double> cdf(n_creators);
  double total = 0.0;
  for (std::size_t c = 0; c < n_creators; ++c) {
    total += 1.0 / std::pow(static_cast<double>(c + 1), exponent);
    cdf[c] = total;
  }
  for (double& x : cdf) x /= total;
  return cdf;
}

std::uint32_t DrawCreator(const std::vector<double>& cdf, StreamRng& rng) {
  const double u = rng.Uniform();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) --it;
  return static_cast<std::uint32_t>(it - cdf.begin());
}

void Require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

std::string_view ToString(IntentMode mode) {
  return mode == IntentMode::kNovelty ? "novelty" : "creator";
}

std::string_view ToString(Arm arm) { return arm == Arm::kControl ? "control" : "treatment"; }

IntentMode ParseIntentMode(std::string_view name) {
  if (name == "novelty") return IntentMode::kNovelty;
  if (name == "creator") return IntentMode::kCreator;
  throw ConfigError("unknown intent mode '" + std::string(name) + "'");
}

Arm ParseArm(std::string_view name) {
  if (name == "control") return Arm::kControl;
  if (name == "treatment") return Arm::kTreatment;
  throw ConfigError("unknown arm '" + std::string(name) + "'");
}

std::string_view ToString(TrainSource source) {
  return source == TrainSource::kControl ? "control" : "self";
}

TrainSource ParseTrainSource(std::string_view name) {
  if (name == "control") return TrainSource::kControl;
  if (name == "self") return TrainSource::kSelf;
  throw ConfigError("unknown train source '" + std::string(name) + "'");
}

std::size_t SimConfig::num_intents() const {
  return intent_mode == IntentMode::kNovelty ? 2 : n_creators;
}

void SimConfig::Validate() const {
  Require(n_users >= 1, "n_users must be >= 1");
  Require(n_days >= 1, "n_days must be >= 1");
  Require(page_size >= 1, "page_size must be >= 1");
  Require(pool_size >= page_size, "pool_size must be >= page_size");
  Require(catalog_size >= pool_size, "catalog_size must be >= pool_size");
  Require(n_creators >= 1, "n_creators must be >= 1");
  Require(n_clusters >= 1, "n_clusters must be >= 1");
  Require(creator_popularity_exponent >= 0.0, "creator_popularity_exponent must be >= 0");
  Require(initial_seen_creators <= n_creators, "initial_seen_creators must be <= n_creators");
  Require(quality_min > 0.0 && quality_min <= quality_max && quality_max < 1.0,
          "quality range must satisfy 0 < quality_min <= quality_max < 1");
  Require(quality_noise >= 0.0, "quality_noise must be >= 0");
  Require(off_intent_affinity >= 0.0 && off_intent_affinity <= 1.0,
          "off_intent_affinity must lie in [0, 1]");
  Require(patience_min >= 1 && patience_min <= patience_max,
          "patience range must satisfy 1 <= patience_min <= patience_max");
  Require(continuation_min >= 0.0 && continuation_min <= continuation_max &&
              continuation_max <= 1.0,
          "continuation range must lie in [0, 1]");
  Require(intent_logit_sd >= 0.0, "intent_logit_sd must be >= 0");
  Require(hourly_amplitude >= 0.0, "hourly_amplitude must be >= 0");
  Require(hourly_phase_sd >= 0.0, "hourly_phase_sd must be >= 0");
  Require(initial_return_min >= 0.0 && initial_return_min <= initial_return_max &&
              initial_return_max <= 1.0,
          "initial return range must lie in [0, 1]");
  Require(return_smoothing >= 0.0 && return_smoothing <= 1.0,
          "return_smoothing must lie in [0, 1]");
  Require(train_window_days >= 1, "train_window_days must be >= 1");
  try {
    train.Validate();
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  if (policy.arm == Arm::kTreatment) {
    Require(policy.gamma > 0.0 && std::isfinite(policy.gamma), "gamma must be > 0");
  }
}

double Catalog::mean_quality() const {
  double total = 0.0;
  for (const CatalogItem& item : items) total += item.intrinsic_quality;
  return items.empty() ? 0.0 : total / static_cast<double>(items.size());
}

Catalog GenerateCatalog(const SimConfig& config) {
  Catalog catalog;
  catalog.n_creators = config.n_creators;
  catalog.n_clusters = config.n_clusters;
  catalog.intent_mode = config.intent_mode;
  StreamRng rng(config.seed, {kCatalogStream});
  const std::vector<double> cdf = CreatorCdf(config.n_creators, config.creator_popularity_exponent);
  std::vector<std::uint32_t> home_cluster(config.n_creators);
  for (auto& h : home_cluster) h = static_cast<std::uint32_t>(rng.Below(config.n_clusters));
  const std::size_t width = std::max<std::size_t>(6, std::to_string(config.catalog_size).size());
  catalog.items.reserve(config.catalog_size);
  for (std::size_t i = 0; i < config.catalog_size; ++i) {
    CatalogItem item;
    item.item_id = PaddedId('i', i, width);
    item.creator_id = DrawCreator(cdf, rng);
    item.cluster_id = rng.Uniform() < 0.7 ? home_cluster[item.creator_id]
                                          : static_cast<std::uint32_t>(rng.Below(config.n_clusters));
    item.intrinsic_quality =
        config.quality_min + (config.quality_max - config.quality_min) * rng.Uniform();
    item.length = std::exp(0.5 * rng.Normal());
    if (config.intent_mode == IntentMode::kCreator) item.aligned = {item.creator_id};
    catalog.items.push_back(std::move(item));
  }
  return catalog;
}

bool UserProfile::seen_all() const {
  return std::all_of(seen_creators.begin(), seen_creators.end(), [](char s) { return s != 0; });
}

UserProfile GenerateUser(const SimConfig& config, const Catalog& catalog, std::uint32_t user_id) {
  StreamRng rng(config.seed, {kProfileStream, user_id});
  UserProfile u;
  u.user_id = user_id;
  if (config.intent_mode == IntentMode::kNovelty) {
    u.base_logits = {config.intent_logit_mean + config.intent_logit_sd * rng.Normal(), 0.0};
  } else {
    u.base_logits.resize(config.n_creators);
    for (std::size_t c = 0; c < config.n_creators; ++c) {
      const double popularity = -config.creator_popularity_exponent * std::log(c + 1.0);
      u.base_logits[c] = popularity + config.intent_logit_sd * rng.Normal();
    }
  }
  u.hourly_amplitude = config.hourly_amplitude * (0.5 + rng.Uniform());
  u.phase = config.hourly_phase_sd * rng.Normal();
  u.progress_weight = config.progress_weight;
  u.patience = config.patience_min + rng.Below(config.patience_max - config.patience_min + 1);
  u.continuation_prob =
      config.continuation_min + (config.continuation_max - config.continuation_min) * rng.Uniform();
  u.return_propensity = config.initial_return_min +
                        (config.initial_return_max - config.initial_return_min) * rng.Uniform();
  u.seen_creators.assign(catalog.n_creators, 0);
  const std::vector<double> cdf = CreatorCdf(config.n_creators, config.creator_popularity_exponent);
  std::size_t seen = 0;
  std::size_t attempts = 0;
  while (seen < config.initial_seen_creators) {
    std::uint32_t c = DrawCreator(cdf, rng);
    // Popularity draws stall once the head is exhausted; fall back to uniform.
    if (++attempts > 50 * config.initial_seen_creators) {
      c = static_cast<std::uint32_t>(rng.Below(config.n_creators));
    }
    if (!u.seen_creators[c]) {
      u.seen_creators[c] = 1;
      ++seen;
    }
  }
  return u;
}

IntentDistribution sample_true_intent_dist(const UserProfile& user, int hour, double progress) {
  if (hour < 0 || hour > 23) throw InputError("hour must lie in 0..23");
  const std::size_t n = user.base_logits.size();
  std::vector<double> logits(n);
  const double angle = 2.0 * std::numbers::pi * hour / 24.0 + user.phase;
  for (std::size_t v = 0; v < n; ++v) {
    const double offset = 2.0 * std::numbers::pi * static_cast<double>(v) / static_cast<double>(n);
    logits[v] = user.base_logits[v] + user.hourly_amplitude * std::sin(angle + offset);
  }
  logits[0] += user.progress_weight * (progress - 0.5);
  const double top = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (double& z : logits) {
    z = std::exp(z - top);
    total += z;
  }
  for (double& z : logits) z /= total;
  return IntentDistribution(std::move(logits), Normalization::kNormalized);
}

void AnnotateForUser(Candidate& candidate, const CatalogItem& item, const Catalog& catalog,
                     const UserProfile& user) {
  candidate.novelty = !user.has_seen(item.creator_id);
  if (catalog.intent_mode == IntentMode::kNovelty) {
    candidate.aligned = {candidate.novelty ? kExploration : kFamiliarity};
  } else {
    candidate.aligned = item.aligned;
  }
}

CandidatePool generate_candidates(const Catalog& catalog, const UserProfile& user,
                                  std::size_t pool_size, double quality_noise, StreamRng& rng) {
  const std::size_t n = catalog.items.size();
  if (pool_size > n) throw InputError("generate_candidates: pool larger than catalog");
  CandidatePool pool;
  pool.catalog_index.reserve(pool_size);
  if (pool_size * 4 > n) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    for (std::size_t i = 0; i < pool_size; ++i) {
      std::swap(all[i], all[i + rng.Below(n - i)]);
      pool.catalog_index.push_back(all[i]);
    }
  } else {
    while (pool.catalog_index.size() < pool_size) {
      const std::size_t pick = rng.Below(n);
      if (std::find(pool.catalog_index.begin(), pool.catalog_index.end(), pick) ==
          pool.catalog_index.end()) {
        pool.catalog_index.push_back(pick);
      }
    }
  }
  pool.candidates.reserve(pool_size);
  for (std::size_t index : pool.catalog_index) {
    const CatalogItem& item = catalog.items[index];
    Candidate c;
    c.item_id = item.item_id;
    c.base_value = item.intrinsic_quality;
    c.quality = item.intrinsic_quality * std::exp(quality_noise * rng.Normal());
    AnnotateForUser(c, item, catalog, user);
    pool.candidates.push_back(std::move(c));
  }
  return pool;
}

SessionLog simulate_page_view(const UserProfile& user, std::span<const Candidate> served,
                              const PageContext& context) {
  if (served.empty()) throw InputError("simulate_page_view: empty slate");
  SessionLog log;
  log.user_id = user.user_id;
  log.day = context.day;
  log.session = context.session;
  log.hour = context.hour;
  log.slate.reserve(served.size());
  for (const Candidate& c : served) log.slate.push_back(c.item_id);

  const IntentDistribution truth = sample_true_intent_dist(user, context.hour, context.progress);
  const double u = KeyedUniform(context.page_key, {kIntentDraw});
  double cumulative = 0.0;
  log.true_intent = static_cast<IntentIndex>(truth.size() - 1);
  for (std::size_t v = 0; v < truth.size(); ++v) {
    cumulative += truth[v];
    if (u < cumulative) {
      log.true_intent = static_cast<IntentIndex>(v);
      break;
    }
  }

  const std::size_t depth = std::min(served.size(), user.patience);
  for (std::size_t m = 0; m < depth; ++m) {
    log.scanned_depth = m + 1;
    const Candidate& c = served[m];
    const double p = c.aligned_with(log.true_intent)
                         ? c.base_value
                         : context.off_intent_affinity * c.base_value;
    if (KeyedUniform(context.page_key, {kConsumeCoin, HashId(c.item_id)}) < p) {
      log.consumed_position = m;
      log.consumed_item = c.item_id;
      break;
    }
    if (m + 1 < depth &&
        KeyedUniform(context.page_key, {kContinueCoin, m}) >= user.continuation_prob) {
      break;
    }
  }
  return log;
}

std::optional<LabeledExample> label_from_log(const SessionLog& log,
                                             std::span<const Candidate> served,
                                             std::size_t num_intents,
                                             std::vector<double> features) {
  if (!log.consumed_position) return std::nullopt;
  if (*log.consumed_position >= served.size()) {
    throw InputError("label_from_log: consumed position outside the slate");
  }
  LabeledExample e;
  e.x = std::move(features);
  e.y.assign(num_intents, 0.0);
  for (IntentIndex v : served[*log.consumed_position].aligned) {
    if (v >= num_intents) throw InputError("label_from_log: intent outside the space");
    e.y[v] = 1.0;
  }
  return e;
}

double update_return_propensity(double propensity, double day_satisfaction, double rho) {
  if (!(day_satisfaction >= 0.0 && day_satisfaction <= 1.0)) {
    throw InputError("day_satisfaction must lie in [0, 1]");
  }
  return std::clamp(rho * propensity + (1.0 - rho) * day_satisfaction, 0.0, 1.0);
}

void update_return_propensity(UserProfile& user, double day_satisfaction, double rho) {
  user.return_propensity = update_return_propensity(user.return_propensity, day_satisfaction, rho);
}

std::vector<std::size_t> RankByQuality(std::span<const Candidate> candidates,
                                       std::size_t page_size, TieBreak tie_break) {
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t k = std::min(page_size, candidates.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return PrefersFirst(candidates[a].quality, candidates[a],
                                          candidates[b].quality, candidates[b], tie_break);
                    });
  order.resize(k);
  return order;
}

}  // namespace intentdiv
