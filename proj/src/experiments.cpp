#include "rconf/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

#include "rconf/central_sets.hpp"
#include "rconf/conformal.hpp"
#include "rconf/csv.hpp"
#include "rconf/parallel.hpp"
#include "rconf/random.hpp"
#include "rconf/version.hpp"

namespace rconf {

namespace {

using nlohmann::json;

// Stream ids keeping every stochastic ingredient on its own derived seed.
constexpr std::uint64_t kCoverageId = 11;
constexpr std::uint64_t kConsistencyId = 12;
constexpr std::uint64_t kHausdorffId = 13;
constexpr std::uint64_t kProxyId = 14;
constexpr std::uint64_t kContaminationId = 15;
constexpr std::uint64_t kLevelStream = 91;
constexpr std::uint64_t kMeasureStream = 92;
constexpr std::uint64_t kProbeStream = 93;
constexpr std::uint64_t kOutlierStream = 94;

[[noreturn]] void config_fail(const std::string& where, const std::string& what) {
  throw std::invalid_argument("config: " + where + ": " + what);
}

void require_keys(const json& obj, const std::string& where,
                  std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional) {
  for (const char* key : required) {
    if (!obj.contains(key)) config_fail(where, std::string("missing required key '") + key + "'");
  }
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : required) known = known || it.key() == key;
    for (const char* key : optional) known = known || it.key() == key;
    if (!known) config_fail(where, "unknown key '" + it.key() + "'");
  }
}

double get_number(const json& obj, const std::string& where, const char* key) {
  const json& v = obj.at(key);
  if (!v.is_number()) config_fail(where, std::string("'") + key + "' must be a number");
  return v.get<double>();
}

std::uint64_t get_uint(const json& obj, const std::string& where, const char* key) {
  const json& v = obj.at(key);
  if (!v.is_number_unsigned()) {
    config_fail(where, std::string("'") + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

Point get_point(const json& v, const std::string& where, const char* key) {
  if (!v.is_array() || v.empty()) {
    config_fail(where, std::string("'") + key + "' must be a non-empty array of numbers");
  }
  Point p;
  for (const json& e : v) {
    if (!e.is_number()) {
      config_fail(where, std::string("'") + key + "' must contain numbers only");
    }
    p.push_back(e.get<double>());
  }
  return p;
}

DistributionPtr parse_distribution(const json& spec, const std::string& where) {
  if (!spec.is_object() || !spec.contains("kind") || !spec.at("kind").is_string()) {
    config_fail(where, "distribution must be an object with a string 'kind'");
  }
  const std::string kind = spec.at("kind");
  if (kind == "point-mass") {
    require_keys(spec, where, {"kind", "center"}, {});
    return make_point_mass(get_point(spec.at("center"), where, "center"));
  }
  if (kind == "uniform-interval") {
    require_keys(spec, where, {"kind", "a", "b"}, {});
    return make_uniform_interval(get_number(spec, where, "a"), get_number(spec, where, "b"));
  }
  if (kind == "uniform-ball") {
    require_keys(spec, where, {"kind", "center", "radius"}, {});
    return make_uniform_ball(get_point(spec.at("center"), where, "center"),
                             get_number(spec, where, "radius"));
  }
  if (kind == "gaussian") {
    require_keys(spec, where, {"kind", "mean"}, {"sd", "covariance"});
    Point mean = get_point(spec.at("mean"), where, "mean");
    if (spec.contains("sd") == spec.contains("covariance")) {
      config_fail(where, "gaussian needs exactly one of 'sd' or 'covariance'");
    }
    if (spec.contains("sd")) return make_gaussian(std::move(mean), get_number(spec, where, "sd"));
    const json& cov = spec.at("covariance");
    if (!cov.is_array()) config_fail(where, "'covariance' must be an array of rows");
    std::vector<std::vector<double>> rows;
    for (const json& r : cov) rows.push_back(get_point(r, where, "covariance"));
    return make_gaussian(std::move(mean), rows);
  }
  if (kind == "gaussian-mixture") {
    require_keys(spec, where, {"kind", "weights", "components"}, {});
    const Point w = get_point(spec.at("weights"), where, "weights");
    const json& comps = spec.at("components");
    if (!comps.is_array()) config_fail(where, "'components' must be an array");
    std::vector<DistributionPtr> parts;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      parts.push_back(parse_distribution(comps[i], where + ".components[" + std::to_string(i) + "]"));
    }
    return make_gaussian_mixture(w, std::move(parts));
  }
  if (kind == "student-t") {
    require_keys(spec, where, {"kind", "df", "dim"}, {});
    return make_student_t(get_number(spec, where, "df"),
                          static_cast<std::size_t>(get_uint(spec, where, "dim")));
  }
  if (kind == "contaminated") {
    require_keys(spec, where, {"kind", "base", "fraction", "outlier"}, {});
    return make_contaminated(parse_distribution(spec.at("base"), where + ".base"),
                             get_number(spec, where, "fraction"),
                             parse_distribution(spec.at("outlier"), where + ".outlier"));
  }
  config_fail(where, "unknown distribution kind '" + kind + "'");
}

GridSpec parse_grid(const json& spec, const std::string& where) {
  if (!spec.is_object()) config_fail(where, "'grid' must be an object");
  require_keys(spec, where, {"lo", "hi", "counts"}, {});
  const Point lo = get_point(spec.at("lo"), where, "lo");
  const Point hi = get_point(spec.at("hi"), where, "hi");
  const json& counts = spec.at("counts");
  if (!counts.is_array()) config_fail(where, "'counts' must be an array");
  std::vector<std::size_t> c;
  for (const json& e : counts) {
    if (!e.is_number_unsigned()) config_fail(where, "'counts' must contain positive integers");
    c.push_back(e.get<std::size_t>());
  }
  return GridSpec(lo, hi, c);
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

ExperimentReport make_report(const ExperimentConfig& cfg, std::vector<MetricRow> rows,
                             const json& details, double wall) {
  ExperimentReport r;
  r.experiment = cfg.experiment;
  r.version = kVersion;
  r.config_echo = cfg.echo.empty() ? std::string("{}") : cfg.echo;
  r.details_json = details.dump();
  r.rows = std::move(rows);
  r.wall_seconds = wall;
  return r;
}

void check_common(const ExperimentConfig& cfg, std::size_t min_sizes) {
  if (!cfg.distribution) throw std::invalid_argument("experiment: distribution is not set");
  validate_alpha(cfg.alpha);
  if (cfg.sizes.size() < min_sizes) {
    throw std::invalid_argument("experiment: needs at least " + std::to_string(min_sizes) +
                                " sample sizes in 'n'");
  }
  for (std::size_t n : cfg.sizes) {
    if (n == 0) throw std::invalid_argument("experiment: sample sizes must be >= 1");
  }
}

void check_grid(const ExperimentConfig& cfg) {
  if (!cfg.has_grid) throw std::invalid_argument("experiment: 'grid' is required");
  if (cfg.grid.dim() != cfg.distribution->dim()) {
    throw std::invalid_argument("experiment: grid dimension does not match distribution");
  }
}

MeasureOptions level_options(const ExperimentConfig& cfg, std::uint64_t experiment_id) {
  return MeasureOptions{cfg.level_method, cfg.level_samples,
                        derive_seed(cfg.seed, {experiment_id, kLevelStream})};
}

MeasureOptions membership_options(const ExperimentConfig& cfg, std::uint64_t experiment_id) {
  return MeasureOptions{MeasureMethod::automatic, cfg.level_samples,
                        derive_seed(cfg.seed, {experiment_id, kMeasureStream})};
}

Dataset draw_dataset(const ReferenceDistribution& dist, std::size_t n, RandomStream& rs) {
  Dataset data(dist.dim());
  std::vector<double> buf(dist.dim());
  for (std::size_t i = 0; i < n; ++i) {
    dist.sample_into(rs, std::span<double>(buf));
    data.add(std::span<const double>(buf));
  }
  return data;
}

json level_to_json(const PopulationLevel& level) {
  json j{{"beta_alpha", level.beta_alpha}, {"alpha", level.alpha}, {"method", level.method}};
  if (level.method == "monte-carlo") {
    j["samples"] = level.samples;
    j["seed"] = level.seed;
  }
  return j;
}

// Mean and sample standard error of a value series (trials >= 1).
std::pair<double, std::optional<double>> mean_and_se(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / static_cast<double>(v.size());
  if (v.size() < 2) return {mean, std::nullopt};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  return {mean, sd / std::sqrt(static_cast<double>(v.size()))};
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) config_fail("root", "must be a JSON object");
  if (!doc.contains("experiment") || !doc.at("experiment").is_string()) {
    config_fail("root", "missing required key 'experiment'");
  }
  ExperimentConfig cfg;
  cfg.experiment = doc.at("experiment").get<std::string>();
  const std::string& where = cfg.experiment;

  if (cfg.experiment == "coverage") {
    require_keys(doc, where, {"experiment", "distribution", "n", "alpha", "trials", "seed"}, {});
  } else if (cfg.experiment == "consistency") {
    require_keys(doc, where, {"experiment", "distribution", "n", "alpha", "trials", "seed"},
                 {"beta_alpha"});
  } else if (cfg.experiment == "hausdorff") {
    require_keys(doc, where, {"experiment", "distribution", "n", "alpha", "trials", "seed", "grid"},
                 {"beta_alpha"});
  } else if (cfg.experiment == "proxy") {
    require_keys(doc, where, {"experiment", "distribution", "n", "alpha", "seed", "grid"},
                 {"beta", "k"});
  } else if (cfg.experiment == "contamination") {
    require_keys(doc, where,
                 {"experiment", "distribution", "n", "alpha", "seed", "grid", "contamination"},
                 {"beta"});
  } else {
    config_fail("root", "unknown experiment '" + cfg.experiment + "'");
  }

  cfg.distribution = parse_distribution(doc.at("distribution"), where + ".distribution");

  const json& sizes = doc.at("n");
  if (!sizes.is_array() || sizes.empty()) config_fail(where, "'n' must be a non-empty array");
  for (const json& e : sizes) {
    if (!e.is_number_unsigned() || e.get<std::uint64_t>() == 0) {
      config_fail(where, "'n' must contain positive integers");
    }
    cfg.sizes.push_back(e.get<std::size_t>());
  }

  cfg.alpha = get_number(doc, where, "alpha");
  validate_alpha(cfg.alpha);
  cfg.seed = get_uint(doc, where, "seed");

  if (doc.contains("trials")) {
    cfg.trials = static_cast<std::size_t>(get_uint(doc, where, "trials"));
    const std::size_t floor_trials = cfg.experiment == "hausdorff" ? 1 : 100;
    if (cfg.trials < floor_trials) {
      config_fail(where, "'trials' must be >= " + std::to_string(floor_trials));
    }
  }
  if (doc.contains("grid")) {
    cfg.grid = parse_grid(doc.at("grid"), where + ".grid");
    cfg.has_grid = true;
  }
  if (doc.contains("beta_alpha")) {
    const json& ba = doc.at("beta_alpha");
    if (!ba.is_object()) config_fail(where, "'beta_alpha' must be an object");
    require_keys(ba, where + ".beta_alpha", {}, {"method", "samples"});
    if (ba.contains("method")) {
      const std::string m = ba.at("method").is_string() ? ba.at("method").get<std::string>() : "";
      if (m == "auto") {
        cfg.level_method = MeasureMethod::automatic;
      } else if (m == "analytic") {
        cfg.level_method = MeasureMethod::analytic;
      } else if (m == "monte-carlo") {
        cfg.level_method = MeasureMethod::monte_carlo;
      } else {
        config_fail(where + ".beta_alpha", "method must be auto, analytic, or monte-carlo");
      }
    }
    if (ba.contains("samples")) {
      cfg.level_samples = static_cast<std::size_t>(get_uint(ba, where + ".beta_alpha", "samples"));
    }
  }
  if (doc.contains("beta")) {
    const double b = get_number(doc, where, "beta");
    if (!(b >= 0.0)) config_fail(where, "'beta' must be >= 0");
    cfg.beta = b;
  }
  if (doc.contains("k")) {
    const std::uint64_t k = get_uint(doc, where, "k");
    if (k == 0) config_fail(where, "'k' must be >= 1");
    cfg.k = static_cast<std::size_t>(k);
  }
  if (doc.contains("contamination")) {
    const json& ct = doc.at("contamination");
    if (!ct.is_object()) config_fail(where, "'contamination' must be an object");
    require_keys(ct, where + ".contamination", {"fraction"}, {"magnitude"});
    const double f = get_number(ct, where + ".contamination", "fraction");
    if (!(f >= 0.0) || !(f < 0.5)) {
      config_fail(where + ".contamination", "'fraction' must lie in [0, 1/2)");
    }
    cfg.contamination_fraction = f;
    if (ct.contains("magnitude")) {
      const double m = get_number(ct, where + ".contamination", "magnitude");
      if (!(m > 0.0) || !std::isfinite(m)) {
        config_fail(where + ".contamination", "'magnitude' must be positive and finite");
      }
      cfg.contamination_magnitude = m;
    }
  }
  if (cfg.experiment == "consistency" && cfg.sizes.size() < 2) {
    config_fail(where, "'n' needs at least two sample sizes");
  }
  cfg.echo = doc.dump();
  return cfg;
}

ExperimentReport run_coverage(const ExperimentConfig& cfg) {
  Timer timer;
  check_common(cfg, 1);
  if (cfg.trials < 100) throw std::invalid_argument("coverage: trials must be >= 100");
  const ReferenceDistribution& dist = *cfg.distribution;
  const ConformalConfig ccfg{cfg.alpha};
  std::vector<MetricRow> rows;
  for (std::size_t n : cfg.sizes) {
    std::vector<std::uint8_t> hit(cfg.trials, 0);
    parallel_for(static_cast<std::int64_t>(cfg.trials), [&](std::int64_t t) {
      RandomStream rs(derive_seed(cfg.seed, {kCoverageId, n, static_cast<std::uint64_t>(t)}));
      const Dataset data = draw_dataset(dist, n, rs);
      std::vector<double> x(dist.dim());
      dist.sample_into(rs, std::span<double>(x));
      hit[static_cast<std::size_t>(t)] =
          region_membership(data, std::span<const double>(x), ccfg) ? 1 : 0;
    });
    std::size_t covered = 0;
    for (auto v : hit) covered += v;
    const double p = static_cast<double>(covered) / static_cast<double>(cfg.trials);
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(cfg.trials));
    rows.push_back({n, "coverage", p, se, cfg.trials});
  }
  const json details{{"alpha", cfg.alpha}, {"target", 1.0 - cfg.alpha}};
  return make_report(cfg, std::move(rows), details, timer.seconds());
}

ExperimentReport run_consistency(const ExperimentConfig& cfg) {
  Timer timer;
  check_common(cfg, 2);
  if (cfg.trials < 100) throw std::invalid_argument("consistency: trials must be >= 100");
  const ReferenceDistribution& dist = *cfg.distribution;
  const PopulationLevel level = beta_alpha(dist, cfg.alpha, level_options(cfg, kConsistencyId));
  const MeasureOptions mopts = membership_options(cfg, kConsistencyId);
  std::vector<MetricRow> rows;
  std::vector<Estimate> estimates;
  for (std::size_t n : cfg.sizes) {
    const Estimate est = sym_diff_probability(dist, n, cfg.alpha, cfg.trials,
                                              derive_seed(cfg.seed, {kConsistencyId, n}), level,
                                              mopts);
    estimates.push_back(est);
    rows.push_back({n, "sym_diff", est.value, est.std_error, est.trials});
  }
  // Trend between the smallest and the largest configured n.
  const auto lo_it = std::min_element(cfg.sizes.begin(), cfg.sizes.end());
  const auto hi_it = std::max_element(cfg.sizes.begin(), cfg.sizes.end());
  const Estimate& first = estimates[static_cast<std::size_t>(lo_it - cfg.sizes.begin())];
  const Estimate& last = estimates[static_cast<std::size_t>(hi_it - cfg.sizes.begin())];
  const double combined_se =
      std::sqrt(first.std_error * first.std_error + last.std_error * last.std_error);
  const bool decreasing = last.value < first.value - 2.0 * combined_se;
  const json details{{"beta_alpha", level_to_json(level)},
                     {"trend_decreasing", decreasing},
                     {"drop", first.value - last.value},
                     {"combined_se", combined_se}};
  return make_report(cfg, std::move(rows), details, timer.seconds());
}

ExperimentReport run_hausdorff(const ExperimentConfig& cfg) {
  Timer timer;
  check_common(cfg, 1);
  check_grid(cfg);
  if (cfg.trials < 1) throw std::invalid_argument("hausdorff: trials must be >= 1");
  const ReferenceDistribution& dist = *cfg.distribution;
  const PopulationLevel level = beta_alpha(dist, cfg.alpha, level_options(cfg, kHausdorffId));
  const MeasureOptions mopts = membership_options(cfg, kHausdorffId);
  const GridMask population = q_population_on_grid(dist, cfg.grid, level.beta_alpha, mopts);
  if (population.count_true() == 0) {
    throw std::invalid_argument(
        "hausdorff: the population set misses every grid node; enlarge the grid bounding box");
  }
  std::vector<MetricRow> rows;
  json per_n = json::array();
  for (std::size_t n : cfg.sizes) {
    std::vector<double> values(cfg.trials);
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      RandomStream rs(derive_seed(cfg.seed, {kHausdorffId, n, t}));
      const Dataset data = draw_dataset(dist, n, rs);
      const GridMask empirical = q_hat_on_grid(data, cfg.grid, level.beta_alpha);
      values[t] = hausdorff_distance_grid(empirical, population, cfg.grid);
    }
    const auto [mean, se] = mean_and_se(values);
    rows.push_back({n, "hausdorff_mean", mean, se, cfg.trials});
    per_n.push_back(json{{"n", n}, {"values", values}});
  }
  const json details{{"beta_alpha", level_to_json(level)},
                     {"grid_spacing", cfg.grid.spacing()},
                     {"population_volume", population.volume_fraction()},
                     {"per_n", per_n}};
  return make_report(cfg, std::move(rows), details, timer.seconds());
}

ExperimentReport run_proxy_comparison(const ExperimentConfig& cfg) {
  Timer timer;
  check_common(cfg, 1);
  check_grid(cfg);
  const ReferenceDistribution& dist = *cfg.distribution;
  std::vector<MetricRow> rows;
  json per_n = json::array();
  for (std::size_t n : cfg.sizes) {
    if (n < 2) throw std::invalid_argument("proxy: sample sizes must be >= 2");
    RandomStream rs(derive_seed(cfg.seed, {kProxyId, n}));
    const Dataset data = draw_dataset(dist, n, rs);
    const double beta_hat = cfg.beta ? *cfg.beta : empirical_level(data, cfg.alpha);
    const std::size_t k = cfg.k ? *cfg.k : majority_rank(n).k - 1;
    const GridMask region = region_on_grid(data, cfg.grid, ConformalConfig{cfg.alpha});
    const GridMask qhat = q_hat_on_grid(data, cfg.grid, beta_hat);
    const GridMask proxy = proxy_on_grid(data, cfg.grid, beta_hat, k);
    for (std::size_t j = 0; j < proxy.values.size(); ++j) {
      if (proxy.values[j] && !qhat.values[j]) {
        throw std::runtime_error(
            "proxy: certified ball node escapes the cover-count set (soundness violation)");
      }
    }
    rows.push_back({n, "region_volume", region.volume_fraction(), std::nullopt, std::nullopt});
    rows.push_back({n, "q_hat_volume", qhat.volume_fraction(), std::nullopt, std::nullopt});
    rows.push_back({n, "proxy_volume", proxy.volume_fraction(), std::nullopt, std::nullopt});
    rows.push_back({n, "beta_hat", beta_hat, std::nullopt, std::nullopt});
    per_n.push_back(json{{"n", n},
                         {"beta_hat", beta_hat},
                         {"local_rank", k},
                         {"beta_source", cfg.beta ? "config" : "empirical-level"}});
  }
  const json details{{"alpha", cfg.alpha}, {"per_n", per_n}};
  return make_report(cfg, std::move(rows), details, timer.seconds());
}

ExperimentReport run_contamination(const ExperimentConfig& cfg) {
  Timer timer;
  check_common(cfg, 1);
  check_grid(cfg);
  if (!cfg.contamination_fraction) {
    throw std::invalid_argument("contamination: 'contamination.fraction' is required");
  }
  const double fraction = *cfg.contamination_fraction;
  if (!(fraction >= 0.0) || !(fraction < 0.5)) {
    throw std::invalid_argument("contamination: fraction must lie in [0, 1/2)");
  }
  const double magnitude = cfg.contamination_magnitude.value_or(1000.0);
  const double magnitude_large = magnitude * 1e6;
  const ReferenceDistribution& dist = *cfg.distribution;
  const std::size_t d = dist.dim();
  const Point center = dist.center_hint();
  std::vector<MetricRow> rows;
  json per_n = json::array();
  for (std::size_t n : cfg.sizes) {
    RandomStream rs(derive_seed(cfg.seed, {kContaminationId, n}));
    const Dataset clean = draw_dataset(dist, n, rs);
    const auto replaced =
        static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));

    // Replacement indices and outlier directions; the two contaminated
    // copies share both, differing only in outlier magnitude.
    RandomStream ro(derive_seed(cfg.seed, {kContaminationId, n, kOutlierStream}));
    const std::vector<std::size_t> order = ro.permutation(n);
    std::vector<Point> directions(replaced);
    for (auto& u : directions) {
      u.resize(d);
      double norm2 = 0.0;
      do {
        norm2 = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
          u[c] = ro.normal();
          norm2 += u[c] * u[c];
        }
      } while (norm2 == 0.0);
      const double inv = 1.0 / std::sqrt(norm2);
      for (std::size_t c = 0; c < d; ++c) u[c] *= inv;
    }
    const auto contaminate = [&](double mag) {
      Dataset out = clean;
      for (std::size_t i = 0; i < replaced; ++i) {
        double* row = out.mutable_flat().data() + order[i] * d;
        for (std::size_t c = 0; c < d; ++c) row[c] = center[c] + mag * directions[i][c];
      }
      return out;
    };
    const Dataset contaminated = contaminate(magnitude);
    const Dataset contaminated_large = contaminate(magnitude_large);

    // Probes: the coordinatewise (lower) median of the clean sample plus
    // nine fresh draws.
    std::vector<Point> probes;
    {
      Point median(d);
      std::vector<double> axis(n);
      for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t i = 0; i < n; ++i) axis[i] = clean[i][c];
        const std::size_t mid = (n - 1) / 2;
        std::nth_element(axis.begin(), axis.begin() + static_cast<std::ptrdiff_t>(mid),
                         axis.end());
        median[c] = axis[mid];
      }
      probes.push_back(std::move(median));
      RandomStream rp(derive_seed(cfg.seed, {kContaminationId, n, kProbeStream}));
      for (int i = 0; i < 9; ++i) {
        Point p(d);
        dist.sample_into(rp, std::span<double>(p));
        probes.push_back(std::move(p));
      }
    }
    std::vector<double> scores_clean, scores_m, scores_large;
    double max_abs_diff = 0.0;
    bool identical = true;
    for (const Point& p : probes) {
      scores_clean.push_back(half_mass_radius(p, clean));
      scores_m.push_back(half_mass_radius(p, contaminated));
      scores_large.push_back(half_mass_radius(p, contaminated_large));
      max_abs_diff = std::max(max_abs_diff, std::abs(scores_m.back() - scores_large.back()));
      identical = identical && scores_m.back() == scores_large.back();
    }
    const double beta_hat = cfg.beta ? *cfg.beta : empirical_level(clean, cfg.alpha);
    const GridMask mask_clean = q_hat_on_grid(clean, cfg.grid, beta_hat);
    const GridMask mask_cont = q_hat_on_grid(contaminated, cfg.grid, beta_hat);
    std::size_t diff = 0;
    for (std::size_t j = 0; j < mask_clean.values.size(); ++j) {
      diff += (mask_clean.values[j] != mask_cont.values[j]) ? 1 : 0;
    }
    const double sym_diff_volume =
        static_cast<double>(diff) / static_cast<double>(mask_clean.values.size());

    rows.push_back({n, "scores_identical", identical ? 1.0 : 0.0, std::nullopt, std::nullopt});
    rows.push_back({n, "score_max_abs_diff", max_abs_diff, std::nullopt, std::nullopt});
    rows.push_back({n, "mask_sym_diff_volume", sym_diff_volume, std::nullopt, std::nullopt});
    rows.push_back({n, "beta_hat", beta_hat, std::nullopt, std::nullopt});
    rows.push_back({n, "replaced", static_cast<double>(replaced), std::nullopt, std::nullopt});
    per_n.push_back(json{{"n", n},
                         {"replaced", replaced},
                         {"magnitudes", {magnitude, magnitude_large}},
                         {"scores_clean", scores_clean},
                         {"scores_contaminated", scores_m},
                         {"scores_contaminated_large", scores_large},
                         {"beta_hat", beta_hat}});
  }
  const json details{{"fraction", fraction},
                     {"magnitude", magnitude},
                     {"magnitude_large", magnitude_large},
                     {"per_n", per_n}};
  return make_report(cfg, std::move(rows), details, timer.seconds());
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  if (cfg.experiment == "coverage") return run_coverage(cfg);
  if (cfg.experiment == "consistency") return run_consistency(cfg);
  if (cfg.experiment == "hausdorff") return run_hausdorff(cfg);
  if (cfg.experiment == "proxy") return run_proxy_comparison(cfg);
  if (cfg.experiment == "contamination") return run_contamination(cfg);
  throw std::invalid_argument("experiment: unknown kind '" + cfg.experiment + "'");
}

std::string report_to_json(const ExperimentReport& report) {
  json j;
  j["experiment"] = report.experiment;
  j["version"] = report.version;
  j["config"] = report.config_echo.empty() ? json::object() : json::parse(report.config_echo);
  j["details"] = report.details_json.empty() ? json::object() : json::parse(report.details_json);
  j["wall_seconds"] = report.wall_seconds;
  json rows = json::array();
  for (const MetricRow& row : report.rows) {
    json o{{"n", row.n}, {"metric", row.metric}, {"value", row.value}};
    if (row.std_error) o["std_error"] = *row.std_error;
    if (row.trials) o["trials"] = *row.trials;
    rows.push_back(o);
  }
  j["metrics"] = rows;
  return j.dump(2) + "\n";
}

std::string report_to_csv(const ExperimentReport& report) {
  std::string out = "n,metric,value,std_error,trials\n";
  for (const MetricRow& row : report.rows) {
    out += std::to_string(row.n);
    out += ',';
    out += row.metric;
    out += ',';
    out += format_double(row.value);
    out += ',';
    if (row.std_error) out += format_double(*row.std_error);
    out += ',';
    if (row.trials) out += std::to_string(*row.trials);
    out += '\n';
  }
  return out;
}

}  // namespace rconf
