// Command-line front end: half-mass scores, conformal p-values and regions,
// empirical central sets on grids, and config-driven experiments.
//
// Exit codes: 0 success, 1 runtime/numeric error, 2 usage/config error.
// stdout carries data only; human messages go to stderr.

#include <cstddef>
#include <exception>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rconf/central_sets.hpp"
#include "rconf/conformal.hpp"
#include "rconf/csv.hpp"
#include "rconf/experiments.hpp"
#include "rconf/geometry.hpp"
#include "rconf/parallel.hpp"
#include "rconf/version.hpp"

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_number(const std::string& cell, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": '" + cell + "' is not a number");
  }
}

rconf::Point parse_point(const std::string& text, const std::string& what) {
  rconf::Point p;
  for (const std::string& cell : split(text, ',')) p.push_back(parse_number(cell, what));
  return p;
}

// "lo1,lo2:hi1,hi2:c1,c2" -> box corners plus per-axis node counts.
rconf::GridSpec parse_grid_arg(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) {
    throw std::invalid_argument("--grid expects lo1,..:hi1,..:count1,.. (three ':' groups)");
  }
  const rconf::Point lo = parse_point(parts[0], "--grid lo");
  const rconf::Point hi = parse_point(parts[1], "--grid hi");
  std::vector<std::size_t> counts;
  for (const std::string& cell : split(parts[2], ',')) {
    const double v = parse_number(cell, "--grid counts");
    if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
      throw std::invalid_argument("--grid counts must be non-negative integers");
    }
    counts.push_back(static_cast<std::size_t>(v));
  }
  return rconf::GridSpec(lo, hi, counts);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string balls_to_csv(const rconf::Dataset& data,
                         const std::vector<rconf::CertifiedBall>& balls) {
  std::string out;
  for (std::size_t c = 0; c < data.dim(); ++c) out += "center_" + std::to_string(c + 1) + ",";
  out += "radius\n";
  for (const auto& ball : balls) {
    const auto center = data[ball.index];
    for (std::size_t c = 0; c < data.dim(); ++c) {
      out += rconf::format_double(center[c]);
      out += ',';
    }
    out += rconf::format_double(ball.radius);
    out += '\n';
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robust conformal prediction with the half-mass (majority k-NN) score"};
  app.set_version_flag("--version", rconf::kVersion);
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = hardware concurrency)");

  std::string data_path, z_text, grid_text, out_path, config_path;
  double alpha = 0.1;
  double beta = 0.0;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;

  CLI::App* score = app.add_subcommand("score", "half-mass radius of a point against a dataset");
  score->add_option("--data", data_path, "points CSV")->required();
  score->add_option("--z", z_text, "candidate point, comma-separated")->required();

  CLI::App* pvalue = app.add_subcommand("pvalue", "conformal p-value of a candidate point");
  pvalue->add_option("--data", data_path, "points CSV")->required();
  pvalue->add_option("--z", z_text, "candidate point, comma-separated")->required();

  CLI::App* region = app.add_subcommand("region", "prediction-region membership or grid mask");
  region->add_option("--data", data_path, "points CSV")->required();
  region->add_option("--alpha", alpha, "miscoverage level in (0,1)")->required();
  region->add_option("--z", z_text, "candidate point, comma-separated");
  region->add_option("--grid", grid_text, "lo1,..:hi1,..:count1,..");
  region->add_option("--out", out_path, "mask CSV path (grid mode)");

  CLI::App* sets = app.add_subcommand("sets", "central-set masks and certified balls at a level");
  sets->add_option("--data", data_path, "points CSV")->required();
  sets->add_option("--beta", beta, "level beta >= 0")->required();
  sets->add_option("--k", k, "local rank for the proxy (default floor(n/2))");
  sets->add_option("--grid", grid_text, "lo1,..:hi1,..:count1,..")->required();
  sets->add_option("--out", out_path, "output prefix")->required();

  CLI::App* experiment = app.add_subcommand("experiment", "run a JSON-configured experiment");
  experiment->add_option("--config", config_path, "experiment config JSON")->required();
  experiment->add_option("--out", out_path, "output prefix (.json and .csv)")->required();
  experiment->add_option("--seed", seed, "override the config seed")->each([&](const std::string&) {
    seed_set = true;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    rconf::set_default_threads(threads);
    if (score->parsed()) {
      const rconf::Dataset data = rconf::ingest_csv(data_path);
      const rconf::Point z = parse_point(z_text, "--z");
      const double radius = rconf::half_mass_radius(z, data);
      std::cout << "radius=" << rconf::format_double(radius) << "\n"
                << "k=" << rconf::majority_rank(data.size()).k << "\n";
    } else if (pvalue->parsed()) {
      const rconf::Dataset data = rconf::ingest_csv(data_path);
      const rconf::Point z = parse_point(z_text, "--z");
      const rconf::PValue p = rconf::conformal_p_value(data, z);
      // reduced fraction: same rational, canonical spelling (2/2 -> 1/1)
      const std::size_t g = std::gcd(p.count, p.total);
      std::cout << p.count / g << "/" << p.total / g << "\n"
                << rconf::format_double(p.value()) << "\n";
    } else if (region->parsed()) {
      rconf::validate_alpha(alpha);
      const rconf::Dataset data = rconf::ingest_csv(data_path);
      const bool has_z = !z_text.empty();
      const bool has_grid = !grid_text.empty();
      if (has_z == has_grid) {
        throw std::invalid_argument("region: provide exactly one of --z or --grid");
      }
      if (has_z) {
        const rconf::Point z = parse_point(z_text, "--z");
        std::cout << (rconf::region_membership(data, z, {alpha}) ? 1 : 0) << "\n";
      } else {
        if (out_path.empty()) throw std::invalid_argument("region: grid mode needs --out");
        const rconf::GridSpec grid = parse_grid_arg(grid_text);
        rconf::write_mask_csv(rconf::region_on_grid(data, grid, {alpha}), out_path);
        std::cerr << "wrote " << out_path << "\n";
      }
    } else if (sets->parsed()) {
      const rconf::Dataset data = rconf::ingest_csv(data_path);
      if (!(beta >= 0.0)) throw std::invalid_argument("sets: --beta must be >= 0");
      const rconf::GridSpec grid = parse_grid_arg(grid_text);
      const std::size_t local_k = k > 0 ? k : rconf::majority_rank(data.size()).k - 1;
      rconf::write_mask_csv(rconf::q_hat_on_grid(data, grid, beta), out_path + "_qhat.csv");
      rconf::write_mask_csv(rconf::s_hat_on_grid(data, grid, beta), out_path + "_shat.csv");
      rconf::write_mask_csv(rconf::proxy_on_grid(data, grid, beta, local_k),
                            out_path + "_proxy.csv");
      const rconf::ProxyRadii radii = rconf::knn_local_radii(data, local_k);
      rconf::write_text_file(out_path + "_balls.csv",
                             balls_to_csv(data, rconf::certified_balls(data, beta, radii)));
      std::cerr << "wrote " << out_path << "_{qhat,shat,proxy,balls}.csv\n";
    } else if (experiment->parsed()) {
      rconf::ExperimentConfig cfg = rconf::parse_experiment_config(read_file(config_path));
      if (seed_set) {
        cfg.seed = seed;
        nlohmann::json echo = nlohmann::json::parse(cfg.echo);
        echo["seed"] = seed;
        cfg.echo = echo.dump();
      }
      const rconf::ExperimentReport report = rconf::run_experiment(cfg);
      rconf::write_text_file(out_path + ".json", rconf::report_to_json(report));
      rconf::write_text_file(out_path + ".csv", rconf::report_to_csv(report));
      std::cerr << "wrote " << out_path << ".json and " << out_path << ".csv\n";
    }
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
