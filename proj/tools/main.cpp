// blockshrink: wavelet block-thresholding experiments and denoising.
//
// Subcommands reproduce the simulation study (gamma-sweep, lj-dist, rates)
// as CSV files with flat key=value manifests, and `denoise` applies the
// truncated block thresholding estimator to a signal file.  Exit codes:
// 0 success, 2 usage error, 3 data error, 4 internal error.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "blockshrink/risk.hpp"
#include "blockshrink/version.hpp"
#include "csv_io.hpp"

using namespace blockshrink;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

std::vector<double> gamma_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw std::invalid_argument("invalid gamma grid");
  std::vector<double> grid;
  for (int i = 0;; ++i) {
    const double g = lo + step * i;
    if (g > hi + 1e-9) break;
    grid.push_back(g);
  }
  return grid;
}

std::vector<std::uint64_t> parse_n_grid(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoull(item));
  }
  if (out.empty()) throw std::invalid_argument("empty n grid");
  return out;
}

// "sine" or "block-spike:beta:Q:level" where level may be "auto"
struct FunctionArg {
  std::string text = "sine";

  bool is_sine() const { return text == "sine"; }

  FunctionSpec resolve(std::uint64_t n, double sigma, double gamma) const {
    if (is_sine()) return SineSpec{};
    std::stringstream ss(text);
    std::string kind, beta_s, q_s, level_s;
    std::getline(ss, kind, ':');
    std::getline(ss, beta_s, ':');
    std::getline(ss, q_s, ':');
    std::getline(ss, level_s, ':');
    if (kind != "block-spike" || beta_s.empty() || q_s.empty() || level_s.empty())
      throw std::invalid_argument("function must be 'sine' or 'block-spike:beta:Q:level'");
    const double beta = std::stod(beta_s);
    const double q = std::stod(q_s);
    const int b = block_length(n);
    const int level = level_s == "auto" ? matched_spike_level(beta, q, n, sigma, gamma)
                                        : std::stoi(level_s);
    return BlockSpike{beta, q, level, b};
  }
};

std::string manifest_path(const std::string& out) { return out + ".manifest"; }

// ----------------------------------------------------------------------
// gamma-sweep

struct GammaSweepParams {
  std::uint64_t n = 1024;
  double sigma = 0.1;
  double gamma_min = 3.0;
  double gamma_max = 15.0;
  double gamma_step = 0.5;
  int reps = 1000;
  std::uint64_t seed = 1;
  std::string variant = "truncated-block";
  bool block_zeroing = true;
  int threads = 0;
  std::string out = "gamma_sweep.csv";
};

void run_gamma_sweep(const GammaSweepParams& p) {
  Timer timer;
  Scenario sc;
  sc.n = p.n;
  sc.sigma = p.sigma;
  sc.gammas = gamma_grid(p.gamma_min, p.gamma_max, p.gamma_step);
  sc.config.variant = variant_from_name(p.variant);
  sc.config.block_zeroing = p.block_zeroing;
  sc.reps = p.reps;
  sc.master_seed = p.seed;
  sc.threads = p.threads;
  const std::vector<RiskSummary> summaries = monte_carlo(sc);

  cli::CsvWriter csv(p.out);
  csv.header("gamma,n,sigma,reps,l2_rmse,l2_se,linf_mean,linf_se");
  for (const RiskSummary& s : summaries)
    csv.row({cli::format_value(s.gamma), std::to_string(s.n), cli::format_value(s.sigma),
             std::to_string(s.reps), cli::format_value(std::sqrt(s.l2_mean)),
             cli::format_value(s.l2_se), cli::format_value(s.linf_mean),
             cli::format_value(s.linf_se)});
  csv.close();

  cli::Manifest m;
  m.set("tool", std::string("blockshrink"));
  m.set("version", std::string(version));
  m.set("subcommand", std::string("gamma-sweep"));
  m.set("n", p.n);
  m.set("sigma", p.sigma);
  m.set("gamma_min", p.gamma_min);
  m.set("gamma_max", p.gamma_max);
  m.set("gamma_step", p.gamma_step);
  m.set("reps", p.reps);
  m.set("seed", p.seed);
  m.set("variant", p.variant);
  m.set("block_zeroing", p.block_zeroing);
  m.set("out", p.out);
  m.set("duration_seconds", timer.seconds());
  m.write(manifest_path(p.out));
  std::cout << "wrote " << p.out << " (" << summaries.size() << " rows)\n";
}

// ----------------------------------------------------------------------
// lj-dist

struct LjDistParams {
  std::uint64_t n = 1024;
  double sigma = 0.1;
  int reps = 10000;
  std::uint64_t seed = 1;
  double gamma = 7.0;
  int threads = 0;
  std::string out = "lj_dist.csv";
};

void run_lj_dist(const LjDistParams& p) {
  Timer timer;
  Scenario sc;
  sc.n = p.n;
  sc.sigma = p.sigma;
  sc.gammas = {p.gamma};
  sc.reps = p.reps;
  sc.master_seed = p.seed;
  sc.threads = p.threads;
  const LjDistribution dist = lj_distribution(sc);

  cli::CsvWriter csv(p.out);
  csv.header("level,L_value,probability");
  for (int j = -1; j + 1 < static_cast<int>(dist.per_level.size()); ++j) {
    const auto& level_map = dist.per_level[static_cast<std::size_t>(j + 1)];
    for (int v = 1; v <= dist.block_len; ++v)
      csv.row({std::to_string(j), std::to_string(v), cli::format_value(level_map.at(v))});
    csv.row({std::to_string(j), "inf", cli::format_value(level_map.at(l_infinity))});
  }
  csv.close();

  cli::Manifest m;
  m.set("tool", std::string("blockshrink"));
  m.set("version", std::string(version));
  m.set("subcommand", std::string("lj-dist"));
  m.set("n", p.n);
  m.set("sigma", p.sigma);
  m.set("reps", p.reps);
  m.set("seed", p.seed);
  m.set("gamma", p.gamma);
  m.set("out", p.out);
  m.set("duration_seconds", timer.seconds());
  m.write(manifest_path(p.out));
  std::cout << "wrote " << p.out << " (block length " << dist.block_len << ")\n";
}

// ----------------------------------------------------------------------
// rates

struct RatesParams {
  std::string n_grid = "256,512,1024,2048,4096,8192,16384,32768,65536";
  double sigma = 0.1;
  double gamma = 7.0;
  int reps = 200;
  std::uint64_t seed = 1;
  std::string function = "sine";
  std::string variant = "truncated-block";
  std::string compare_variant;  // empty: no comparison columns
  bool block_zeroing = true;
  int threads = 0;
  std::string out = "rates.csv";
};

void run_rates(const RatesParams& p) {
  Timer timer;
  const std::vector<std::uint64_t> ns = parse_n_grid(p.n_grid);
  FunctionArg fn{p.function};

  std::vector<double> l2(ns.size()), linf(ns.size());
  std::vector<double> l2_se(ns.size()), linf_se(ns.size());
  std::vector<double> l2_cmp(ns.size()), linf_cmp(ns.size());
  const bool compare = !p.compare_variant.empty();

  for (std::size_t i = 0; i < ns.size(); ++i) {
    Scenario sc;
    sc.n = ns[i];
    sc.sigma = p.sigma;
    sc.function = fn.resolve(ns[i], p.sigma, p.gamma);
    sc.gammas = {p.gamma};
    sc.config.variant = variant_from_name(p.variant);
    sc.config.block_zeroing = p.block_zeroing;
    sc.reps = p.reps;
    sc.master_seed = p.seed;
    sc.threads = p.threads;
    const RiskSummary s = monte_carlo(sc)[0];
    l2[i] = s.l2_mean;
    l2_se[i] = s.l2_se;
    linf[i] = s.linf_mean;
    linf_se[i] = s.linf_se;
    if (compare) {
      sc.config.variant = variant_from_name(p.compare_variant);
      const RiskSummary c = monte_carlo(sc)[0];
      l2_cmp[i] = c.l2_mean;
      linf_cmp[i] = c.linf_mean;
    }
  }

  const RateFit l2_fit = rate_regression(ns, l2, RateScale::log_n);
  const RateFit linf_fit = rate_regression(ns, linf, RateScale::log_n_over_log_n);

  cli::CsvWriter csv(p.out);
  std::string header = "n,l2_mse,l2_se,linf_mean,linf_se";
  if (compare) header += ",l2_mse_cmp,linf_mean_cmp,linf_ratio";
  csv.header(header);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    std::vector<std::string> row{std::to_string(ns[i]), cli::format_value(l2[i]),
                                 cli::format_value(l2_se[i]), cli::format_value(linf[i]),
                                 cli::format_value(linf_se[i])};
    if (compare) {
      row.push_back(cli::format_value(l2_cmp[i]));
      row.push_back(cli::format_value(linf_cmp[i]));
      row.push_back(cli::format_value(linf_cmp[i] / linf[i]));
    }
    csv.row(row);
  }
  csv.comment("l2_slope=" + cli::format_value(l2_fit.slope) +
              " l2_slope_se=" + cli::format_value(l2_fit.se) +
              " linf_slope=" + cli::format_value(linf_fit.slope) +
              " linf_slope_se=" + cli::format_value(linf_fit.se));
  csv.close();

  cli::Manifest m;
  m.set("tool", std::string("blockshrink"));
  m.set("version", std::string(version));
  m.set("subcommand", std::string("rates"));
  m.set("n_grid", p.n_grid);
  m.set("sigma", p.sigma);
  m.set("gamma", p.gamma);
  m.set("reps", p.reps);
  m.set("seed", p.seed);
  m.set("function", p.function);
  m.set("variant", p.variant);
  m.set("compare_variant", p.compare_variant);
  m.set("block_zeroing", p.block_zeroing);
  m.set("out", p.out);
  m.set("duration_seconds", timer.seconds());
  m.write(manifest_path(p.out));

  std::cout << "l2 slope (vs log n):        " << l2_fit.slope << " +- " << l2_fit.se << "\n"
            << "linf slope (vs log n/ln n): " << linf_fit.slope << " +- " << linf_fit.se << "\n"
            << "wrote " << p.out << "\n";
}

// ----------------------------------------------------------------------
// denoise

struct DenoiseParams {
  std::string in;
  std::string out = "denoised.txt";
  double sigma = 0.0;  // 0: estimate
  double gamma = 7.0;
  bool keep_coarse = false;
  std::string diag = "denoise_diag.csv";
};

std::vector<double> read_signal(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      std::size_t used = 0;
      const double v = std::stod(line, &used);
      values.push_back(v);
    } catch (const std::exception&) {
      throw std::runtime_error("bad number at line " + std::to_string(lineno) + " of " + path);
    }
  }
  if (!is_power_of_two(values.size()))
    throw std::runtime_error("input length must be a power of two, got " +
                             std::to_string(values.size()));
  return values;
}

double mad_sigma_estimate(const CoefficientTree& continuous, std::uint64_t n) {
  // 1.4826 * median(|finest-level coefficients|) * sqrt(n); the factor maps
  // the median absolute value of centered normals to their standard
  // deviation, assuming the fine scale is noise-dominated.
  std::vector<double> finest;
  for (double d : continuous.level(continuous.max_level())) finest.push_back(std::abs(d));
  std::sort(finest.begin(), finest.end());
  const std::size_t m = finest.size();
  const double median = m % 2 ? finest[m / 2] : 0.5 * (finest[m / 2 - 1] + finest[m / 2]);
  return 1.4826 * median * std::sqrt(static_cast<double>(n));
}

void run_denoise(const DenoiseParams& p) {
  Timer timer;
  const std::vector<double> input = read_signal(p.in);
  const std::uint64_t n = input.size();
  if (n < 2) throw std::runtime_error("need at least two samples");
  const int m_levels = log2_exact(n);

  const CoefficientTree disc = analyze(input);
  const CoefficientTree cont = scale_tree(disc, std::exp2(-0.5 * m_levels));

  bool estimated = false;
  double sigma = p.sigma;
  if (sigma <= 0.0) {
    sigma = mad_sigma_estimate(cont, n);
    estimated = true;
  }

  std::vector<double> output;
  std::vector<LevelDiagnostics> diags(static_cast<std::size_t>(m_levels + 1));
  if (sigma == 0.0) {
    // no detectable noise: pass the signal through
    output = input;
  } else {
    const NoisyCoefficients obs{cont, n, sigma};
    EstimatorConfig cfg;
    cfg.gamma = p.gamma;
    cfg.keep_coarse = p.keep_coarse;
    const EstimateResult res = truncated_block_threshold(obs, cfg);
    output = synthesize(scale_tree(res.coefficients, std::exp2(0.5 * m_levels)));
    diags = res.levels;
  }

  std::ofstream out(p.out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + p.out);
  for (double v : output) out << cli::format_value(v) << "\n";
  out.flush();
  if (!out) throw std::runtime_error("write failure on output file");

  cli::CsvWriter csv(p.diag);
  csv.header("level,L,t,clamped,zeroed");
  for (int j = -1; j < m_levels; ++j) {
    const LevelDiagnostics& d = diags[static_cast<std::size_t>(j + 1)];
    const std::string l_text = d.L == l_infinity ? "inf" : std::to_string(d.L);
    csv.row({std::to_string(j), l_text, cli::format_value(d.t), std::to_string(d.clamped),
             std::to_string(d.zeroed)});
  }
  csv.close();

  cli::Manifest m;
  m.set("tool", std::string("blockshrink"));
  m.set("version", std::string(version));
  m.set("subcommand", std::string("denoise"));
  m.set("in", p.in);
  m.set("out", p.out);
  m.set("sigma", sigma);
  m.set("sigma_estimated", estimated);
  m.set("gamma", p.gamma);
  m.set("keep_coarse", p.keep_coarse);
  m.set("diag", p.diag);
  m.set("duration_seconds", timer.seconds());
  m.write(manifest_path(p.out));
  std::cout << "wrote " << p.out << " (sigma " << (estimated ? "estimated " : "") << "= " << sigma
            << ")\n";
}

// ----------------------------------------------------------------------
// rerun from a manifest

template <typename T>
T require_key(const std::map<std::string, std::string>& kv, const std::string& key);

template <>
std::string require_key(const std::map<std::string, std::string>& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw std::runtime_error("manifest missing key: " + key);
  return it->second;
}

template <>
double require_key(const std::map<std::string, std::string>& kv, const std::string& key) {
  return std::stod(require_key<std::string>(kv, key));
}

template <>
std::uint64_t require_key(const std::map<std::string, std::string>& kv, const std::string& key) {
  return std::stoull(require_key<std::string>(kv, key));
}

template <>
int require_key(const std::map<std::string, std::string>& kv, const std::string& key) {
  return std::stoi(require_key<std::string>(kv, key));
}

template <>
bool require_key(const std::map<std::string, std::string>& kv, const std::string& key) {
  return require_key<std::string>(kv, key) == "1";
}

void run_rerun(const std::string& manifest_file, const std::string& out_override, int threads) {
  const auto kv = cli::Manifest::read(manifest_file);
  const std::string sub = require_key<std::string>(kv, "subcommand");
  if (sub == "gamma-sweep") {
    GammaSweepParams p;
    p.n = require_key<std::uint64_t>(kv, "n");
    p.sigma = require_key<double>(kv, "sigma");
    p.gamma_min = require_key<double>(kv, "gamma_min");
    p.gamma_max = require_key<double>(kv, "gamma_max");
    p.gamma_step = require_key<double>(kv, "gamma_step");
    p.reps = require_key<int>(kv, "reps");
    p.seed = require_key<std::uint64_t>(kv, "seed");
    p.variant = require_key<std::string>(kv, "variant");
    p.block_zeroing = require_key<bool>(kv, "block_zeroing");
    p.out = out_override.empty() ? require_key<std::string>(kv, "out") : out_override;
    p.threads = threads;
    run_gamma_sweep(p);
  } else if (sub == "lj-dist") {
    LjDistParams p;
    p.n = require_key<std::uint64_t>(kv, "n");
    p.sigma = require_key<double>(kv, "sigma");
    p.reps = require_key<int>(kv, "reps");
    p.seed = require_key<std::uint64_t>(kv, "seed");
    p.gamma = require_key<double>(kv, "gamma");
    p.out = out_override.empty() ? require_key<std::string>(kv, "out") : out_override;
    p.threads = threads;
    run_lj_dist(p);
  } else if (sub == "rates") {
    RatesParams p;
    p.n_grid = require_key<std::string>(kv, "n_grid");
    p.sigma = require_key<double>(kv, "sigma");
    p.gamma = require_key<double>(kv, "gamma");
    p.reps = require_key<int>(kv, "reps");
    p.seed = require_key<std::uint64_t>(kv, "seed");
    p.function = require_key<std::string>(kv, "function");
    p.variant = require_key<std::string>(kv, "variant");
    p.compare_variant = require_key<std::string>(kv, "compare_variant");
    p.block_zeroing = require_key<bool>(kv, "block_zeroing");
    p.out = out_override.empty() ? require_key<std::string>(kv, "out") : out_override;
    p.threads = threads;
    run_rates(p);
  } else if (sub == "denoise") {
    DenoiseParams p;
    p.in = require_key<std::string>(kv, "in");
    p.out = out_override.empty() ? require_key<std::string>(kv, "out") : out_override;
    p.sigma = require_key<bool>(kv, "sigma_estimated") ? 0.0 : require_key<double>(kv, "sigma");
    p.gamma = require_key<double>(kv, "gamma");
    p.keep_coarse = require_key<bool>(kv, "keep_coarse");
    p.diag = require_key<std::string>(kv, "diag");
    run_denoise(p);
  } else {
    throw std::runtime_error("unknown subcommand in manifest: " + sub);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wavelet block-thresholding experiments and denoising"};
  app.set_version_flag("--version", std::string("blockshrink ") + version);
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = hardware)")->capture_default_str();

  GammaSweepParams gs;
  CLI::App* sweep = app.add_subcommand("gamma-sweep", "risk curves over a gamma grid");
  sweep->add_option("--n", gs.n, "sample size (power of two)")->required();
  sweep->add_option("--sigma", gs.sigma, "noise level")->capture_default_str();
  sweep->add_option("--gamma-min", gs.gamma_min)->capture_default_str();
  sweep->add_option("--gamma-max", gs.gamma_max)->capture_default_str();
  sweep->add_option("--gamma-step", gs.gamma_step)->capture_default_str();
  sweep->add_option("--reps", gs.reps)->capture_default_str();
  sweep->add_option("--seed", gs.seed)->capture_default_str();
  sweep->add_option("--variant", gs.variant, "truncated-block|plain-block|projection|hard")
      ->capture_default_str();
  sweep->add_flag("--block-zeroing,!--no-block-zeroing", gs.block_zeroing,
                  "zero blocks below the detection threshold")
      ->capture_default_str();
  sweep->add_option("--out", gs.out)->capture_default_str();

  LjDistParams lj;
  CLI::App* ljcmd = app.add_subcommand("lj-dist", "empirical distribution of the level statistic");
  ljcmd->add_option("--n", lj.n, "sample size (power of two)")->required();
  ljcmd->add_option("--sigma", lj.sigma)->capture_default_str();
  ljcmd->add_option("--reps", lj.reps)->capture_default_str();
  ljcmd->add_option("--seed", lj.seed)->capture_default_str();
  ljcmd->add_option("--gamma", lj.gamma)->capture_default_str();
  ljcmd->add_option("--out", lj.out)->capture_default_str();

  RatesParams rt;
  CLI::App* rates = app.add_subcommand("rates", "risk decay over an n grid with fitted slopes");
  rates->add_option("--n-grid", rt.n_grid, "comma separated sample sizes")->capture_default_str();
  rates->add_option("--sigma", rt.sigma)->capture_default_str();
  rates->add_option("--gamma", rt.gamma)->capture_default_str();
  rates->add_option("--reps", rt.reps)->capture_default_str();
  rates->add_option("--seed", rt.seed)->capture_default_str();
  rates->add_option("--function", rt.function, "sine | block-spike:beta:Q:level (level may be auto)")
      ->capture_default_str();
  rates->add_option("--variant", rt.variant)->capture_default_str();
  rates->add_option("--compare-variant", rt.compare_variant,
                    "adds comparison columns for a second variant");
  rates->add_flag("--block-zeroing,!--no-block-zeroing", rt.block_zeroing)->capture_default_str();
  rates->add_option("--out", rt.out)->capture_default_str();

  DenoiseParams dn;
  CLI::App* denoise = app.add_subcommand("denoise", "denoise a signal file");
  denoise->add_option("--in", dn.in, "input file, one real per line, power-of-two count")
      ->required();
  denoise->add_option("--out", dn.out)->capture_default_str();
  denoise->add_option("--sigma", dn.sigma, "noise level (omit to estimate from the data)");
  denoise->add_option("--gamma", dn.gamma)->capture_default_str();
  denoise->add_flag("--keep-coarse", dn.keep_coarse, "keep levels j <= 2 verbatim");
  denoise->add_option("--diag", dn.diag, "diagnostics CSV path")->capture_default_str();

  std::string rerun_manifest, rerun_out;
  CLI::App* rerun = app.add_subcommand("rerun", "reproduce a run from its manifest");
  rerun->add_option("--manifest", rerun_manifest)->required();
  rerun->add_option("--out", rerun_out, "override the output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sweep->parsed()) {
      gs.threads = threads;
      run_gamma_sweep(gs);
    } else if (ljcmd->parsed()) {
      lj.threads = threads;
      run_lj_dist(lj);
    } else if (rates->parsed()) {
      rt.threads = threads;
      run_rates(rt);
    } else if (denoise->parsed()) {
      run_denoise(dn);
    } else if (rerun->parsed()) {
      run_rerun(rerun_manifest, rerun_out, threads);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
