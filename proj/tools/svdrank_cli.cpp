// Command-line front end: sweep, rank, complete, bounds, selftest.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "svdrank/harness.hpp"
#include "svdrank/theory.hpp"

namespace {

using namespace svdrank;

enum Exit : int { kOk = 0, kSelftestFailed = 1, kConfig = 2, kIo = 3, kData = 4 };

int exit_code(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidParam: return kConfig;
    case ErrorCode::IoError: return kIo;
    default: return kData;
  }
}

// Writes to `path`, or stdout when empty.
template <class Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  fn(out);
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path + "'");
}

std::vector<Method> parse_methods(const std::string& list) {
  std::vector<Method> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto m = parse_method(item);
    if (!m) throw Error(ErrorCode::ConfigError, "unknown algorithm '" + item + "'");
    out.push_back(*m);
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral ranking from pairwise differences"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  bool seed_given = false;
  std::string config_path;
  std::string out_path;
  std::size_t min_degree = 0;
  bool completion = false;
  std::size_t threads = 0;
  bool threads_given = false;
  std::string input;
  bool one_indexed = false;
  std::string algorithms = "svd_rs,svd_nrs,rowsum,least_squares";
  std::string scores_path;

  auto* sweep = app.add_subcommand("sweep", "Run a synthetic experiment sweep and write CSV");
  sweep->add_option("--config", config_path, "Experiment config file")->required();
  sweep->add_option("--seed", seed, "Override the master seed")
      ->each([&](const std::string&) { seed_given = true; });
  sweep->add_option("--out", out_path, "Output CSV (default: config 'out' or stdout)");
  sweep->add_flag("--completion", completion, "Force matrix completion on");
  sweep->add_option("--threads", threads, "Worker threads")
      ->each([&](const std::string&) { threads_given = true; });

  auto* rank = app.add_subcommand("rank", "Rank items from an i,j,value edge list");
  rank->add_option("--input", input, "Edge list file")->required();
  rank->add_flag("--one-indexed", one_indexed, "Item indices start at 1");
  rank->add_option("--min-degree", min_degree, "Drop items with fewer comparisons");
  rank->add_flag("--completion", completion, "Complete the matrix before ranking");
  rank->add_option("--algorithms", algorithms, "Comma-separated methods");
  rank->add_option("--seed", seed, "Seed of the random baseline");
  rank->add_option("--out", out_path, "Summary CSV (default stdout)");
  rank->add_option("--scores", scores_path, "Per-item score CSV");

  auto* complete = app.add_subcommand("complete", "Complete an edge list to a full skew matrix");
  complete->add_option("--input", input, "Edge list file")->required();
  complete->add_flag("--one-indexed", one_indexed, "Item indices start at 1");
  complete->add_option("--out", out_path, "Completed edge list (default stdout)");

  std::size_t n = 500;
  double p = 0.25;
  double gamma = 0.2;
  std::string kind = "linear";
  BoundParams bp;
  auto* bounds = app.add_subcommand("bounds", "Evaluate the theoretical error bounds");
  bounds->add_option("--n", n, "Item count");
  bounds->add_option("--p", p, "Edge probability");
  bounds->add_option("--gamma", gamma, "Noise level (eta = 1 - gamma)");
  bounds->add_option("--scores", kind, "uniform, gamma or linear")
      ->check(CLI::IsMember({"uniform", "gamma", "linear"}));
  bounds->add_option("--seed", seed, "Score seed");
  bounds->add_option("--epsilon", bp.epsilon, "epsilon in (0, 1/2]");
  bounds->add_option("--xi", bp.xi, "xi > 1");
  bounds->add_option("--kappa", bp.kappa, "kappa in (0, 1)");
  bounds->add_option("--constant", bp.universal_constant, "Universal constant placeholder");
  bounds->add_option("--out", out_path, "Output (default stdout)");

  auto* selftest = app.add_subcommand("selftest", "Run the built-in example checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed()) {
      ExperimentConfig cfg = load_config(config_path);
      if (seed_given) cfg.seed = seed;
      if (completion) cfg.completion = true;
      if (threads_given) cfg.threads = threads;
      if (!out_path.empty()) cfg.out = out_path;
      const auto rows = run_sweep(cfg);
      emit(cfg.out, [&](std::ostream& os) { write_csv(os, rows, cfg); });
      std::size_t failed = 0;
      for (const auto& row : rows) failed += (!row.agg && !row.ok()) ? 1 : 0;
      if (failed > 0) std::cerr << "warning: " << failed << " cells failed (see status column)\n";
      return kOk;
    }

    if (rank->parsed()) {
      const MeasurementSet m = ingest_edge_list(input, one_indexed);
      RealEvalOptions opts;
      opts.algorithms = parse_methods(algorithms);
      opts.completion = completion;
      opts.min_degree = min_degree;
      opts.seed = seed;
      const RealEvaluation ev = evaluate_real(m, opts);
      for (const auto& w : ev.pruned.warnings) std::cerr << "warning: " << w << '\n';
      emit(out_path, [&](std::ostream& os) {
        os << "algorithm,n,status,upsets,weighted_upsets,tau\n";
        for (const auto& row : ev.rows) {
          os << to_string(row.algorithm) << ',' << row.n << ',' << row.status << ',';
          if (row.ok()) os << fmt(row.upsets) << ',' << fmt(row.weighted_upsets) << ',' << fmt(row.tau);
          else os << ",,";
          os << '\n';
        }
      });
      if (!scores_path.empty()) {
        emit(scores_path, [&](std::ostream& os) {
          os << "item";
          for (const auto& row : ev.rows) os << ',' << to_string(row.algorithm);
          os << '\n';
          for (std::size_t k = 0; k < ev.pruned.kept.size(); ++k) {
            os << ev.pruned.kept[k] + (one_indexed ? 1 : 0);
            for (const auto& s : ev.scores) os << ',' << (s.empty() ? std::string() : fmt(s[k]));
            os << '\n';
          }
        });
      }
      return kOk;
    }

    if (complete->parsed()) {
      const MeasurementSet m = ingest_edge_list(input, one_indexed);
      const CompletionResult res = complete_matrix(m);
      std::cerr << "iterations=" << res.iterations << " rank=" << res.rank
                << " relative_change=" << fmt(res.relative_change)
                << " converged=" << (res.converged ? "true" : "false") << '\n';
      emit(out_path, [&](std::ostream& os) {
        const std::size_t off = one_indexed ? 1 : 0;
        for (const auto& e : res.matrix.entries()) {
          os << e.i + off << ',' << e.j + off << ',' << fmt(e.value) << '\n';
        }
      });
      return res.converged ? kOk : kData;
    }

    if (bounds->parsed()) {
      bp.validate();
      ScoreDistribution dist;
      dist.kind = kind == "uniform" ? ScoreKind::Uniform01
                  : kind == "gamma" ? ScoreKind::Gamma
                                    : ScoreKind::Linear;
      const ScoreVector r = generate_scores(dist, n, seed);
      const BoundReport rep = evaluate_bounds(r, p, 1.0 - gamma, bp);
      emit(out_path, [&](std::ostream& os) {
        auto line = [&](const char* name, double v) { os << name << ',' << fmt(v) << '\n'; };
        auto bound = [&](const char* name, const BoundValue& b) {
          os << name << ',' << fmt(b.value) << ',' << (b.precondition_holds ? "holds" : "violated")
             << (b.uses_placeholder_constant ? ",placeholder_constant" : "") << '\n';
        };
        os << "quantity,value,precondition,note\n";
        line("n", static_cast<double>(rep.stats.n));
        line("p", rep.stats.p);
        line("eta", rep.stats.eta);
        line("M", rep.stats.M);
        line("alpha", rep.stats.alpha);
        line("dev_norm", rep.stats.dev_norm);
        line("rho", rep.stats.rho);
        line("coherence", rep.coherence);
        line("Delta", rep.Delta);
        bound("wedin_delta", rep.wedin);
        line("l2_threshold", rep.l2_threshold);
        bound("l2_direction_svd_rs", rep.l2_direction_svd_rs);
        bound("linf_C_svd_rs", rep.linf_C_svd_rs);
        bound("linf_direction_svd_rs", rep.linf_direction_svd_rs);
        bound("rank_displacement_svd_rs", rep.rank_displacement_svd_rs);
        bound("score_l2_svd_rs", rep.score_l2_svd_rs);
        bound("score_linf_svd_rs", rep.score_linf_svd_rs);
        line("nrs_lambda_max", rep.nrs.lambda_max);
        line("nrs_lambda_min", rep.nrs.lambda_min);
        line("nrs_sigma_min", rep.nrs.sigma_min);
        line("nrs_sigma_max", rep.nrs.sigma_max);
        line("nrs_Delta_tilde", rep.nrs.Delta_tilde);
        bound("l2_direction_svd_nrs", rep.l2_direction_svd_nrs);
        bound("score_l2_svd_nrs", rep.score_l2_svd_nrs);
      });
      if (rep.placeholder_warning) {
        std::cerr << "warning: l-infinity bounds use a placeholder universal constant ("
                  << fmt(bp.universal_constant) << ")\n";
      }
      return kOk;
    }

    if (selftest->parsed()) return run_selftest(std::cout) == 0 ? kOk : kSelftestFailed;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  return kOk;
}
