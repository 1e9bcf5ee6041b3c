#include "svdrank/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include "svdrank/random.hpp"
#include "svdrank/theory.hpp"
#include "union_find.hpp"

namespace svdrank {

namespace {

constexpr std::uint64_t kScoreDomain = 0x5c0e;
constexpr std::uint64_t kEroDomain = 0xe20;
constexpr std::uint64_t kMethodDomain = 0x3e7;
constexpr std::uint64_t kRandomStream = 0x72616e64ULL;  // "rand"

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  s = trim(s);
  if (s.empty()) return false;
  if constexpr (std::is_floating_point_v<T>) {
    if (s.front() == '+') s.remove_prefix(1);
  }
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

bool has_metric(const ExperimentConfig& cfg, Metric m) {
  return std::find(cfg.metrics.begin(), cfg.metrics.end(), m) != cfg.metrics.end();
}

}  // namespace

std::string_view to_string(Metric m) noexcept {
  switch (m) {
    case Metric::Kendall: return "kendall";
    case Metric::Correlation: return "correlation";
    case Metric::Rmse: return "rmse";
    case Metric::Upsets: return "upsets";
    case Metric::WeightedUpsets: return "weighted_upsets";
    case Metric::MaxDisplacement: return "max_displacement";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::SvdRs, Method::SvdNrs, Method::RowSum, Method::LeastSquares,
                   Method::Random}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

std::optional<Metric> parse_metric(std::string_view name) {
  for (Metric m : {Metric::Kendall, Metric::Correlation, Metric::Rmse, Metric::Upsets,
                   Metric::WeightedUpsets, Metric::MaxDisplacement}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Configuration

const std::vector<std::string_view>& config_keys() {
  static const std::vector<std::string_view> keys{
      "n",
      "scores",
      "gamma_shape",
      "gamma_scale",
      "p",
      "gamma",
      "trials",
      "seed",
      "algorithms",
      "metrics",
      "scale",
      "rmse_variant",
      "completion",
      "completion.step",
      "completion.threshold_scale",
      "completion.threshold_decay",
      "completion.threshold_floor",
      "completion.max_iter",
      "completion.tol",
      "completion.dense_limit",
      "theory",
      "timing",
      "threads",
      "out",
  };
  return keys;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); };
  if (n < 2) fail("n must be at least 2");
  if (p_grid.empty()) fail("p grid is empty");
  if (gamma_grid.empty()) fail("gamma grid is empty");
  for (double p : p_grid) {
    if (!(p >= 0.0 && p <= 1.0)) fail("p value " + format_number(p) + " not in [0, 1]");
  }
  for (double g : gamma_grid) {
    if (!(g >= 0.0 && g <= 1.0)) fail("gamma value " + format_number(g) + " not in [0, 1]");
  }
  if (trials < 1) fail("trials must be at least 1");
  if (algorithms.empty()) fail("no algorithms selected");
  if (scores.kind == ScoreKind::Gamma && !(scores.shape > 0.0 && scores.scale > 0.0)) {
    fail("gamma_shape and gamma_scale must be positive");
  }
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::vector<std::string> unknown;
  std::size_t line_no = 0;

  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line =
        text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    auto bad = [&](const std::string& what) {
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(line_no) + ": " + what);
    };
    if (eq == std::string_view::npos) bad("expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const std::string key_s(key);

    auto as_size = [&]() {
      std::size_t v = 0;
      if (!parse_number(value, v)) bad("'" + key_s + "' expects a nonnegative integer");
      return v;
    };
    auto as_u64 = [&]() {
      std::uint64_t v = 0;
      if (!parse_number(value, v)) bad("'" + key_s + "' expects a nonnegative integer");
      return v;
    };
    auto as_double = [&]() {
      double v = 0.0;
      if (!parse_number(value, v)) bad("'" + key_s + "' expects a number");
      return v;
    };
    auto as_bool = [&]() {
      if (value == "on" || value == "true" || value == "1" || value == "yes") return true;
      if (value == "off" || value == "false" || value == "0" || value == "no") return false;
      bad("'" + key_s + "' expects on/off");
      return false;
    };
    auto as_doubles = [&]() {
      std::vector<double> out;
      for (auto item : split(value, ',')) {
        double v = 0.0;
        if (!parse_number(item, v)) bad("'" + key_s + "' expects a comma-separated number list");
        out.push_back(v);
      }
      return out;
    };

    if (key == "n") {
      cfg.n = as_size();
    } else if (key == "scores") {
      if (value == "uniform") {
        cfg.scores.kind = ScoreKind::Uniform01;
      } else if (value == "gamma") {
        cfg.scores.kind = ScoreKind::Gamma;
      } else if (value == "linear") {
        cfg.scores.kind = ScoreKind::Linear;
      } else {
        bad("scores must be uniform, gamma or linear");
      }
    } else if (key == "gamma_shape") {
      cfg.scores.shape = as_double();
    } else if (key == "gamma_scale") {
      cfg.scores.scale = as_double();
    } else if (key == "p") {
      cfg.p_grid = as_doubles();
    } else if (key == "gamma") {
      cfg.gamma_grid = as_doubles();
    } else if (key == "trials") {
      cfg.trials = as_size();
    } else if (key == "seed") {
      cfg.seed = as_u64();
    } else if (key == "algorithms") {
      cfg.algorithms.clear();
      for (auto item : split(value, ',')) {
        const auto m = parse_method(item);
        if (!m) bad("unknown algorithm '" + std::string(item) + "'");
        cfg.algorithms.push_back(*m);
      }
    } else if (key == "metrics") {
      cfg.metrics.clear();
      if (!value.empty()) {
        for (auto item : split(value, ',')) {
          const auto m = parse_metric(item);
          if (!m) bad("unknown metric '" + std::string(item) + "'");
          cfg.metrics.push_back(*m);
        }
      }
    } else if (key == "scale") {
      if (value == "median") {
        cfg.scale = ScaleEstimator::Median;
      } else if (value == "ls") {
        cfg.scale = ScaleEstimator::LeastSquares;
      } else {
        bad("scale must be median or ls");
      }
    } else if (key == "rmse_variant") {
      if (value == "squared") {
        cfg.rmse_variant = RmseVariant::Squared;
      } else if (value == "unsquared") {
        cfg.rmse_variant = RmseVariant::Unsquared;
      } else {
        bad("rmse_variant must be squared or unsquared");
      }
    } else if (key == "completion") {
      cfg.completion = as_bool();
    } else if (key == "completion.step") {
      cfg.completion_config.step = as_double();
    } else if (key == "completion.threshold_scale") {
      cfg.completion_config.threshold_scale = as_double();
    } else if (key == "completion.threshold_decay") {
      cfg.completion_config.threshold_decay = as_double();
    } else if (key == "completion.threshold_floor") {
      cfg.completion_config.threshold_floor = as_double();
    } else if (key == "completion.max_iter") {
      cfg.completion_config.max_iter = as_size();
    } else if (key == "completion.tol") {
      cfg.completion_config.tol = as_double();
    } else if (key == "completion.dense_limit") {
      cfg.completion_config.dense_limit = as_size();
    } else if (key == "theory") {
      cfg.theory = as_bool();
    } else if (key == "timing") {
      cfg.timing = as_bool();
    } else if (key == "threads") {
      cfg.threads = as_size();
    } else if (key == "out") {
      cfg.out = std::string(value);
    } else {
      unknown.push_back(key_s);
    }
  }

  if (!unknown.empty()) {
    std::string msg = "unknown keys:";
    for (const auto& k : unknown) msg += " " + k;
    throw Error(ErrorCode::ConfigError, msg);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// ---------------------------------------------------------------------------
// Ranking dispatch

RankingResult run_method(Method method, const SkewSparseMatrix& H, ScaleEstimator scale,
                         std::uint64_t seed, const SkewSparseMatrix* observed) {
  RankOptions opts;
  opts.scale = scale;
  opts.observed = observed;
  switch (method) {
    case Method::SvdRs: return svd_rs(H, opts);
    case Method::SvdNrs: return svd_nrs(H, opts);
    case Method::RowSum: return rowsum_rank(H);
    case Method::LeastSquares: return least_squares_rank(IncidenceSystem::from(H), H.n());
    case Method::Random: {
      StreamRng rng(seed, kRandomStream);
      Vector s(H.n());
      for (auto& x : s) x = rng.uniform01();
      RankingResult out;
      out.method = Method::Random;
      out.score_estimate = center(s);
      out.permutation = Permutation::from_scores(out.score_estimate);
      return out;
    }
  }
  throw Error(ErrorCode::InvalidParam, "unknown method");
}

// ---------------------------------------------------------------------------
// Sweeps

namespace {

struct Cell {
  std::size_t p_index = 0;
  std::size_t gamma_index = 0;
  std::size_t trial = 0;
};

ResultRow base_row(const ExperimentConfig& cfg, Method m, const Cell& c) {
  ResultRow row;
  row.algorithm = m;
  row.n = cfg.n;
  row.p = cfg.p_grid[c.p_index];
  row.gamma = cfg.gamma_grid[c.gamma_index];
  row.trial = c.trial;
  return row;
}

void mark_error(ResultRow& row, const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    row.status = std::string(to_string(err->code()));
  } else {
    row.status = "Exception";
  }
  row.message = e.what();
}

std::vector<ResultRow> run_cell(const ExperimentConfig& cfg, const Cell& c) {
  std::vector<ResultRow> rows;
  rows.reserve(cfg.algorithms.size());
  for (Method m : cfg.algorithms) rows.push_back(base_row(cfg, m, c));

  const double p = cfg.p_grid[c.p_index];
  const double eta = 1.0 - cfg.gamma_grid[c.gamma_index];

  ScoreVector r;
  MeasurementSet m;
  std::optional<AssembledMatrix> assembled;
  std::optional<CompletionResult> completed;
  try {
    r = generate_scores(cfg.scores, cfg.n, derive_seed(cfg.seed, kScoreDomain, c.trial));
    m = generate_ero(r, {cfg.n, p, eta, derive_seed(cfg.seed, kEroDomain, c.trial)});
    assembled = build_H(m);
    if (cfg.completion) completed = complete_matrix(m, cfg.completion_config);
  } catch (const std::exception& e) {
    for (auto& row : rows) mark_error(row, e);
    return rows;
  }
  const SkewSparseMatrix& observed = assembled->H;
  const SkewSparseMatrix& input = completed ? completed->matrix : observed;

  const Permutation truth = Permutation::from_scores(r.r);
  std::optional<BoundReport> report;

  for (std::size_t k = 0; k < rows.size(); ++k) {
    ResultRow& row = rows[k];
    const Method method = row.algorithm;
    try {
      const auto t0 = std::chrono::steady_clock::now();
      const RankingResult res =
          run_method(method, input, cfg.scale,
                     derive_seed(cfg.seed, kMethodDomain, c.trial,
                                 c.p_index * cfg.gamma_grid.size() + c.gamma_index),
                     completed ? &observed : nullptr);
      const auto t1 = std::chrono::steady_clock::now();
      row.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      row.tau = res.tau;

      if (has_metric(cfg, Metric::Kendall)) {
        row.kendall = static_cast<double>(kendall_distance(truth, res.permutation));
        row.kendall_norm = kendall_distance_normalized(truth, res.permutation);
      }
      if (has_metric(cfg, Metric::Correlation)) {
        row.correlation = pearson_correlation(r.r, res.score_estimate);
      }
      if (has_metric(cfg, Metric::Rmse)) row.rmse = rmse(r.r, res.score_estimate, cfg.rmse_variant);
      if (has_metric(cfg, Metric::Upsets)) {
        row.upsets = static_cast<double>(count_upsets(observed, res.score_estimate));
      }
      if (has_metric(cfg, Metric::WeightedUpsets)) {
        row.weighted_upsets = weighted_upsets(observed, res.score_estimate);
      }
      if (has_metric(cfg, Metric::MaxDisplacement)) {
        row.max_displacement = static_cast<double>(max_displacement(truth, res.permutation));
      }

      const bool svd = method == Method::SvdRs || method == Method::SvdNrs;
      if (cfg.theory && svd && !cfg.completion) {
        if (!report) report = evaluate_bounds(r, p, eta);
        const Vector target = method == Method::SvdRs ? true_direction_svd_rs(r)
                                                      : true_direction_svd_nrs(r, p, eta);
        const BoundValue& b = method == Method::SvdRs ? report->l2_direction_svd_rs
                                                      : report->l2_direction_svd_nrs;
        row.has_bound = true;
        row.u2_err2 = aligned_error_sq(res.direction, target);
        row.l2_bound = b.value;
        row.precondition = b.precondition_holds ? 1.0 : 0.0;
        row.contained = row.u2_err2 <= b.value ? 1.0 : 0.0;
      }
    } catch (const std::exception& e) {
      mark_error(row, e);
    }
  }
  return rows;
}

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  void add(double v) {
    sum += v;
    sum_sq += v * v;
  }
};

// Mean and sample standard deviation over the successful raw rows.
std::vector<ResultRow> aggregate(const ExperimentConfig& cfg, const std::vector<ResultRow>& raw) {
  std::vector<ResultRow> out;
  const std::size_t a_count = cfg.algorithms.size();
  for (std::size_t pi = 0; pi < cfg.p_grid.size(); ++pi) {
    for (std::size_t gi = 0; gi < cfg.gamma_grid.size(); ++gi) {
      for (std::size_t a = 0; a < a_count; ++a) {
        std::vector<const ResultRow*> ok;
        for (std::size_t t = 0; t < cfg.trials; ++t) {
          const std::size_t idx = ((pi * cfg.gamma_grid.size() + gi) * cfg.trials + t) * a_count + a;
          if (raw[idx].ok()) ok.push_back(&raw[idx]);
        }
        ResultRow mean = base_row(cfg, cfg.algorithms[a], {pi, gi, 0});
        mean.agg = true;
        mean.stat = "mean";
        mean.trial = ok.size();
        ResultRow sd = mean;
        sd.stat = "std";
        if (ok.empty()) {
          mean.status = sd.status = "NoData";
          out.push_back(mean);
          out.push_back(sd);
          continue;
        }
        mean.has_bound = sd.has_bound = ok.front()->has_bound;

        using Field = double ResultRow::*;
        for (Field f : {&ResultRow::kendall, &ResultRow::kendall_norm, &ResultRow::correlation,
                        &ResultRow::rmse, &ResultRow::upsets, &ResultRow::weighted_upsets,
                        &ResultRow::max_displacement, &ResultRow::tau, &ResultRow::runtime_ms,
                        &ResultRow::u2_err2, &ResultRow::l2_bound, &ResultRow::precondition,
                        &ResultRow::contained}) {
          Moments mo;
          for (const ResultRow* row : ok) mo.add(row->*f);
          const double k = static_cast<double>(ok.size());
          const double mu = mo.sum / k;
          double var = 0.0;
          if (ok.size() > 1) {
            for (const ResultRow* row : ok) var += (row->*f - mu) * (row->*f - mu);
            var /= k - 1.0;
          }
          mean.*f = mu;
          sd.*f = std::sqrt(var);
        }
        out.push_back(mean);
        out.push_back(sd);
      }
    }
  }
  return out;
}

}  // namespace

std::vector<ResultRow> run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<Cell> cells;
  for (std::size_t pi = 0; pi < cfg.p_grid.size(); ++pi) {
    for (std::size_t gi = 0; gi < cfg.gamma_grid.size(); ++gi) {
      for (std::size_t t = 0; t < cfg.trials; ++t) cells.push_back({pi, gi, t});
    }
  }

  std::vector<std::vector<ResultRow>> slots(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < cells.size(); k = next++) slots[k] = run_cell(cfg, cells[k]);
  };
  std::size_t threads = cfg.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, cells.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<ResultRow> rows;
  rows.reserve(cells.size() * cfg.algorithms.size() * 2);
  for (auto& slot : slots) {
    for (auto& row : slot) rows.push_back(std::move(row));
  }
  auto agg = aggregate(cfg, rows);
  rows.insert(rows.end(), std::make_move_iterator(agg.begin()), std::make_move_iterator(agg.end()));
  return rows;
}

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows, const ExperimentConfig& cfg) {
  const bool kendall = has_metric(cfg, Metric::Kendall);
  const bool corr = has_metric(cfg, Metric::Correlation);
  const bool rmse_on = has_metric(cfg, Metric::Rmse);
  const bool ups = has_metric(cfg, Metric::Upsets);
  const bool wups = has_metric(cfg, Metric::WeightedUpsets);
  const bool disp = has_metric(cfg, Metric::MaxDisplacement);

  os << "agg,stat,algorithm,n,p,gamma,trial,status";
  if (kendall) os << ",kendall,kendall_norm";
  if (corr) os << ",correlation";
  if (rmse_on) os << ",rmse";
  if (ups) os << ",upsets";
  if (wups) os << ",weighted_upsets";
  if (disp) os << ",max_displacement";
  os << ",tau";
  if (cfg.timing) os << ",runtime_ms";
  if (cfg.theory) os << ",u2_err2,l2_bound,precondition,contained";
  os << ",message\n";

  for (const auto& row : rows) {
    const bool ok = row.ok();
    auto num = [&](double v) { return ok ? format_number(v) : std::string(); };
    os << (row.agg ? 1 : 0) << ',' << row.stat << ',' << to_string(row.algorithm) << ',' << row.n
       << ',' << format_number(row.p) << ',' << format_number(row.gamma) << ',' << row.trial << ','
       << row.status;
    if (kendall) os << ',' << num(row.kendall) << ',' << num(row.kendall_norm);
    if (corr) os << ',' << num(row.correlation);
    if (rmse_on) os << ',' << num(row.rmse);
    if (ups) os << ',' << num(row.upsets);
    if (wups) os << ',' << num(row.weighted_upsets);
    if (disp) os << ',' << num(row.max_displacement);
    os << ',' << num(row.tau);
    if (cfg.timing) os << ',' << num(row.runtime_ms);
    if (cfg.theory) {
      if (ok && row.has_bound) {
        os << ',' << format_number(row.u2_err2) << ',' << format_number(row.l2_bound) << ','
           << format_number(row.precondition) << ',' << format_number(row.contained);
      } else {
        os << ",,,,";
      }
    }
    os << ',' << csv_quote(row.message) << '\n';
  }
}

std::string to_csv(const std::vector<ResultRow>& rows, const ExperimentConfig& cfg) {
  std::ostringstream ss;
  write_csv(ss, rows, cfg);
  return ss.str();
}

// ---------------------------------------------------------------------------
// Edge lists

MeasurementSet parse_edge_list(std::istream& in, bool one_indexed, std::optional<std::size_t> n) {
  std::map<std::pair<std::size_t, std::size_t>, double> sums;
  std::size_t max_index = 0;
  bool any = false;
  bool seen_data_line = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto fields = split(body, ',');
    auto parse_error = [&](const std::string& what) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + what);
    };
    long long a = 0;
    long long b = 0;
    double v = 0.0;
    const bool numeric = fields.size() == 3 && parse_number(fields[0], a) &&
                         parse_number(fields[1], b) && parse_number(fields[2], v);
    if (!numeric) {
      if (!seen_data_line && fields.size() == 3) {
        seen_data_line = true;  // header
        continue;
      }
      parse_error("expected i,j,value");
    }
    seen_data_line = true;
    if (!std::isfinite(v)) parse_error("non-finite value");
    if (one_indexed) {
      --a;
      --b;
    }
    if (a < 0 || b < 0) parse_error("negative index");
    auto i = static_cast<std::size_t>(a);
    auto j = static_cast<std::size_t>(b);
    if (i == j) {
      throw Error(ErrorCode::SelfLoop,
                  "line " + std::to_string(line_no) + ": self-loop at " + std::to_string(a));
    }
    if (n && std::max(i, j) >= *n) parse_error("index exceeds item count");
    if (i > j) {
      std::swap(i, j);
      v = -v;
    }
    sums[{i, j}] += v;
    max_index = std::max(max_index, j);
    any = true;
  }
  if (in.bad()) throw Error(ErrorCode::IoError, "read failure");

  std::vector<Measurement> edges;
  edges.reserve(sums.size());
  for (const auto& [key, value] : sums) edges.push_back({key.first, key.second, value});
  const std::size_t items = n ? *n : (any ? max_index + 1 : 0);
  return MeasurementSet::from(items, std::move(edges));
}

MeasurementSet ingest_edge_list(const std::string& path, bool one_indexed,
                                std::optional<std::size_t> n) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path + "'");
  return parse_edge_list(in, one_indexed, n);
}

PrunedSet prune(const MeasurementSet& m, std::size_t min_degree) {
  PrunedSet out;
  const std::size_t n = m.n;
  std::vector<std::size_t> degree(n, 0);
  for (const auto& e : m.edges) {
    ++degree[e.i];
    ++degree[e.j];
  }
  std::vector<bool> alive(n, true);
  std::size_t dropped = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (degree[i] < min_degree) {
      alive[i] = false;
      ++dropped;
    }
  }
  if (dropped > 0) {
    out.warnings.push_back("removed " + std::to_string(dropped) + " items with degree < " +
                           std::to_string(min_degree));
  }

  detail::UnionFind uf(n);
  for (const auto& e : m.edges) {
    if (alive[e.i] && alive[e.j]) uf.unite(e.i, e.j);
  }
  // Largest component; ties go to the one holding the smallest item index.
  std::size_t best_root = n;
  std::size_t best_size = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!alive[i]) continue;
    const std::size_t root = uf.find(i);
    const std::size_t size = uf.component_size(i);
    if (size > best_size) {
      best_size = size;
      best_root = root;
    }
  }
  std::vector<std::size_t> new_index(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (alive[i] && uf.find(i) == best_root) {
      new_index[i] = out.kept.size();
      out.kept.push_back(i);
    }
  }
  const std::size_t alive_count = n - dropped;
  if (out.kept.size() < alive_count) {
    out.warnings.push_back("graph disconnected: kept largest component with " +
                           std::to_string(out.kept.size()) + " of " +
                           std::to_string(alive_count) + " items");
  }

  std::vector<Measurement> edges;
  for (const auto& e : m.edges) {
    if (new_index[e.i] < n && new_index[e.j] < n) {
      edges.push_back({new_index[e.i], new_index[e.j], e.value});
    }
  }
  out.set = MeasurementSet::from(out.kept.size(), std::move(edges));
  return out;
}

RealEvaluation evaluate_real(const MeasurementSet& m, const RealEvalOptions& opts) {
  RealEvaluation out;
  out.pruned = prune(m, opts.min_degree);
  const MeasurementSet& set = out.pruned.set;

  std::vector<Method> methods = opts.algorithms;
  methods.push_back(Method::Random);
  auto fresh_row = [&](Method method) {
    ResultRow row;
    row.algorithm = method;
    row.n = set.n;
    return row;
  };

  std::optional<AssembledMatrix> assembled;
  std::optional<CompletionResult> completed;
  try {
    if (set.edges.empty()) throw Error(ErrorCode::GraphDisconnected, "no measurements");
    assembled = build_H(set);
    if (opts.completion) completed = complete_matrix(set, opts.completion_config);
  } catch (const std::exception& e) {
    for (Method method : methods) {
      out.rows.push_back(fresh_row(method));
      mark_error(out.rows.back(), e);
      out.scores.emplace_back();
    }
    return out;
  }
  const SkewSparseMatrix& observed = assembled->H;
  const SkewSparseMatrix& input = completed ? completed->matrix : observed;

  for (Method method : methods) {
    ResultRow row = fresh_row(method);
    Vector scores;
    try {
      // The random baseline always sees the raw measurements.
      const SkewSparseMatrix& h = method == Method::Random ? observed : input;
      RankingResult res =
          run_method(method, h, opts.scale, opts.seed, completed ? &observed : nullptr);
      row.tau = res.tau;
      row.upsets = static_cast<double>(count_upsets(observed, res.score_estimate));
      row.weighted_upsets = weighted_upsets(observed, res.score_estimate);
      scores = std::move(res.score_estimate);
    } catch (const std::exception& e) {
      mark_error(row, e);
    }
    out.rows.push_back(std::move(row));
    out.scores.push_back(std::move(scores));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Self test

int run_selftest(std::ostream& os) {
  int failures = 0;
  auto check = [&](const char* name, auto&& body) {
    std::string detail;
    bool ok = false;
    try {
      ok = body(detail);
    } catch (const std::exception& e) {
      detail = e.what();
    }
    os << (ok ? "PASS " : "FAIL ") << name;
    if (!ok && !detail.empty()) os << ": " << detail;
    os << '\n';
    if (!ok) ++failures;
  };

  check("matvec_antisymmetry", [](std::string&) {
    const SkewSparseMatrix H(2, {{0, 1, 3.0}});
    const Vector y = matvec(H, Vector{1.0, 0.0});
    return y[0] == 0.0 && y[1] == -3.0;
  });
  check("matvec_empty", [](std::string&) {
    const Vector y = matvec(SkewSparseMatrix(3), Vector{1.0, 2.0, 3.0});
    return y == Vector(3, 0.0);
  });
  check("top2_singular_values_r123", [](std::string& d) {
    const SpectralPair sp = top2_svd(score_difference_matrix(Vector{1.0, 2.0, 3.0}));
    d = format_number(sp.sigma1) + " " + format_number(sp.sigma2);
    return std::abs(sp.sigma1 - std::sqrt(6.0)) < 1e-8 && std::abs(sp.sigma2 - std::sqrt(6.0)) < 1e-8;
  });
  check("top2_zero_matrix_degenerate", [](std::string&) {
    try {
      top2_svd(SkewSparseMatrix(4));
    } catch (const Error& e) {
      return e.code() == ErrorCode::DegenerateSpectrum;
    }
    return false;
  });
  check("complement_standard_basis", [](std::string&) {
    SpectralPair basis;
    basis.u1 = {1.0, 0.0, 0.0};
    basis.u2 = {0.0, 1.0, 0.0};
    const Vector o = orthonormal_complement_in_span(Vector{1.0, 0.0, 0.0}, basis);
    return std::abs(std::abs(o[1]) - 1.0) < 1e-15 && o[0] == 0.0 && o[2] == 0.0;
  });
  check("kendall_reversal", [](std::string&) {
    return kendall_distance(Permutation::identity(4), Permutation({3, 2, 1, 0})) == 6;
  });
  check("ingest_folding", [](std::string&) {
    std::istringstream in("0,1,2\n1,0,-3\n");
    const MeasurementSet m = parse_edge_list(in);
    return m.n == 2 && m.edges.size() == 1 && m.edges[0].i == 0 && m.edges[0].j == 1 &&
           m.edges[0].value == 5.0;
  });
  check("ingest_self_loop", [](std::string&) {
    std::istringstream in("2,2,1\n");
    try {
      parse_edge_list(in);
    } catch (const Error& e) {
      return e.code() == ErrorCode::SelfLoop;
    }
    return false;
  });
  check("sweep_noiseless_complete", [](std::string& d) {
    ExperimentConfig cfg;
    cfg.n = 50;
    cfg.algorithms = {Method::SvdRs};
    cfg.threads = 1;
    const auto rows = run_sweep(cfg);
    d = rows.front().status + " kendall=" + format_number(rows.front().kendall) +
        " rmse=" + format_number(rows.front().rmse);
    return rows.front().ok() && rows.front().kendall == 0.0 && rows.front().rmse < 1e-6;
  });
  check("least_squares_noiseless", [](std::string& d) {
    const ScoreVector r = generate_scores({}, 30, 7);
    const MeasurementSet m = generate_ero(r, {30, 0.5, 1.0, 11});
    const RankingResult res = least_squares_rank(IncidenceSystem::from(m), 30);
    const double err = rmse(r.r, res.score_estimate);
    d = "rmse=" + format_number(err);
    return err < 1e-8;
  });
  check("real_path_noiseless_upsets", [](std::string& d) {
    const ScoreVector r = generate_scores({}, 40, 3);
    const MeasurementSet m = generate_ero(r, {40, 1.0, 1.0, 5});
    RealEvalOptions opts;
    opts.algorithms = {Method::SvdRs};
    const RealEvaluation ev = evaluate_real(m, opts);
    d = ev.rows.front().status + " upsets=" + format_number(ev.rows.front().upsets);
    return ev.rows.front().ok() && ev.rows.front().upsets == 0.0;
  });
  check("prune_removes_leaves", [](std::string&) {
    // K4 on {0,1,2,3} plus leaves 4, 5 hanging off item 0.
    const MeasurementSet m = MeasurementSet::from(
        6, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {1, 2, 1}, {1, 3, 1}, {2, 3, 1}, {0, 4, 1}, {0, 5, 1}});
    const PrunedSet p = prune(m, 3);
    return p.kept == std::vector<std::size_t>{0, 1, 2, 3} && p.set.edges.size() == 6;
  });
  check("config_unknown_key", [](std::string&) {
    try {
      parse_config("n = 10\nbogus = 1\n");
    } catch (const Error& e) {
      return e.code() == ErrorCode::ConfigError &&
             std::string(e.what()).find("bogus") != std::string::npos;
    }
    return false;
  });
  return failures;
}

}  // namespace svdrank
