#include "cli.hpp"

#include <chrono>
#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "CLI11.hpp"
#include "deltadiv/deltadiv.hpp"
#include "json.hpp"

namespace deltadiv::cli {
namespace {

using nlohmann::json;

constexpr std::string_view kVersion = DELTADIV_VERSION;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GlobalFlags {
  std::string format;
  std::string out;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  std::string log_base_kl = "e";
};

struct SamplerFlags {
  std::size_t classes = 6;
  std::string mode = "unconstrained";
  std::optional<std::size_t> mu;
  std::optional<double> p_mu;
  std::optional<double> diff;
  std::string diff_grid = "0:1:0.05";
  std::uint64_t count = 100000;
  bool both_dominant = false;
  std::uint64_t rejection_budget = kDefaultRejectionBudget;
};

void add_sampler_flags(CLI::App* cmd, SamplerFlags& f) {
  cmd->add_option("--classes", f.classes, "Number of classes m (>= 2)")->capture_default_str();
  cmd->add_option("--mode", f.mode, "Sampling mode")
      ->check(CLI::IsMember({"unconstrained", "dominant-value", "dominant-diff"}))
      ->capture_default_str();
  cmd->add_option("--mu", f.mu, "Constrained class index (zero-based); dominant modes only");
  cmd->add_option("--p-mu", f.p_mu, "Value of P_mu for dominant-value mode");
  cmd->add_option("--diff", f.diff,
                  "Target |P_mu - Q_mu| for dominant-diff mode; omit to use --diff-grid");
  cmd->add_option("--diff-grid", f.diff_grid,
                  "Grid of diff values for dominant-diff mode, 'start:stop:step' or a comma list; "
                  "count is split equally across the grid")
      ->capture_default_str();
  cmd->add_option("--count", f.count, "Number of pairs")->capture_default_str();
  cmd->add_flag("--both-dominant", f.both_dominant,
                "dominant-diff mode: require mu to be dominant for Q as well");
  cmd->add_option("--rejection-budget", f.rejection_budget,
                  "Attempts allowed per constrained draw")
      ->capture_default_str();
}

double parse_double(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size()) {
    throw UsageError(fmt::format("{}: cannot parse '{}' as a number", what, std::string(text)));
  }
  return v;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = text.find(sep, pos);
    out.emplace_back(text.substr(pos, next == std::string_view::npos ? next : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::vector<double> parse_number_list(std::string_view text, std::string_view what) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_double(item, what));
  return out;
}

std::vector<double> parse_grid(std::string_view text) {
  if (text.find(':') == std::string_view::npos) return parse_number_list(text, "--diff-grid");
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw UsageError("--diff-grid: expected start:stop:step");
  const double start = parse_double(parts[0], "--diff-grid");
  const double stop = parse_double(parts[1], "--diff-grid");
  const double step = parse_double(parts[2], "--diff-grid");
  if (!(step > 0.0) || stop < start) throw UsageError("--diff-grid: need step > 0 and stop >= start");
  std::vector<double> grid;
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
  for (long k = 0; k <= n; ++k) grid.push_back(start + static_cast<double>(k) * step);
  if (std::abs(grid.back() - stop) < 1e-9) grid.back() = stop;
  return grid;
}

LogBase parse_log_base(std::string_view text) {
  if (text == "e") return LogBase::natural();
  return LogBase::of(parse_double(text, "--log-base-kl"));
}

SamplerConfig make_config(const SamplerFlags& f, const GlobalFlags& g) {
  if (!g.seed) throw UsageError("--seed is required; runs are never seeded from the clock");
  SamplerConfig c;
  c.classes = f.classes;
  c.mode = parse_sampling_mode(f.mode);
  c.mu = f.mu;
  c.p_mu = f.p_mu;
  c.diff = f.diff;
  if (c.mode == SamplingMode::DominantDiff && !f.diff) c.diff_grid = parse_grid(f.diff_grid);
  c.count = f.count;
  c.seed = *g.seed;
  c.both_dominant = f.both_dominant;
  c.rejection_budget = f.rejection_budget;
  c.validate();
  return c;
}

std::string jnum(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  return format_number(v);
}

std::string jarray(std::span<const double> values) {
  std::string s = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ',';
    s += jnum(values[i]);
  }
  return s + "]";
}

std::string jstr(std::string_view s) { return json(std::string(s)).dump(); }

Distribution read_distribution(const std::string& arg) {
  if (!arg.empty() && arg.front() == '@') {
    std::ifstream in(arg.substr(1));
    if (!in) throw Error(ErrorCode::ParseError, fmt::format("cannot open '{}'", arg.substr(1)));
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, fmt::format("{}: {}", arg.substr(1), e.what()));
    }
    if (!doc.is_array()) throw Error(ErrorCode::ParseError, "expected a JSON array of numbers");
    std::vector<double> values;
    for (std::size_t i = 0; i < doc.size(); ++i) {
      if (!doc[i].is_number()) {
        throw Error(ErrorCode::ParseError, fmt::format("element {} is not a number", i));
      }
      values.push_back(doc[i].get<double>());
    }
    return Distribution::validate(values);
  }
  return parse_distribution(arg);
}

double evaluate_measure(std::string_view name, const Distribution& p, const Distribution& q,
                        LogBase kl_base) {
  if (name == "kl") return kl(p, q, kl_base).value;
  if (name == "kl-sym") return kl_symmetrized(p, q, kl_base).value;
  if (name == "js") return jensen_shannon(p, q).value;
  if (name == "tv") return total_variation(p, q).value;
  if (name == "delta") return delta_divergence(p, q).value;
  if (name == "delta-star") return delta_star(p, q).value;
  if (name == "delta-max") return delta_max(p, q).value;
  if (name.starts_with("renyi:")) {
    const auto order = name.substr(6);
    if (order == "inf") return renyi_max(p, q, kl_base).value;
    return renyi(p, q, parse_double(order, "renyi order"), kl_base).value;
  }
  if (name.starts_with("f-div:")) {
    return f_divergence(p, q, ConvexGenerator::named(name.substr(6))).value;
  }
  if (name.starts_with("bregman:")) {
    return bregman(p, q, ConvexGenerator::named(name.substr(8))).value;
  }
  throw Error(ErrorCode::UnknownMeasure, fmt::format("unknown measure '{}'", name));
}

std::vector<std::string> expand_measures(std::string_view list) {
  std::vector<std::string> out;
  for (auto& item : split(list, ',')) {
    if (item == "all") {
      for (const char* m : {"kl", "kl-sym", "js", "tv", "delta", "delta-star", "delta-max"}) {
        out.emplace_back(m);
      }
    } else {
      out.push_back(std::move(item));
    }
  }
  return out;
}

// Writes to --out when given, otherwise to the command's stdout stream.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      stream_ = &fallback;
      return;
    }
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw Error(ErrorCode::WriteFailure, fmt::format("cannot open '{}'", path));
    stream_ = &file_;
  }
  std::ostream& stream() { return *stream_; }
  void close() {
    stream_->flush();
    if (!*stream_) throw Error(ErrorCode::WriteFailure, "write failed");
    if (file_.is_open()) file_.close();
  }

 private:
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

std::string breakdown_json(const DeltaBreakdown& b) {
  return fmt::format(
      "{{\"value\":{},\"case_tag\":{},\"a_term\":{},\"b_term\":{},\"pim\":{},"
      "\"group_clutter\":{},\"pim_clutter\":{},\"omega\":{},\"omega_tilde\":{},"
      "\"labels_agree\":{},\"nondominant\":{}}}",
      jnum(b.value), jstr(to_string(b.case_tag)), jnum(b.a_term), jnum(b.b_term), jnum(b.pim),
      jnum(b.group_clutter), jnum(b.pim_clutter), b.dominant_pair.omega,
      b.dominant_pair.omega_tilde, b.dominant_pair.labels_agree() ? "true" : "false",
      json(b.dominant_pair.nondominant).dump());
}

int cmd_compute(const GlobalFlags& g, const std::string& p_arg, const std::string& q_arg,
                const std::string& measure_list, bool verbose, std::ostream& stdout_stream) {
  const LogBase kl_base = parse_log_base(g.log_base_kl);
  const auto measures = expand_measures(measure_list);
  const Distribution p = read_distribution(p_arg);
  const Distribution q = read_distribution(q_arg);
  require_same_size(p, q);

  std::vector<std::pair<std::string, double>> values;
  for (const auto& name : measures) values.emplace_back(name, evaluate_measure(name, p, q, kl_base));
  const bool wants_delta =
      std::find(measures.begin(), measures.end(), "delta") != measures.end();

  const std::string format = g.format.empty() ? (verbose ? "json" : "plain") : g.format;
  Output output(g.out, stdout_stream);
  std::ostream& os = output.stream();
  if (format == "plain") {
    for (const auto& [name, v] : values) os << name << ' ' << format_number(v) << '\n';
    if (verbose && wants_delta) os << breakdown_json(delta_divergence(p, q)) << '\n';
  } else if (format == "csv") {
    os << "measure,value\r\n";
    for (const auto& [name, v] : values) os << csv_quote(name) << ',' << format_number(v) << "\r\n";
  } else {
    std::string body = "{\"p\":" + jarray(p.probs()) + ",\"q\":" + jarray(q.probs()) +
                       ",\"log_base_kl\":" + jnum(kl_base.value()) + ",\"measures\":{";
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) body += ',';
      body += jstr(values[i].first) + ":" + jnum(values[i].second);
    }
    body += "}";
    if (verbose && wants_delta) body += ",\"delta_breakdown\":" + breakdown_json(delta_divergence(p, q));
    body += "}";
    os << body << '\n';
  }
  output.close();
  return kExitOk;
}

int cmd_sample(const GlobalFlags& g, const SamplerFlags& f, std::ostream& stdout_stream) {
  const SamplerConfig config = make_config(f, g);
  const std::string format = g.format.empty() ? "csv" : g.format;
  Output output(g.out, stdout_stream);
  std::ostream& os = output.stream();
  const std::size_t m = config.classes;
  if (format == "csv") {
    os << "sample_id";
    for (std::size_t i = 0; i < m; ++i) os << ",p_" << i;
    for (std::size_t i = 0; i < m; ++i) os << ",q_" << i;
    os << "\r\n";
  } else if (format == "json") {
    os << "[";
  }
  for (std::uint64_t k = 0; k < config.count; ++k) {
    const SampledPair pair = sample_pair_at(config, k);
    if (format == "csv") {
      os << k;
      for (double v : pair.p.probs()) os << ',' << format_number(v);
      for (double v : pair.q.probs()) os << ',' << format_number(v);
      os << "\r\n";
    } else {
      if (format == "json" && k) os << ",";
      os << "{\"sample_id\":" << k << ",\"p\":" << jarray(pair.p.probs())
         << ",\"q\":" << jarray(pair.q.probs()) << "}";
      if (format == "jsonl") os << '\n';
    }
  }
  if (format == "json") os << "]\n";
  output.close();
  return kExitOk;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  return fmt::format("{:%Y-%m-%dT%H:%M:%S}Z", fmt::gmtime(std::chrono::system_clock::to_time_t(now)));
}

int cmd_experiment(const GlobalFlags& g, const SamplerFlags& f, const std::string& measures,
                   double kl_ceiling, std::size_t chunk, std::ostream& stdout_stream) {
  if (g.out.empty()) throw UsageError("experiment requires --out PATH");
  const SamplerConfig config = make_config(f, g);
  const std::string format = g.format.empty() ? "csv" : g.format;
  if (format != "csv" && format != "jsonl") {
    throw UsageError("experiment supports --format csv or jsonl");
  }
  ScatterOptions options;
  options.kl_base = parse_log_base(g.log_base_kl);
  options.kl_ceiling = kl_ceiling;
  options.workers = g.workers;
  options.chunk_size = chunk;
  options.measures = {false, false, false};
  for (const auto& name : split(measures, ',')) {
    if (name == "all") {
      options.measures = {true, true, true};
    } else if (name == "kl") {
      options.measures.kl = true;
    } else if (name == "kl-sym") {
      options.measures.kl_sym = true;
    } else if (name == "js") {
      options.measures.js = true;
    } else if (name != "none") {
      throw UsageError(fmt::format("--measures: unknown optional measure '{}'", name));
    }
  }

  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  Output output(g.out, stdout_stream);
  RecordWriter writer(output.stream(),
                      format == "csv" ? RecordFormat::Csv : RecordFormat::Jsonl);
  run_scatter(config, options, [&](const ScatterRecord& r) { writer.write(r); });
  writer.finish();
  output.close();
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json manifest;
  manifest["tool_version"] = std::string(kVersion);
  manifest["command"] = "experiment";
  manifest["config"] = {
      {"classes", config.classes},
      {"mode", std::string(to_string(config.mode))},
      {"mu", config.mu ? json(*config.mu) : json(nullptr)},
      {"p_mu", config.p_mu ? json(format_number(*config.p_mu)) : json(nullptr)},
      {"diff", config.diff ? json(format_number(*config.diff)) : json(nullptr)},
      {"diff_grid", f.diff_grid},
      {"count", config.count},
      {"seed", config.seed},
      {"both_dominant", config.both_dominant},
      {"rejection_budget", config.rejection_budget},
      {"sampling_law", "flat-dirichlet"},
      {"format", format},
      {"out", g.out},
      {"workers", g.workers},
      {"log_base_kl", g.log_base_kl},
      {"kl_ceiling", format_number(kl_ceiling)},
      {"measures", measures},
  };
  std::vector<std::string> grid;
  for (double d : config.diff_grid) grid.push_back(format_number(d));
  manifest["diff_grid_values"] = grid;
  manifest["seed"] = config.seed;
  manifest["started_at"] = started;
  manifest["finished_at"] = utc_now();
  manifest["rows"] = writer.rows();
  manifest["output"] = g.out;
  manifest["checksum_sha256"] = writer.checksum();

  const std::string manifest_path = g.out + ".manifest.json";
  std::ofstream mf(manifest_path, std::ios::binary | std::ios::trunc);
  mf << manifest.dump(2) << '\n';
  if (!mf) throw Error(ErrorCode::WriteFailure, fmt::format("cannot write '{}'", manifest_path));

  stdout_stream << fmt::format("rows={} runtime_s={:.3f} out={} sha256={}\n", writer.rows(),
                               seconds, g.out, writer.checksum());
  return kExitOk;
}

int cmd_sweep(const GlobalFlags& g, const std::string& in_path, const std::string& measure,
              std::optional<double> reference, const std::string& thresholds,
              std::optional<double> bin_width, std::ostream& stdout_stream) {
  if (!bin_width && !reference) {
    throw UsageError("sweep requires --reference (the d_delta threshold defining ground truth)");
  }
  std::ifstream in(in_path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, fmt::format("cannot open '{}'", in_path));
  const std::vector<ScatterRecord> records = read_records_csv(in);
  const std::string format = g.format.empty() ? "csv" : g.format;
  Output output(g.out, stdout_stream);
  std::ostream& os = output.stream();

  if (bin_width) {
    const auto bins = bin_by_delta(records, *bin_width);
    const char* stats[] = {"d_delta", "d_tv", "d_kl", "delta_star", "delta_max"};
    if (format == "csv") {
      os << "bin,lower,upper,count";
      for (const char* s : stats) os << ',' << s << "_min," << s << "_max," << s << "_mean";
      os << ",max_tv_gap\r\n";
    } else if (format == "json") {
      os << '[';
    }
    for (std::size_t k = 0; k < bins.size(); ++k) {
      const BinSummary& b = bins[k];
      const Extremes ex[] = {b.d_delta, b.d_tv, b.d_kl, b.delta_star, b.delta_max};
      if (format == "csv") {
        os << b.bin << ',' << format_number(b.lower) << ',' << format_number(b.upper) << ','
           << b.count;
        for (const auto& e : ex) {
          os << ',' << format_number(e.min) << ',' << format_number(e.max) << ','
             << format_number(e.mean);
        }
        os << ',' << format_number(b.max_tv_gap) << "\r\n";
      } else {
        if (format == "json" && k) os << ',';
        os << "{\"bin\":" << b.bin << ",\"lower\":" << jnum(b.lower)
           << ",\"upper\":" << jnum(b.upper) << ",\"count\":" << b.count;
        for (std::size_t s = 0; s < 5; ++s) {
          os << ",\"" << stats[s] << "\":{\"min\":" << jnum(ex[s].min)
             << ",\"max\":" << jnum(ex[s].max) << ",\"mean\":" << jnum(ex[s].mean) << '}';
        }
        os << ",\"max_tv_gap\":" << jnum(b.max_tv_gap) << '}';
        if (format == "jsonl") os << '\n';
      }
    }
    if (format == "json") os << "]\n";
    output.close();
    return kExitOk;
  }

  const auto reports =
      threshold_sweep(records, measure, *reference, parse_number_list(thresholds, "--thresholds"));
  if (format == "csv") {
    os << "threshold,measure_name,reference_measure,reference_threshold,false_positive_rate,"
          "false_negative_rate,false_positives,false_negatives,congruent,incongruent,"
          "sample_count\r\n";
  } else if (format == "json") {
    os << '[';
  }
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const ThresholdReport& r = reports[k];
    if (format == "csv") {
      os << format_number(r.threshold) << ',' << csv_quote(r.measure_name) << ','
         << csv_quote(r.reference_measure) << ',' << format_number(r.reference_threshold) << ','
         << format_number(r.false_positive_rate) << ',' << format_number(r.false_negative_rate)
         << ',' << r.false_positives << ',' << r.false_negatives << ',' << r.congruent << ','
         << r.incongruent << ',' << r.sample_count << "\r\n";
    } else {
      if (format == "json" && k) os << ',';
      os << "{\"threshold\":" << jnum(r.threshold) << ",\"measure_name\":" << jstr(r.measure_name)
         << ",\"reference_measure\":" << jstr(r.reference_measure)
         << ",\"reference_threshold\":" << jnum(r.reference_threshold)
         << ",\"false_positive_rate\":" << jnum(r.false_positive_rate)
         << ",\"false_negative_rate\":" << jnum(r.false_negative_rate)
         << ",\"false_positives\":" << r.false_positives
         << ",\"false_negatives\":" << r.false_negatives << ",\"congruent\":" << r.congruent
         << ",\"incongruent\":" << r.incongruent << ",\"sample_count\":" << r.sample_count
         << '}';
      if (format == "jsonl") os << '\n';
    }
  }
  if (format == "json") os << "]\n";
  output.close();
  return kExitOk;
}

int cmd_metric_search(const GlobalFlags& g, std::size_t classes, std::uint64_t triples,
                      std::ostream& stdout_stream) {
  if (!g.seed) throw UsageError("--seed is required; runs are never seeded from the clock");
  const auto found = metric_violation_search(classes, triples, *g.seed);
  Output output(g.out, stdout_stream);
  std::ostream& os = output.stream();
  const bool as_json = g.format == "json" || g.format == "jsonl";
  if (!found) {
    if (as_json) {
      os << fmt::format("{{\"classes\":{},\"triples\":{},\"seed\":{},\"found\":false}}\n",
                        classes, triples, *g.seed);
    } else {
      os << "none\n";
    }
  } else if (as_json) {
    os << fmt::format(
        "{{\"classes\":{},\"triples\":{},\"seed\":{},\"found\":true,\"triple_index\":{},"
        "\"a\":{},\"b\":{},\"c\":{},\"d_ac\":{},\"d_ab\":{},\"d_bc\":{},\"margin\":{}}}\n",
        classes, triples, *g.seed, found->triple_index, jarray(found->a.probs()),
        jarray(found->b.probs()), jarray(found->c.probs()), jnum(found->d_ac), jnum(found->d_ab),
        jnum(found->d_bc), jnum(found->margin));
  } else {
    os << "violation triple_index=" << found->triple_index
       << " margin=" << format_number(found->margin) << '\n'
       << "a " << jarray(found->a.probs()) << '\n'
       << "b " << jarray(found->b.probs()) << '\n'
       << "c " << jarray(found->c.probs()) << '\n';
  }
  output.close();
  return kExitOk;
}

bool is_usage_error(ErrorCode code) {
  return code == ErrorCode::InvalidConfig || code == ErrorCode::InfeasibleConstraint ||
         code == ErrorCode::UnknownMeasure;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Delta divergence and classical divergences for classifier incongruence", "deltadiv"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--format", g.format,
                 "Output format: csv, jsonl or json (compute also accepts plain; default plain "
                 "for compute, csv otherwise)")
      ->check(CLI::IsMember({"csv", "jsonl", "json", "plain"}));
  app.add_option("--out", g.out, "Output path (default: standard output)");
  app.add_option("--seed", g.seed, "Seed for all randomness (required by sampling commands)");
  app.add_option("--workers", g.workers, "Parallel workers; output is identical for any value")
      ->check(CLI::Range(1u, 1024u))
      ->capture_default_str();
  app.add_option("--log-base-kl", g.log_base_kl,
                 "Logarithm base for kl, kl-sym and renyi ('e' or a number)")
      ->capture_default_str();

  std::string p_arg, q_arg, measure_list = "all";
  bool verbose = false;
  auto* compute = app.add_subcommand("compute", "Evaluate measures for one pair of distributions");
  compute->add_option("--p", p_arg, "First distribution, e.g. 0.5,0.3,0.2 or @file.json")->required();
  compute->add_option("--q", q_arg, "Second distribution")->required();
  compute->add_option("--measure", measure_list,
                      "Comma list of kl, kl-sym, js, tv, renyi:<alpha|inf>, f-div:<kl|tv|squared>, "
                      "bregman:<kl|squared>, delta, delta-star, delta-max, all")
      ->capture_default_str();
  compute->add_flag("--verbose", verbose, "Include the Delta divergence breakdown (JSON)");

  SamplerFlags sample_flags;
  auto* sample = app.add_subcommand("sample", "Emit sampled distribution pairs");
  add_sampler_flags(sample, sample_flags);

  SamplerFlags exp_flags;
  std::string exp_measures = "all";
  double kl_ceiling = kDefaultKlCeiling;
  std::size_t chunk = 4096;
  auto* experiment = app.add_subcommand("experiment", "Run a scatter experiment to a file");
  add_sampler_flags(experiment, exp_flags);
  experiment->add_option("--measures", exp_measures,
                         "Optional measures to evaluate: all, none or a list of kl, kl-sym, js")
      ->capture_default_str();
  experiment->add_option("--kl-ceiling", kl_ceiling, "Plot ceiling for the kl_clipped column")
      ->capture_default_str();
  experiment->add_option("--chunk", chunk, "Rows evaluated per parallel batch")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::string in_path, sweep_measure = "d_kl", thresholds = "0.75,1,2,3,4,8";
  std::optional<double> reference, bin_width;
  auto* sweep = app.add_subcommand("sweep", "Threshold sweep or D_delta binning of a scatter CSV");
  sweep->add_option("--in", in_path, "Scatter CSV written by 'experiment'")->required();
  sweep->add_option("--measure", sweep_measure, "Column to threshold")->capture_default_str();
  sweep->add_option("--reference", reference,
                    "d_delta threshold separating congruent from incongruent rows");
  sweep->add_option("--thresholds", thresholds, "Candidate thresholds")->capture_default_str();
  sweep->add_option("--bin-width", bin_width, "Emit per-bin summaries by d_delta instead");

  std::size_t search_classes = 3;
  std::uint64_t triples = 1000000;
  auto* search = app.add_subcommand("metric-search", "Search for a D_delta triangle violation");
  search->add_option("--classes", search_classes, "Number of classes")->capture_default_str();
  search->add_option("--triples", triples, "Number of sampled triples")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*compute) return cmd_compute(g, p_arg, q_arg, measure_list, verbose, out);
    if (*sample) return cmd_sample(g, sample_flags, out);
    if (*experiment) return cmd_experiment(g, exp_flags, exp_measures, kl_ceiling, chunk, out);
    if (*sweep) {
      return cmd_sweep(g, in_path, sweep_measure, reference, thresholds, bin_width, out);
    }
    if (*search) return cmd_metric_search(g, search_classes, triples, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << (is_usage_error(e.code()) ? "usage error: " : "error: ") << e.what() << '\n';
    return is_usage_error(e.code()) ? kExitUsage : kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace deltadiv::cli
