#include "cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "dsi/dataset.hpp"
#include "dsi/distance.hpp"
#include "dsi/errors.hpp"
#include "dsi/fetch.hpp"
#include "dsi/measures.hpp"
#include "dsi/separability.hpp"
#include "dsi/synthetic.hpp"
#include "repro.hpp"
#include "table.hpp"

namespace dsi::cli {

namespace {

using Json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Buffers an artifact and writes it to --output or the given stream at the end,
// so a failed command leaves no partial file behind.
class Sink {
 public:
  Sink(std::ostream& fallback, std::string path) : fallback_(fallback), path_(std::move(path)) {}
  std::ostream& stream() { return buf_; }
  void commit() {
    if (path_.empty() || path_ == "-") {
      fallback_ << buf_.str();
      return;
    }
    std::ofstream f(path_, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write '" + path_ + "'");
    f << buf_.str();
    if (!f) throw Error("failed writing '" + path_ + "'");
  }

 private:
  std::ostream& fallback_;
  std::string path_;
  std::ostringstream buf_;
};

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] != b[j - 1])});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

void collect_names(const CLI::App* app, std::set<std::string>& flags,
                   std::set<std::string>& commands) {
  for (const auto* opt : app->get_options()) {
    for (const auto& l : opt->get_lnames()) flags.insert("--" + l);
  }
  for (const auto* sub : app->get_subcommands([](const CLI::App*) { return true; })) {
    commands.insert(sub->get_name());
    collect_names(sub, flags, commands);
  }
}

// "did you mean" hint for the first unrecognised token.
std::string suggestion(const CLI::App& app, const std::vector<std::string>& args) {
  std::set<std::string> flags, commands;
  collect_names(&app, flags, commands);
  for (const auto& raw : args) {
    if (raw.rfind("--", 0) == 0) {
      const std::string tok = raw.substr(0, raw.find('='));
      if (flags.count(tok)) continue;
      std::string best;
      std::size_t best_d = 4;
      for (const auto& f : flags) {
        const auto d = edit_distance(tok, f);
        if (d < best_d) best_d = d, best = f;
      }
      if (!best.empty()) return "did you mean '" + best + "'?";
      return {};
    }
  }
  for (const auto& raw : args) {
    if (raw.empty() || raw[0] == '-' || commands.count(raw)) continue;
    for (const auto& c : commands) {
      if (edit_distance(raw, c) <= 2) return "did you mean '" + c + "'?";
    }
    break;
  }
  return {};
}

// ---- shared option groups ----

struct CsvFlags {
  std::string label_col = "label";
  char delimiter = ',';
  bool no_header = false;

  void add(CLI::App* app) {
    app->add_option("--label-col", label_col,
                    "Label column: header name, or zero-based index when all digits")
        ->capture_default_str();
    app->add_option("--delimiter", delimiter, "Field delimiter")->capture_default_str();
    app->add_flag("--no-header", no_header, "Input has no header row");
  }

  CsvOptions options() const {
    CsvOptions o;
    o.delimiter = delimiter;
    o.has_header = !no_header;
    if (!label_col.empty() && std::all_of(label_col.begin(), label_col.end(),
                                          [](unsigned char c) { return std::isdigit(c); })) {
      o.label_column = static_cast<std::size_t>(std::stoull(label_col));
    } else {
      if (no_header) throw UsageError("--label-col must be an index when --no-header is set");
      o.label_column = label_col;
    }
    return o;
  }
};

const std::vector<std::string> kMetricNames{"euclidean", "cityblock",   "chebyshev",
                                            "correlation", "cosine",    "mahalanobis",
                                            "l1",        "l2",          "linf",
                                            "manhattan"};

DistanceMetric make_metric(const std::string& name, const Dataset& ds, std::optional<double> ridge) {
  const MetricKind kind = parse_metric(name);
  if (kind == MetricKind::Mahalanobis) return fit_mahalanobis(ds, ridge);
  if (ridge) throw UsageError("--ridge only applies to --metric mahalanobis");
  return DistanceMetric(kind);
}

std::string label_text(const Dataset& ds, Label l) {
  const auto& names = ds.label_names();
  return l < names.size() ? names[l] : std::to_string(l);
}

std::string stem(const std::string& path) {
  auto slash = path.find_last_of('/');
  std::string s = slash == std::string::npos ? path : path.substr(slash + 1);
  auto dot = s.rfind('.');
  return dot == std::string::npos || dot == 0 ? s : s.substr(0, dot);
}

void write_table(Sink& sink, const Table& t, const std::string& format) {
  if (format == "text") {
    t.write_text(sink.stream());
  } else {
    t.write_csv(sink.stream());
  }
}

// ---- generate ----

struct GenerateArgs {
  std::string config, shape, output;
  std::size_t n_per_class = 0;
  std::uint64_t seed = 0;
  double noise = 0, cluster_sd = 0;
  CLI::Option *shape_opt, *n_opt, *seed_opt, *noise_opt, *sd_opt;
};

int run_generate(const GenerateArgs& a, std::ostream& out, std::ostream& err) {
  std::map<std::string, std::string> kv;
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) throw Error("cannot open '" + a.config + "'");
    kv = parse_key_value_config(in);
  }
  if (a.shape_opt->count()) kv["shape"] = a.shape;
  if (a.n_opt->count()) kv["n_per_class"] = std::to_string(a.n_per_class);
  if (a.seed_opt->count()) kv["seed"] = std::to_string(a.seed);
  if (a.noise_opt->count()) kv["noise"] = shortest(a.noise);
  if (a.sd_opt->count()) kv["cluster_sd"] = shortest(a.cluster_sd);
  const GeneratorSpec spec = spec_from_key_values(kv);
  const Dataset ds = generate(spec);
  Sink sink(out, a.output);
  write_csv(sink.stream(), ds);
  sink.commit();
  err << "generated " << ds.size() << " points: shape=" << to_string(spec.shape)
      << " n_per_class=" << spec.n_per_class << " seed=" << spec.seed
      << " noise=" << shortest(spec.effective_noise());
  if (spec.cluster_sd) err << " cluster_sd=" << shortest(*spec.cluster_sd);
  err << '\n';
  return kExitOk;
}

// ---- measure ----

struct MeasureArgs {
  std::string input, output, histogram, metric = "euclidean", stat = "ks", format = "json";
  std::vector<std::string> cifar;
  bool cifar100 = false, timing = false;
  CsvFlags csv;
  std::optional<double> ridge;
  std::size_t subsample = 0, trials = 8, bins = 50, threads = 0;
  std::uint64_t seed = 0;
};

Dataset load_input(const std::string& input, const std::vector<std::string>& cifar, bool cifar100,
                   const CsvFlags& csv) {
  if (!input.empty()) return load_csv_file(input, csv.options());
  std::vector<Dataset> parts;
  for (const auto& f : cifar) {
    const auto bytes = read_file_bytes(f);
    parts.push_back(cifar100 ? load_cifar100_batch(bytes) : load_cifar10_batch(bytes));
  }
  return parts.size() == 1 ? std::move(parts.front()) : concatenate(parts);
}

int run_measure(const MeasureArgs& a, std::ostream& out) {
  const Dataset ds = load_input(a.input, a.cifar, a.cifar100, a.csv);
  const auto metric = make_metric(a.metric, ds, a.ridge);
  const Divergence stat = parse_divergence(a.stat);
  DsiOptions opt;
  opt.workers = a.threads;

  const auto start = std::chrono::steady_clock::now();
  SeparabilityReport r = a.subsample ? dsi_subsampled(ds, a.subsample, a.trials, a.seed, metric,
                                                      stat, opt)
                                     : compute_dsi(ds, metric, stat, opt);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (!a.histogram.empty()) {
    Table t{{"bin_left", "bin_right", "count", "set_kind"}, {}};
    for (const auto& row : distance_histograms(class_distance_sets(ds, metric, opt), a.bins)) {
      t.rows.push_back({shortest(row.bin_left), shortest(row.bin_right),
                        std::to_string(row.count), row.set_kind});
    }
    Sink hist(out, a.histogram);
    t.write_csv(hist.stream());
    hist.commit();
  }

  Sink sink(out, a.output);
  const std::string source = a.input.empty() ? a.cifar.front() : a.input;
  if (a.format == "text") {
    auto& s = sink.stream();
    s << "input       " << source << '\n'
      << "points      " << ds.size() << " (" << r.n_classes << " classes, dim " << r.dim << ")\n"
      << "metric      " << to_string(r.metric) << '\n'
      << "stat        " << to_string(r.stat) << '\n';
    if (r.subsample) {
      s << "subsample   " << r.subsample->subset_size << " x " << r.subsample->trials
        << " trials, seed " << r.subsample->seed << ", sd " << fixed(r.subsample->sd, 6) << '\n';
    }
    for (const auto& [label, v] : r.per_class_similarity) {
      s << "class " << label_text(ds, label) << "  " << fixed(v, 6) << '\n';
    }
    s << "DSI         " << fixed(r.dsi, 6) << '\n' << "1-DSI       " << fixed(r.complexity, 6) << '\n';
    if (a.timing) s << "wall time   " << fixed(seconds, 3) << " s\n";
  } else {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "measure";
    j["input"] = source;
    j["n_points"] = ds.size();
    j["n_classes"] = r.n_classes;
    j["dim"] = r.dim;
    j["metric"] = to_string(r.metric);
    j["stat"] = to_string(r.stat);
    j["seed"] = a.seed;
    Json per = Json::object();
    for (const auto& [label, v] : r.per_class_similarity) per[label_text(ds, label)] = v;
    j["per_class_similarity"] = per;
    j["dsi"] = r.dsi;
    j["complexity"] = r.complexity;
    if (r.subsample) {
      j["subsample"] = {{"subset_size", r.subsample->subset_size},
                        {"trials", r.subsample->trials},
                        {"seed", r.subsample->seed},
                        {"mean", r.subsample->mean},
                        {"sd", r.subsample->sd},
                        {"trial_values", r.subsample->trial_values}};
    } else {
      j["subsample"] = nullptr;
    }
    if (a.timing) j["wall_time"] = seconds;
    sink.stream() << j.dump(2) << '\n';
  }
  sink.commit();
  return kExitOk;
}

// ---- compare ----

struct CompareArgs {
  std::vector<std::string> inputs;
  std::string measures = "all", format = "csv", output;
  CsvFlags csv;
  std::uint64_t seed = 0;
  std::size_t n4_samples = 0, threads = 0;
  double density_percentile = 0.15;
};

std::vector<MeasureCode> parse_measure_list(const std::string& text) {
  if (text == "all") return {std::begin(kAllMeasures), std::end(kAllMeasures)};
  std::vector<MeasureCode> codes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      codes.push_back(parse_measure(item));
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  if (codes.empty()) throw UsageError("--measures lists no measure");
  return codes;
}

int run_compare(const CompareArgs& a, std::ostream& out) {
  const auto codes = parse_measure_list(a.measures);
  MeasureOptions mo;
  mo.workers = a.threads;
  mo.seed = a.seed;
  mo.n4_samples = a.n4_samples;
  mo.density_percentile = a.density_percentile;

  Table t;
  t.header.push_back("measure");
  t.rows.resize(codes.size() + 2);
  for (std::size_t i = 0; i < codes.size(); ++i) t.rows[i].push_back(std::string(to_string(codes[i])));
  t.rows[codes.size()].push_back("1-DSI");
  t.rows[codes.size() + 1].push_back("seed");
  auto cell = [&](double v) { return a.format == "text" ? fixed(v, 3) : shortest(v); };
  for (const auto& path : a.inputs) {
    const Dataset ds = load_csv_file(path, a.csv.options());
    t.header.push_back(stem(path));
    const auto values = compute_measures(ds, codes, mo);
    for (std::size_t i = 0; i < codes.size(); ++i) t.rows[i].push_back(cell(values[i].value));
    t.rows[codes.size()].push_back(cell(compute_dsi(ds, {}, Divergence::KS, {a.threads}).complexity));
    t.rows[codes.size() + 1].push_back(std::to_string(a.seed));
  }
  Sink sink(out, a.output);
  write_table(sink, t, a.format);
  sink.commit();
  return kExitOk;
}

// ---- identity ----

struct IdentityArgs {
  std::string a, b, metric = "euclidean", format = "json", output;
  CsvFlags csv;
  std::size_t threads = 0;
};

int run_identity(const IdentityArgs& a, std::ostream& out) {
  CsvOptions opt = a.csv.options();
  opt.min_classes = 1;
  const Dataset da = load_csv_file(a.a, opt);
  const Dataset db = load_csv_file(a.b, opt);
  if (da.dim() != db.dim()) {
    throw InvalidDataset("dimension mismatch: " + std::to_string(da.dim()) + " vs " +
                         std::to_string(db.dim()));
  }
  const auto kind = parse_metric(a.metric);
  DistanceMetric metric(MetricKind::Euclidean);
  if (kind == MetricKind::Mahalanobis) {
    // Pooled over both samples, which are labeled 0 and 1 for the fit.
    std::vector<Dataset> parts;
    parts.emplace_back(da.dim(), std::vector<double>(da.features().begin(), da.features().end()),
                       std::vector<Label>(da.size(), 0));
    parts.emplace_back(db.dim(), std::vector<double>(db.features().begin(), db.features().end()),
                       std::vector<Label>(db.size(), 1));
    metric = fit_mahalanobis(concatenate(parts));
  } else {
    metric = DistanceMetric(kind);
  }
  const PointSet pa(da.dim(), {da.features().begin(), da.features().end()});
  const PointSet pb(db.dim(), {db.features().begin(), db.features().end()});
  const double score = distribution_identity_score(pa, pb, metric, {a.threads});

  Sink sink(out, a.output);
  if (a.format == "text") {
    sink.stream() << "a      " << a.a << " (" << da.size() << " points)\n"
                  << "b      " << a.b << " (" << db.size() << " points)\n"
                  << "metric " << to_string(kind) << '\n'
                  << "score  " << fixed(score, 6) << '\n';
  } else {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "identity";
    j["a"] = a.a;
    j["b"] = a.b;
    j["n_a"] = da.size();
    j["n_b"] = db.size();
    j["dim"] = da.dim();
    j["metric"] = to_string(kind);
    j["score"] = score;
    sink.stream() << j.dump(2) << '\n';
  }
  sink.commit();
  return kExitOk;
}

// ---- fetch ----

struct FetchArgs {
  std::string url, sha256, cache_dir, output;
  long timeout = 600;
};

int run_fetch(const FetchArgs& a, std::ostream& out, std::ostream& err) {
  FetchOptions opt;
  if (!a.cache_dir.empty()) opt.cache_dir = a.cache_dir;
  opt.timeout_seconds = a.timeout;
  const auto bytes = fetch_dataset(a.url, a.sha256, opt);
  const auto dir = opt.cache_dir ? *opt.cache_dir : default_cache_dir();
  const auto digest = sha256_hex(bytes);
  if (!a.output.empty()) {
    std::ofstream f(a.output, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write '" + a.output + "'");
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  }
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "fetch";
  j["url"] = a.url;
  j["sha256"] = digest;
  j["bytes"] = bytes.size();
  j["cache_path"] = cache_path(dir, digest).string();
  out << j.dump(2) << '\n';
  err << "verified " << bytes.size() << " bytes\n";
  return kExitOk;
}

// ---- repro ----

struct ReproArgs {
  std::uint64_t seed = 7;
  std::size_t n_per_class = 1000, threads = 0, trials = 8, runs = 10, airplanes = 0;
  std::string format = "csv", output, cifar_dir;
  std::vector<std::size_t> sizes{100, 500, 1000, 5000};
};

const std::vector<std::string> kMeasureRows{"F1", "N1", "N2", "N3", "N4", "T1", "LSC", "Density"};

int run_table2(const ReproArgs& a, std::ostream& out) {
  const auto rows = repro::shape_suite(a.seed, a.n_per_class, a.threads);
  auto cell = [&](double v) { return a.format == "text" ? fixed(v, 3) : shortest(v); };
  Table t;
  t.header.push_back("measure");
  for (const auto& r : rows) t.header.push_back(std::string(to_string(r.shape)));
  for (MeasureCode c : kAllMeasures) {
    std::vector<std::string> line{std::string(to_string(c))};
    for (const auto& r : rows) line.push_back(cell(r.measures.at(c)));
    t.rows.push_back(line);
  }
  std::vector<std::string> dsi_row{"1-DSI"}, seed_row{"seed"};
  for (const auto& r : rows) {
    dsi_row.push_back(cell(r.complexity));
    seed_row.push_back(std::to_string(a.seed));
  }
  t.rows.push_back(dsi_row);
  t.rows.push_back(seed_row);
  Sink sink(out, a.output);
  write_table(sink, t, a.format);
  sink.commit();
  return kExitOk;
}

int run_sd_sweep(const ReproArgs& a, std::ostream& out, bool figure7) {
  const auto rows = repro::blob_sd_sweep(a.seed, a.n_per_class, a.threads, figure7, !figure7);
  auto cell = [&](double v) { return a.format == "text" ? fixed(v, 4) : shortest(v); };
  Table t;
  if (figure7) {
    t.header = {"sd", "dsi_ks", "dsi_wasserstein", "complexity_ks", "complexity_wasserstein", "seed"};
    for (const auto& r : rows) {
      t.rows.push_back({shortest(r.sd), cell(1.0 - r.ks_complexity), cell(1.0 - *r.w_complexity),
                        cell(r.ks_complexity), cell(*r.w_complexity), std::to_string(a.seed)});
    }
  } else {
    t.header = {"sd", "1-DSI"};
    t.header.insert(t.header.end(), kMeasureRows.begin(), kMeasureRows.end());
    t.header.push_back("seed");
    for (const auto& r : rows) {
      std::vector<std::string> line{shortest(r.sd), cell(r.ks_complexity)};
      for (MeasureCode c : kAllMeasures) line.push_back(cell(r.measures.at(c)));
      line.push_back(std::to_string(a.seed));
      t.rows.push_back(line);
    }
  }
  Sink sink(out, a.output);
  write_table(sink, t, a.format);
  sink.commit();
  return kExitOk;
}

int run_figure12(const ReproArgs& a, std::ostream& out) {
  if (a.cifar_dir.empty()) throw UsageError("figure12 needs --cifar-dir");
  const Dataset cifar = load_cifar10_training_set(a.cifar_dir);
  const auto rows = repro::subset_sweep(cifar, a.sizes, a.trials, a.seed, a.threads);
  auto cell = [&](double v) { return a.format == "text" ? fixed(v, 4) : shortest(v); };
  Table t{{"subset_size", "trials", "mean_dsi", "sd_dsi", "seed"}, {}};
  for (const auto& r : rows) {
    t.rows.push_back({std::to_string(r.subset_size), std::to_string(r.trials), cell(r.mean),
                      cell(r.sd), std::to_string(a.seed)});
  }
  Sink sink(out, a.output);
  write_table(sink, t, a.format);
  sink.commit();
  return kExitOk;
}

int run_section5_2(const ReproArgs& a, std::ostream& out) {
  auto cell = [&](double v) { return a.format == "text" ? fixed(v, 4) : shortest(v); };
  Table t{{"experiment", "n_a", "n_b", "dsi", "sd", "seed"}, {}};
  for (std::size_t n : {a.n_per_class, 2 * a.n_per_class}) {
    const auto r = repro::uniform_convergence(n, a.seed, a.runs, a.threads);
    t.rows.push_back({"uniform_mean_of_" + std::to_string(a.runs), std::to_string(n),
                      std::to_string(n), cell(r.mean), cell(r.sd), std::to_string(a.seed)});
  }
  if (!a.cifar_dir.empty()) {
    const Dataset cifar = load_cifar10_training_set(a.cifar_dir);
    const auto r = repro::cifar_identity(cifar, a.seed, a.threads, a.airplanes);
    t.rows.push_back({"air1_air2", std::to_string(r.air1_air2.n_a), std::to_string(r.air1_air2.n_b),
                      cell(r.air1_air2.score), "", std::to_string(a.seed)});
    t.rows.push_back({"air1_auto", std::to_string(r.air1_auto.n_a), std::to_string(r.air1_auto.n_b),
                      cell(r.air1_auto.score), "", std::to_string(a.seed)});
  }
  Sink sink(out, a.output);
  write_table(sink, t, a.format);
  sink.commit();
  return kExitOk;
}

void add_threads(CLI::App* app, std::size_t& threads) {
  app->add_option("--threads", threads, "Worker cap (0 = all cores)")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distance-based separability index and data-complexity measures", "dsi"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "dsi 0.1.0");

  std::function<int()> action;

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "Write a synthetic two-class dataset as CSV");
  gen->add_option("--config", ga.config, "key=value file (shape, n_per_class, seed, noise, cluster_sd)")
      ->check(CLI::ExistingFile);
  ga.shape_opt = gen->add_option("--shape", ga.shape, "random|spirals|xor|moons|circles|blobs|blob-sd");
  ga.n_opt = gen->add_option("--n-per-class", ga.n_per_class, "Points per class (default 1000)");
  ga.seed_opt = gen->add_option("--seed", ga.seed, "RNG seed (default 0)");
  ga.noise_opt = gen->add_option("--noise", ga.noise, "Noise level (shape default if omitted)");
  ga.sd_opt = gen->add_option("--cluster-sd", ga.cluster_sd, "Cluster SD (blob-sd only)");
  gen->add_option("-o,--output", ga.output, "Output file (default stdout)");
  gen->callback([&] { action = [&] { return run_generate(ga, out, err); }; });

  MeasureArgs ma;
  auto* mea = app.add_subcommand("measure", "Compute the DSI of a labeled dataset");
  auto* in_opt = mea->add_option("--input", ma.input, "Dataset CSV")->check(CLI::ExistingFile);
  auto* cifar_opt = mea->add_option("--cifar", ma.cifar, "CIFAR binary batch file(s)")
                        ->check(CLI::ExistingFile)
                        ->excludes(in_opt);
  mea->add_flag("--cifar100", ma.cifar100, "Batches are CIFAR-100 (coarse labels)")->needs(cifar_opt);
  ma.csv.add(mea);
  mea->add_option("--metric", ma.metric, "Distance metric")
      ->check(CLI::IsMember(kMetricNames))
      ->capture_default_str();
  mea->add_option("--ridge", ma.ridge, "Covariance ridge for mahalanobis (default scale-aware)");
  mea->add_option("--stat", ma.stat, "ks|wasserstein")
      ->check(CLI::IsMember({"ks", "wasserstein", "w", "w1"}))
      ->capture_default_str();
  auto* sub_opt = mea->add_option("--subsample", ma.subsample, "Subset size; averages over --trials");
  mea->add_option("--trials", ma.trials, "Subsample trials")->needs(sub_opt)->capture_default_str();
  mea->add_option("--seed", ma.seed, "Subsample seed")->capture_default_str();
  auto* hist_opt = mea->add_option("--histogram", ma.histogram, "Write ICD/BCD histograms as CSV");
  mea->add_option("--bins", ma.bins, "Histogram bins")->needs(hist_opt)->capture_default_str();
  add_threads(mea, ma.threads);
  mea->add_option("--format", ma.format, "json|text")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  mea->add_flag("--timing", ma.timing, "Include wall time (makes output run-dependent)");
  mea->add_option("-o,--output", ma.output, "Output file (default stdout)");
  mea->callback([&] {
    if (ma.input.empty() && ma.cifar.empty()) throw CLI::RequiredError("--input or --cifar");
    action = [&] { return run_measure(ma, out); };
  });

  CompareArgs ca;
  auto* cmp = app.add_subcommand("compare", "Table of baseline measures and 1-DSI");
  cmp->add_option("--input", ca.inputs, "Dataset CSV (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  ca.csv.add(cmp);
  cmp->add_option("--measures", ca.measures, "all, or a comma list of F1,N1,N2,N3,N4,T1,LSC,Density")
      ->capture_default_str();
  cmp->add_option("--seed", ca.seed, "Seed for N4 interpolation")->capture_default_str();
  cmp->add_option("--n4-samples", ca.n4_samples, "N4 synthetic points (0 = one per point)")
      ->capture_default_str();
  cmp->add_option("--density-percentile", ca.density_percentile, "Density epsilon quantile")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  add_threads(cmp, ca.threads);
  cmp->add_option("--format", ca.format, "csv|text")
      ->check(CLI::IsMember({"csv", "text"}))
      ->capture_default_str();
  cmp->add_option("-o,--output", ca.output, "Output file (default stdout)");
  cmp->callback([&] { action = [&] { return run_compare(ca, out); }; });

  IdentityArgs ia;
  auto* idt = app.add_subcommand("identity", "Score whether two samples share a distribution");
  idt->add_option("--a", ia.a, "First sample CSV")->required()->check(CLI::ExistingFile);
  idt->add_option("--b", ia.b, "Second sample CSV")->required()->check(CLI::ExistingFile);
  ia.csv.add(idt);
  idt->add_option("--metric", ia.metric, "Distance metric")
      ->check(CLI::IsMember(kMetricNames))
      ->capture_default_str();
  add_threads(idt, ia.threads);
  idt->add_option("--format", ia.format, "json|text")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  idt->add_option("-o,--output", ia.output, "Output file (default stdout)");
  idt->callback([&] { action = [&] { return run_identity(ia, out); }; });

  FetchArgs fa;
  auto* fet = app.add_subcommand("fetch", "Download a file into the digest-addressed cache");
  fet->add_option("--url", fa.url, "Source URL (http, https, file)")->required();
  fet->add_option("--sha256", fa.sha256, "Expected SHA-256 (hex, optional sha256: prefix)")->required();
  fet->add_option("--cache-dir", fa.cache_dir, std::string("Cache root (default $") + kCacheDirEnv + ")");
  fet->add_option("--timeout", fa.timeout, "Seconds")->capture_default_str();
  fet->add_option("-o,--output", fa.output, "Also copy the bytes here");
  fet->callback([&] { action = [&] { return run_fetch(fa, out, err); }; });

  ReproArgs ra;
  auto* rep = app.add_subcommand("repro", "Regenerate the reference tables and sweeps");
  rep->require_subcommand(1);
  auto common = [&](CLI::App* s, bool synthetic) {
    s->add_option("--seed", ra.seed, "Seed")->capture_default_str();
    if (synthetic) {
      s->add_option("--n-per-class", ra.n_per_class, "Points per class")->capture_default_str();
    }
    add_threads(s, ra.threads);
    s->add_option("--format", ra.format, "csv|text")
        ->check(CLI::IsMember({"csv", "text"}))
        ->capture_default_str();
    s->add_option("-o,--output", ra.output, "Output file (default stdout)");
  };
  auto* t2 = rep->add_subcommand("table2", "Measures and 1-DSI on the six shapes");
  common(t2, true);
  t2->callback([&] { action = [&] { return run_table2(ra, out); }; });
  auto* f4 = rep->add_subcommand("figure4", "Measures and 1-DSI across blob SD 1..9");
  common(f4, true);
  f4->callback([&] { action = [&] { return run_sd_sweep(ra, out, false); }; });
  auto* f7 = rep->add_subcommand("figure7", "KS- and Wasserstein-based DSI across blob SD 1..9");
  common(f7, true);
  f7->callback([&] { action = [&] { return run_sd_sweep(ra, out, true); }; });
  auto* f12 = rep->add_subcommand("figure12", "CIFAR-10 subset-size sweep");
  common(f12, false);
  f12->add_option("--cifar-dir", ra.cifar_dir, "Directory with the CIFAR-10 binary batches")
      ->required();
  f12->add_option("--sizes", ra.sizes, "Subset sizes")->delimiter(',')->capture_default_str();
  f12->add_option("--trials", ra.trials, "Trials per size")->capture_default_str();
  f12->callback([&] { action = [&] { return run_figure12(ra, out); }; });
  auto* s52 = rep->add_subcommand("section5_2", "Identity experiments (uniform; CIFAR airplanes)");
  common(s52, true);
  s52->add_option("--runs", ra.runs, "Uniform runs (seeds seed..seed+runs-1)")->capture_default_str();
  s52->add_option("--cifar-dir", ra.cifar_dir, "Directory with the CIFAR-10 binary batches");
  s52->add_option("--airplanes", ra.airplanes, "Cap on airplane images (0 = all 5000)")
      ->capture_default_str();
  s52->callback([&] { action = [&] { return run_section5_2(ra, out); }; });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    if (auto hint = suggestion(app, args); !hint.empty()) err << hint << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    return action();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SpecError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  }
}

}  // namespace dsi::cli
