#include "spdeconv/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "spdeconv/conv_operator.hpp"
#include "spdeconv/dictionary.hpp"
#include "spdeconv/errors.hpp"
#include "spdeconv/fidelity.hpp"
#include "spdeconv/image.hpp"
#include "spdeconv/image_io.hpp"
#include "spdeconv/model_select.hpp"
#include "spdeconv/phantom.hpp"
#include "spdeconv/poisson.hpp"
#include "spdeconv/solver.hpp"
#include "spdeconv/version.hpp"

namespace spdeconv {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string utc_timestamp() {
  const std::time_t tt = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double parse_number(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError("bad " + what + " '" + s + "'");
  }
}

// moving_average:<k> | gaussian:<sigma> | delta | file:<path>
Psf parse_psf_spec(const std::string& spec) {
  if (spec == "delta") return make_psf(PsfKind::delta);
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (head == "moving_average")
    return make_psf(PsfKind::moving_average, parse_number(arg, "moving_average size"));
  if (head == "gaussian")
    return make_psf(PsfKind::gaussian, parse_number(arg, "gaussian sigma"));
  if (head == "file") {
    if (arg.empty()) throw UsageError("psf spec 'file:' needs a path");
    return load_psf(arg);
  }
  throw UsageError("unknown psf spec '" + spec + "'");
}

// kind[:key=value[,key=value]...]
Image parse_phantom_spec(const std::string& spec, Index width, Index height) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const PhantomKind kind = phantom_kind_from_string(head);

  std::map<std::string, double> kv;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos)
        throw UsageError("bad phantom parameter '" + item + "' (expected key=value)");
      kv[item.substr(0, eq)] = parse_number(item.substr(eq + 1), "phantom parameter");
    }
  }

  std::vector<double> params;
  switch (kind) {
    case PhantomKind::flat:
      params = {kv.count("value") ? kv["value"] : 1.0};
      break;
    case PhantomKind::point_grid:
      params = {kv.count("spacing") ? kv["spacing"] : 8.0,
                kv.count("amplitude") ? kv["amplitude"] : 30.0};
      break;
    case PhantomKind::lines_gaussians:
      break;
  }
  return phantom(kind, width, height, params);
}

// <lo>:<hi>:<count>log | <lo>:<hi>:<count>lin | comma-separated values
std::vector<double> parse_grid_spec(const std::string& spec) {
  std::vector<double> grid;
  if (spec.find(':') == std::string::npos) {
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) grid.push_back(parse_number(item, "grid value"));
    if (grid.empty()) throw UsageError("empty grid spec");
    return grid;
  }
  std::stringstream ss(spec);
  std::string lo_s, hi_s, n_s;
  if (!std::getline(ss, lo_s, ':') || !std::getline(ss, hi_s, ':') || !std::getline(ss, n_s))
    throw UsageError("bad grid spec '" + spec + "'");
  bool logspace;
  if (n_s.size() > 3 && n_s.substr(n_s.size() - 3) == "log") {
    logspace = true;
    n_s = n_s.substr(0, n_s.size() - 3);
  } else if (n_s.size() > 3 && n_s.substr(n_s.size() - 3) == "lin") {
    logspace = false;
    n_s = n_s.substr(0, n_s.size() - 3);
  } else {
    throw UsageError("grid spec '" + spec + "' must end in <count>log or <count>lin");
  }
  const double lo = parse_number(lo_s, "grid lower bound");
  const double hi = parse_number(hi_s, "grid upper bound");
  const int n = static_cast<int>(parse_number(n_s, "grid count"));
  if (n < 1 || !(lo > 0) || !(hi >= lo)) throw UsageError("bad grid spec '" + spec + "'");
  grid.resize(n);
  if (n == 1) {
    grid[0] = hi;
    return grid;
  }
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    grid[i] = logspace ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)))
                       : lo + t * (hi - lo);
  }
  return grid;
}

// --- options -----------------------------------------------------------------

struct SolverOptions {
  std::string psf;
  std::string dict = "tidwt:J=4";
  std::string algo = "tseng";
  std::string lambda = "gcv";  // number or "gcv"
  std::string mu = "auto";     // number or "auto"
  int n_fb = 200;
  int n_dr = 1;
  double nu = 0.5;
  std::string dr_init = "from_input";
  double beta = 1.0;
  double tau = 0.5;
  double theta = 0.9;
  double sigma = 1.0;
  double tol = 0.0;
  double offset = kAnscombeOffset;
  std::string init = "zero";  // zero | analysis
  std::string grid;           // empty = data-driven default
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SolverOptions, psf, dict, algo, lambda,
                                                mu, n_fb, n_dr, nu, dr_init, beta, tau,
                                                theta, sigma, tol, offset, init, grid)

struct SimulateOptions {
  std::string phantom;  // phantom spec; empty when --input is used
  std::string input;
  Index width = 0, height = 0;
  double peak = 30.0;
  std::string psf;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "rawf32";
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SimulateOptions, phantom, input, width,
                                                height, peak, psf, seed, out, format)

struct DeconvolveOptions {
  std::string input;
  std::string out;
  std::string format = "rawf32";
  std::uint64_t seed = 0;  // recorded for provenance; the solve is deterministic
  SolverOptions solver;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(DeconvolveOptions, input, out, format,
                                                seed, solver)

struct SweepOptions {
  std::string input;
  std::string reference;
  std::string out;
  std::uint64_t seed = 0;
  SolverOptions solver;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SweepOptions, input, reference, out, seed,
                                                solver)

SolverConfig resolve_solver_config(const SolverOptions& o, double lambda_value) {
  SolverConfig cfg;
  if (o.algo == "fb")
    cfg.algo = Algo::fb;
  else if (o.algo == "tseng")
    cfg.algo = Algo::tseng;
  else
    throw UsageError("unknown algorithm '" + o.algo + "' (expected fb or tseng)");
  cfg.lambda = lambda_value;
  if (o.mu != "auto") cfg.mu = parse_number(o.mu, "mu");
  cfg.n_fb = o.n_fb;
  cfg.beta = o.beta;
  cfg.dr.n_iter = o.n_dr;
  cfg.dr.relaxation = o.nu;
  if (o.dr_init == "from_input")
    cfg.dr.init = DrInit::from_input;
  else if (o.dr_init == "zero")
    cfg.dr.init = DrInit::zero;
  else
    throw UsageError("unknown dr init '" + o.dr_init + "'");
  cfg.tseng = TsengParams{o.tau, o.theta, o.sigma};
  cfg.tol = o.tol;
  cfg.record_history = true;
  return cfg;
}

ImageFormat parse_format(const std::string& f) {
  if (f == "pgm") return ImageFormat::pgm;
  if (f == "rawf32") return ImageFormat::rawf32;
  throw UsageError("unknown image format '" + f + "'");
}

void write_manifest(const fs::path& dir, const std::string& command, std::uint64_t seed,
                    const json& config, const json& inputs, const json& outputs,
                    const json& results) {
  json m{{"command", command}, {"version", kVersion},    {"timestamp", utc_timestamp()},
         {"seed", seed},       {"config", config},       {"inputs", inputs},
         {"outputs", outputs}, {"results", results}};
  std::ofstream out(dir / "manifest.json");
  if (!out) throw DataError("cannot write manifest in " + dir.string());
  out << m.dump(2) << "\n";
}

void write_objective_csv(const fs::path& path, const SolverReport& report) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out.precision(17);
  out << "iteration,objective,support_size,mu,step_norm\n";
  for (size_t i = 0; i < report.objective_history.size(); ++i)
    out << i << ',' << report.objective_history[i] << ',' << report.support_history[i]
        << ',' << report.mu_history[i] << ',' << report.step_norms[i] << '\n';
}

Image load_counts(const std::string& path) {
  const Image y = read_image(path);
  if ((y < 0).any()) throw DataError("negative counts in " + path);
  return y;
}

// --- commands ----------------------------------------------------------------

int cmd_simulate(const SimulateOptions& o, std::ostream& out, std::ostream&) {
  if (o.out.empty()) throw UsageError("simulate: --out is required");
  if (o.psf.empty()) throw UsageError("simulate: --psf is required");
  if (o.phantom.empty() == o.input.empty())
    throw UsageError("simulate: exactly one of --phantom / --input is required");

  Image truth;
  if (!o.input.empty()) {
    truth = read_image(o.input);
  } else {
    if (o.width < 1 || o.height < 1)
      throw UsageError("simulate: --size (or --width/--height) is required with --phantom");
    truth = parse_phantom_spec(o.phantom, o.width, o.height);
  }
  truth = rescale_peak(truth, o.peak);

  const Psf psf = parse_psf_spec(o.psf);
  const ConvOperator conv(psf, truth.cols(), truth.rows());
  // FFT round-off can leave tiny negatives; the Poisson mean must be >= 0.
  const Image blurred = conv.apply(truth).max(0.0);
  const Image noisy = poissonize(blurred, o.seed);

  const ImageFormat fmt = parse_format(o.format);
  const std::string ext = format_extension(fmt);
  fs::create_directories(o.out);
  const fs::path dir(o.out);
  write_image(truth, dir / ("truth" + ext), fmt);
  write_image(blurred, dir / ("blurred" + ext), fmt);
  write_image(noisy, dir / ("noisy" + ext), fmt);

  write_manifest(dir, "simulate", o.seed, json(o), json{{"input", o.input}},
                 json{{"truth", (dir / ("truth" + ext)).string()},
                      {"blurred", (dir / ("blurred" + ext)).string()},
                      {"noisy", (dir / ("noisy" + ext)).string()}},
                 json{{"peak", o.peak}});
  out << "simulate: wrote truth/blurred/noisy to " << dir.string() << "\n";
  return 0;
}

int cmd_deconvolve(const DeconvolveOptions& o, std::ostream& out, std::ostream& err) {
  if (o.out.empty()) throw UsageError("deconvolve: --out is required");
  if (o.solver.psf.empty()) throw UsageError("deconvolve: --psf is required");
  if (o.input.empty()) throw UsageError("deconvolve: --input is required");

  const Image y = load_counts(o.input);
  const Psf psf = parse_psf_spec(o.solver.psf);
  auto conv = std::make_shared<ConvOperator>(psf, y.cols(), y.rows());
  DictionaryPtr dict = parse_dictionary_spec(o.solver.dict, y.cols(), y.rows());
  const FidelityModel model =
      FidelityModel::from_counts(y, std::move(conv), std::move(dict), o.solver.offset);
  const Penalty penalty = Penalty::l1();

  const CoefVec a0 = o.solver.init == "analysis"
                         ? model.dict().analyze(model.stabilized())
                         : CoefVec(CoefVec::Zero(model.dict().num_coefficients()));
  if (o.solver.init != "zero" && o.solver.init != "analysis")
    throw UsageError("unknown init '" + o.solver.init + "' (expected zero or analysis)");

  fs::create_directories(o.out);
  const fs::path dir(o.out);

  double lambda_value;
  json sweep_results = json::object();
  if (o.solver.lambda == "gcv") {
    SolverConfig sweep_cfg = resolve_solver_config(o.solver, 0.0);
    sweep_cfg.algo = Algo::fb;
    const std::vector<double> grid = o.solver.grid.empty()
                                         ? default_lambda_grid(model)
                                         : parse_grid_spec(o.solver.grid);
    const SweepResult sweep = sweep_lambda(model, penalty, sweep_cfg, grid);
    if (sweep.best_index < 0)
      throw NumericalError("gcv selection failed: no grid point produced a finite GCV");
    lambda_value = sweep.best_lambda;
    std::ofstream csv(dir / "gcv_sweep.csv");
    write_sweep_csv(csv, sweep);
    sweep_results = {{"selected_lambda", lambda_value}, {"grid_size", grid.size()}};
  } else {
    lambda_value = parse_number(o.solver.lambda, "lambda");
  }

  const SolverConfig cfg = resolve_solver_config(o.solver, lambda_value);
  const SolverReport report = solve(model, penalty, cfg, a0);
  for (const auto& w : report.warnings) err << "warning: " << w << "\n";

  const ImageFormat fmt = parse_format(o.format);
  const std::string ext = format_extension(fmt);
  write_image(report.restored, dir / ("restored" + ext), fmt);
  write_objective_csv(dir / "objective_log.csv", report);

  json results{{"lambda_used", lambda_value},
               {"mu_used", report.mu_used},
               {"support_size", report.support_size},
               {"iterations_run", report.iterations_run},
               {"final_objective", report.objective_history.empty()
                                       ? json()
                                       : json(report.objective_history.back())}};
  if (!sweep_results.empty()) results["gcv"] = sweep_results;
  write_manifest(dir, "deconvolve", o.seed, json(o), json{{"input", o.input}},
                 json{{"restored", (dir / ("restored" + ext)).string()},
                      {"objective_log", (dir / "objective_log.csv").string()}},
                 results);
  out << "deconvolve: lambda=" << lambda_value << " support=" << report.support_size
      << " restored written to " << dir.string() << "\n";
  return 0;
}

int cmd_sweep(const SweepOptions& o, std::ostream& out, std::ostream&) {
  if (o.out.empty()) throw UsageError("sweep: --out is required");
  if (o.solver.psf.empty()) throw UsageError("sweep: --psf is required");
  if (o.input.empty()) throw UsageError("sweep: --input is required");

  const Image y = load_counts(o.input);
  const Psf psf = parse_psf_spec(o.solver.psf);
  auto conv = std::make_shared<ConvOperator>(psf, y.cols(), y.rows());
  DictionaryPtr dict = parse_dictionary_spec(o.solver.dict, y.cols(), y.rows());
  const FidelityModel model =
      FidelityModel::from_counts(y, std::move(conv), std::move(dict), o.solver.offset);
  const Penalty penalty = Penalty::l1();

  std::optional<Image> reference;
  if (!o.reference.empty()) {
    reference = read_image(o.reference);
    if (reference->rows() != y.rows() || reference->cols() != y.cols())
      throw DataError("sweep: reference size does not match input");
  }

  SolverConfig cfg = resolve_solver_config(o.solver, 0.0);
  const std::vector<double> grid = o.solver.grid.empty() ? default_lambda_grid(model)
                                                         : parse_grid_spec(o.solver.grid);
  const SweepResult sweep =
      sweep_lambda(model, penalty, cfg, grid, reference ? &*reference : nullptr);

  fs::create_directories(o.out);
  const fs::path dir(o.out);
  std::ofstream csv(dir / "sweep.csv");
  if (!csv) throw DataError("cannot write sweep.csv in " + dir.string());
  write_sweep_csv(csv, sweep);

  json results{{"grid_size", grid.size()}};
  if (sweep.best_index >= 0) {
    results["selected_lambda"] = sweep.best_lambda;
    results["selected_index"] = sweep.best_index;
  }
  write_manifest(dir, "sweep", o.seed, json(o),
                 json{{"input", o.input}, {"reference", o.reference}},
                 json{{"sweep_csv", (dir / "sweep.csv").string()}}, results);
  if (sweep.best_index >= 0)
    out << "sweep: selected lambda=" << sweep.best_lambda << "\n";
  else
    out << "sweep: no grid point produced a finite GCV\n";
  return 0;
}

int cmd_metrics(const std::string& reference_path, const std::string& estimate_path,
                std::ostream& out) {
  const Image ref = read_image(reference_path);
  const Image est = read_image(estimate_path);
  if (ref.rows() != est.rows() || ref.cols() != est.cols())
    throw DataError("metrics: image sizes do not match");
  const MetricReport r = metrics(ref, est);
  json j{{"mae", r.mae},
         {"mse", r.mse},
         {"peak_intensity", r.peak_intensity},
         {"normalized_mae", r.peak_intensity > 0 ? json(r.normalized_mae()) : json()}};
  out << j.dump(2) << "\n";
  return 0;
}

int cmd_replay(const std::string& manifest_path, const std::string& out_dir,
               std::ostream& out, std::ostream& err) {
  std::ifstream in(manifest_path);
  if (!in) throw DataError("cannot open manifest " + manifest_path);
  json m;
  try {
    in >> m;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed manifest: ") + e.what());
  }
  if (!m.contains("command") || !m.contains("config"))
    throw DataError("manifest lacks command/config fields");
  const std::string command = m["command"].get<std::string>();

  if (command == "simulate") {
    auto o = m["config"].get<SimulateOptions>();
    o.out = out_dir;
    return cmd_simulate(o, out, err);
  }
  if (command == "deconvolve") {
    auto o = m["config"].get<DeconvolveOptions>();
    o.out = out_dir;
    return cmd_deconvolve(o, out, err);
  }
  if (command == "sweep") {
    auto o = m["config"].get<SweepOptions>();
    o.out = out_dir;
    return cmd_sweep(o, out, err);
  }
  throw DataError("manifest has unknown command '" + command + "'");
}

// --- argument wiring -----------------------------------------------------------

void add_solver_flags(CLI::App* cmd, SolverOptions& s) {
  cmd->add_option("--psf", s.psf, "PSF spec: moving_average:<k> | gaussian:<sigma> | delta | file:<path>");
  cmd->add_option("--dict", s.dict, "dictionary spec: identity | dwt:J=<j> | tidwt:J=<j> | union:<spec>+<spec>");
  cmd->add_option("--algo", s.algo, "fb | tseng");
  cmd->add_option("--lambda", s.lambda, "regularization value, or 'gcv' for automatic selection");
  cmd->add_option("--mu", s.mu, "fixed step size, or 'auto'");
  cmd->add_option("--nfb", s.n_fb, "outer iteration budget");
  cmd->add_option("--ndr", s.n_dr, "inner proximal sub-iterations");
  cmd->add_option("--nu", s.nu, "inner relaxation in (0,1)");
  cmd->add_option("--dr-init", s.dr_init, "inner start point: from_input | zero");
  cmd->add_option("--beta", s.beta, "outer relaxation in (0,1]");
  cmd->add_option("--tau", s.tau, "step shrink factor in (0,1)");
  cmd->add_option("--theta", s.theta, "line-search acceptance factor in (0,1)");
  cmd->add_option("--sigma", s.sigma, "line-search initial step");
  cmd->add_option("--tol", s.tol, "relative-change stopping tolerance (0 disables)");
  cmd->add_option("--offset", s.offset, "stabilization offset (3/8 default, 1/8 bias-corrected)");
  cmd->add_option("--init", s.init, "start point: zero | analysis");
  cmd->add_option("--grid", s.grid, "lambda grid: <lo>:<hi>:<n>log | <lo>:<hi>:<n>lin | v1,v2,...");
}

template <typename T>
void cfg_override(const CLI::App* cmd, const std::string& flag, const json& cfg,
                  const char* key, T& field) {
  if (cmd->count(flag) > 0 || !cfg.contains(key)) return;
  field = cfg[key].get<T>();
}

void apply_solver_config(const CLI::App* cmd, const json& cfg, SolverOptions& s) {
  cfg_override(cmd, "--psf", cfg, "psf", s.psf);
  cfg_override(cmd, "--dict", cfg, "dict", s.dict);
  cfg_override(cmd, "--algo", cfg, "algo", s.algo);
  cfg_override(cmd, "--lambda", cfg, "lambda", s.lambda);
  cfg_override(cmd, "--mu", cfg, "mu", s.mu);
  cfg_override(cmd, "--nfb", cfg, "n_fb", s.n_fb);
  cfg_override(cmd, "--beta", cfg, "beta", s.beta);
  cfg_override(cmd, "--tol", cfg, "tol", s.tol);
  cfg_override(cmd, "--offset", cfg, "offset", s.offset);
  cfg_override(cmd, "--init", cfg, "init", s.init);
  cfg_override(cmd, "--grid", cfg, "grid", s.grid);
  if (cfg.contains("dr")) {
    cfg_override(cmd, "--ndr", cfg["dr"], "n_iter", s.n_dr);
    cfg_override(cmd, "--nu", cfg["dr"], "relaxation", s.nu);
    cfg_override(cmd, "--dr-init", cfg["dr"], "init", s.dr_init);
  }
  if (cfg.contains("tseng")) {
    cfg_override(cmd, "--tau", cfg["tseng"], "tau", s.tau);
    cfg_override(cmd, "--theta", cfg["tseng"], "theta", s.theta);
    cfg_override(cmd, "--sigma", cfg["tseng"], "sigma", s.sigma);
  }
}

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file " + path);
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed config file: ") + e.what());
  }
  return cfg;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"sparse deconvolution of blurred Poisson count images"};
  app.require_subcommand(1);

  SimulateOptions sim;
  std::string sim_size;
  auto* simulate = app.add_subcommand("simulate", "generate truth, blurred, and noisy images");
  simulate->add_option("--phantom", sim.phantom,
                       "phantom spec: lines_gaussians | point_grid[:spacing=..,amplitude=..] | flat[:value=..]");
  simulate->add_option("--input", sim.input, "ground-truth image instead of a phantom");
  simulate->add_option("--size", sim_size, "square size in pixels");
  simulate->add_option("--width", sim.width, "width in pixels");
  simulate->add_option("--height", sim.height, "height in pixels");
  simulate->add_option("--peak", sim.peak, "peak intensity of the rescaled truth");
  simulate->add_option("--psf", sim.psf, "PSF spec");
  simulate->add_option("--seed", sim.seed, "noise seed");
  simulate->add_option("--out", sim.out, "output directory");
  simulate->add_option("--format", sim.format, "pgm | rawf32");

  DeconvolveOptions dec;
  std::string dec_config;
  auto* deconvolve = app.add_subcommand("deconvolve", "restore an observed count image");
  deconvolve->add_option("--input", dec.input, "observed counts image");
  deconvolve->add_option("--out", dec.out, "output directory");
  deconvolve->add_option("--format", dec.format, "pgm | rawf32");
  deconvolve->add_option("--seed", dec.seed, "recorded in the manifest");
  deconvolve->add_option("--config", dec_config, "JSON config file (flags take precedence)");
  add_solver_flags(deconvolve, dec.solver);

  SweepOptions swp;
  std::string swp_config;
  auto* sweep = app.add_subcommand("sweep", "evaluate the selection criterion over a lambda grid");
  sweep->add_option("--input", swp.input, "observed counts image");
  sweep->add_option("--reference", swp.reference, "ground truth for mae/mse columns");
  sweep->add_option("--out", swp.out, "output directory");
  sweep->add_option("--seed", swp.seed, "recorded in the manifest");
  sweep->add_option("--config", swp_config, "JSON config file (flags take precedence)");
  add_solver_flags(sweep, swp.solver);

  std::string met_reference, met_estimate;
  auto* met = app.add_subcommand("metrics", "print restoration metrics as JSON");
  met->add_option("reference", met_reference, "reference image")->required();
  met->add_option("estimate", met_estimate, "estimate image")->required();

  std::string rep_manifest, rep_out;
  auto* rep = app.add_subcommand("replay", "re-run a command from its manifest");
  rep->add_option("manifest", rep_manifest, "manifest.json path")->required();
  rep->add_option("--out", rep_out, "output directory")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);

    if (simulate->parsed()) {
      if (!sim_size.empty()) {
        const auto n = static_cast<Index>(parse_number(sim_size, "size"));
        if (sim.width == 0) sim.width = n;
        if (sim.height == 0) sim.height = n;
      }
      return cmd_simulate(sim, out, err);
    }
    if (deconvolve->parsed()) {
      if (!dec_config.empty())
        apply_solver_config(deconvolve, load_config_file(dec_config), dec.solver);
      return cmd_deconvolve(dec, out, err);
    }
    if (sweep->parsed()) {
      if (!swp_config.empty())
        apply_solver_config(sweep, load_config_file(swp_config), swp.solver);
      return cmd_sweep(swp, out, err);
    }
    if (met->parsed()) return cmd_metrics(met_reference, met_estimate, out);
    if (rep->parsed()) return cmd_replay(rep_manifest, rep_out, out, err);
    throw UsageError("no subcommand given");
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "data error: " << e.what() << "\n";
    return 3;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  }
}

} // namespace spdeconv
