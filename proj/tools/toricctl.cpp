// toricctl: command-line front end for decompositions, regularity
// certificates, patch evaluation and degeneration experiments.
//
// Exit codes: 0 ok / regular / pass, 1 error, 2 irregular, 3 convergence failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <omp.h>

#include <CLI11.hpp>

#include "toric/degeneration.hpp"
#include "toric/error.hpp"
#include "toric/io.hpp"

namespace fs = std::filesystem;
using namespace toric;

namespace {

constexpr int kExitError = 1;
constexpr int kExitIrregular = 2;
constexpr int kExitConvergenceFail = 3;

struct Options {
  std::string file;
  std::string second;
  int resolution = 0;
  std::string schedule;
  std::string out;
  double tolerance_scale = 0.0;
  std::int64_t seed = -1;
  bool serial = false;
  int threads = 0;
  bool control_surface = false;
};

std::vector<double> parse_schedule(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad schedule entry '" + item + "'");
    }
  }
  if (out.empty()) throw Error(ErrorCode::ParseError, "empty schedule");
  return out;
}

io::Experiment load(const Options& o) {
  auto e = io::load_experiment(o.file);
  if (o.resolution != 0) {
    if (o.resolution < 2) throw Error(ErrorCode::InvalidConfig, "resolution must be at least 2");
    e.resolution = o.resolution;
  }
  if (!o.schedule.empty()) e.schedule = parse_schedule(o.schedule);
  if (o.tolerance_scale != 0.0) e.tolerance_scale = o.tolerance_scale;
  if (!o.out.empty()) e.out_dir = o.out;
  return e;
}

Execution execution(const Options& o) {
  if (o.threads > 0) omp_set_num_threads(o.threads);
  return o.serial ? Execution::Serial : Execution::Parallel;
}

std::string format_t(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

int cmd_decompose(const Options& o) {
  auto e = load(o);
  Lifting lifting;
  if (o.seed >= 0) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(o.seed));
    std::uniform_int_distribution<int> dist(0, 4);
    RationalVector v;
    for (std::size_t a = 0; a < e.config.size(); ++a) v.push_back(dist(rng));
    lifting = Lifting(std::move(v));
  } else if (!o.second.empty()) {
    lifting = io::lifting_from_json(io::read_json_file(o.second), o.second);
  } else {
    lifting = e.require_lifting();
  }
  auto dec = regular_decomposition(e.config, lifting);
  io::Json out{{"facets", io::facets_to_json(dec.facets())}};
  if (o.seed >= 0) out["lifting"] = io::to_json(lifting);
  std::cout << out.dump() << "\n";
  return 0;
}

int cmd_check_regular(const Options& o) {
  auto e = load(o);
  std::vector<std::vector<int>> facets;
  if (!o.second.empty()) {
    facets = io::facets_from_json(io::read_json_file(o.second), o.second);
  } else if (e.facets) {
    facets = *e.facets;
  } else {
    facets = regular_decomposition(e.config, e.require_lifting()).facets();
  }
  auto dec = validate_decomposition(e.config, facets);
  auto cert = certify_regularity(e.config, dec);
  std::cout << io::dump(io::to_json(dec, cert));
  return std::holds_alternative<RegularWitness>(cert) ? 0 : kExitIrregular;
}

int cmd_eval(const Options& o) {
  auto e = load(o);
  const auto exec = execution(o);
  const auto spec = e.spec();
  SampledSet set;
  if (o.control_surface) {
    Decomposition dec = e.facets ? validate_decomposition(e.config, *e.facets)
                                 : regular_decomposition(e.config, e.require_lifting());
    set = sample(control_surface(spec, dec), e.resolution, exec);
  } else {
    set = sample(spec, e.resolution, exec);
  }
  if (o.out.empty()) {
    std::cout << io::obj_string(set);
  } else {
    io::export_obj(set, o.out);
  }
  return 0;
}

fs::path output_dir(const io::Experiment& e) {
  if (e.out_dir.empty()) throw Error(ErrorCode::IoError, "--out DIR is required");
  fs::path dir(e.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

void report(const SweepResult& r) {
  std::fprintf(stderr, "threshold %.6g, nonincreasing %s, final %s", r.threshold,
               r.nonincreasing ? "yes" : "no", r.final_pass ? "below" : "above");
  if (r.passing_from > 0) std::fprintf(stderr, ", below threshold from t=%g", r.passing_from);
  std::fprintf(stderr, "\n");
}

int cmd_degenerate(const Options& o) {
  auto e = load(o);
  const auto exec = execution(o);
  const auto spec = e.spec();
  const auto& lifting = e.require_lifting();
  const auto dir = output_dir(e);
  const auto surface = control_surface(spec, regular_decomposition(e.config, lifting));
  io::export_obj(sample(surface, e.resolution, exec), dir / "control_surface.obj");
  for (double t : e.schedule) {
    io::export_obj(sample_degeneration(spec, lifting, t, e.resolution, exec), dir / ("degeneration_t" + format_t(t) + ".obj"));
  }
  auto result = distance_sweep(spec, lifting, surface, e.schedule, e.resolution, e.tolerance_scale, exec);
  io::write_text_file(dir / "sweep.csv", sweep_csv(result));
  report(result);
  return 0;
}

int cmd_verify(const Options& o) {
  auto e = load(o);
  const auto exec = execution(o);
  auto result = convergence_sweep(e.spec(), e.require_lifting(), e.schedule, e.resolution,
                                  e.tolerance_scale, exec);
  const auto csv = sweep_csv(result);
  if (!e.out_dir.empty()) io::write_text_file(output_dir(e) / "sweep.csv", csv);
  std::cout << csv;
  report(result);
  std::fprintf(stderr, "%s\n", result.passed() ? "PASS" : "FAIL");
  return result.passed() ? 0 : kExitConvergenceFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toric patches, regular decompositions and degenerations"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", o.file, "Experiment or configuration JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--resolution,-m", o.resolution, "Samples per domain edge");
    sub->add_option("--schedule", o.schedule, "Comma-separated t values");
    sub->add_option("--out", o.out, "Output file (eval) or directory");
    sub->add_option("--tolerance-scale", o.tolerance_scale, "Multiplier on the threshold tau(m)");
    sub->add_option("--seed", o.seed, "Seed for a random integer lifting (decompose)");
    sub->add_flag("--serial", o.serial, "Use the serial reference kernels");
    sub->add_option("--threads", o.threads, "OpenMP thread count");
  };

  auto* decompose = app.add_subcommand("decompose", "Regular decomposition induced by a lifting");
  add_common(decompose);
  decompose->add_option("lifting", o.second, "Lifting JSON (overrides the file's lifting)");
  auto* check = app.add_subcommand("check-regular", "Certify a decomposition regular or irregular");
  add_common(check);
  check->add_option("decomposition", o.second, "Decomposition JSON (overrides the file's facets)");
  auto* eval = app.add_subcommand("eval", "Sample a patch and write OBJ");
  add_common(eval);
  eval->add_flag("--control-surface", o.control_surface, "Sample the control surface instead");
  auto* degenerate = app.add_subcommand("degenerate", "Write OBJ meshes of Y(t) and the sweep CSV");
  add_common(degenerate);
  auto* verify = app.add_subcommand("verify", "Check convergence to the regular control surface");
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*decompose) return cmd_decompose(o);
    if (*check) return cmd_check_regular(o);
    if (*eval) return cmd_eval(o);
    if (*degenerate) return cmd_degenerate(o);
    if (*verify) return cmd_verify(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
