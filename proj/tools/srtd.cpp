// srtd: tensor completion of images and videos from the command line.
//
//   srtd complete --input img.ppm --sr 0.5 --rank 10 --out results/
//   srtd sweep --input img.ppm --axis lambda --values 0,0.01,0.05 --rank 10
//   srtd psnr --input recovered.ppm --reference original.ppm
//
// Exit codes: 0 success, 2 bad arguments, 3 format or I/O error, 4 solver
// divergence.

#include "srtd/errors.hpp"
#include "srtd/experiment.hpp"
#include "srtd/pnm.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace srtd;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitFormat = 3;
constexpr int kExitDivergence = 4;

// Raw flag values; only flags given on the command line override the config
// file.
struct Flags {
  std::string config;
  std::vector<std::string> inputs;
  std::string mask_file;
  double sr = 0;
  std::uint64_t seed = 0;
  double lambda = 0;
  std::size_t rank = 0;
  double rho = 0, mu_init = 0, mu_max = 0, eps = 0;
  int max_outer = 0, max_inner = 0;
  std::string stop_mode, psnr_mode;
  std::string out;
  std::string report;
  int jobs = 1;
  std::string axis;
  std::vector<double> values;
  std::string reference;
};

void add_solver_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON config file; command-line flags take precedence")
      ->check(CLI::ExistingFile);
  cmd->add_option("--input", f.inputs, "image (P5/P6), video directory or frame pattern; repeatable");
  cmd->add_option("--mask-file", f.mask_file, "graymap mask: nonzero pixels are missing")->check(CLI::ExistingFile);
  cmd->add_option("--sr", f.sr, "sampling rate of the random mask (default 0.5)");
  cmd->add_option("--seed", f.seed, "seed for the random mask and solver initialization (default 0)");
  cmd->add_option("--lambda", f.lambda, "weight of the DCT-domain l1 term (default 0.05)");
  cmd->add_option("--rank", f.rank, "truncation rank r (required)");
  cmd->add_option("--rho", f.rho, "penalty growth factor (default 1.1)");
  cmd->add_option("--mu-init", f.mu_init, "initial penalty (default 1e-4)");
  cmd->add_option("--mu-max", f.mu_max, "penalty cap (default 1e10)");
  cmd->add_option("--eps", f.eps, "stop tolerance for both loops (default 1e-3)");
  cmd->add_option("--max-outer", f.max_outer, "outer iteration limit (default 50)");
  cmd->add_option("--max-inner", f.max_inner, "inner iteration limit (default 200)");
  cmd->add_option("--stop-mode", f.stop_mode, "relative (default) or absolute")
      ->check(CLI::IsMember({"relative", "absolute"}));
  cmd->add_option("--psnr-mode", f.psnr_mode, "PSNR shown on the console: standard (default) or paper")
      ->check(CLI::IsMember({"standard", "paper"}));
  cmd->add_option("--out", f.out, "directory for recovered media (default .)");
  cmd->add_option("--report", f.report, "report file; .json selects JSON, anything else CSV");
  cmd->add_option("--jobs", f.jobs, "concurrent solves in a sweep (default 1)")->check(CLI::PositiveNumber);
}

bool given(const CLI::App* cmd, const char* name) { return cmd->get_option(name)->count() > 0; }

ExperimentSpec build_spec(const CLI::App* cmd, const Flags& f, SweepSettings* sweep) {
  ExperimentSpec spec;
  if (!f.config.empty()) apply_config_file(f.config, spec, sweep);
  auto& cfg = spec.solver;
  if (given(cmd, "--input")) spec.inputs.assign(f.inputs.begin(), f.inputs.end());
  if (given(cmd, "--mask-file")) spec.mask_file = fs::path(f.mask_file);
  if (given(cmd, "--sr")) spec.sr = f.sr;
  if (given(cmd, "--seed")) spec.seed = f.seed;
  if (given(cmd, "--lambda")) cfg.lambda = f.lambda;
  if (given(cmd, "--rank")) cfg.rank = f.rank;
  if (given(cmd, "--rho")) cfg.rho = f.rho;
  if (given(cmd, "--mu-init")) cfg.mu_init = f.mu_init;
  if (given(cmd, "--mu-max")) cfg.mu_max = f.mu_max;
  if (given(cmd, "--eps")) cfg.eps_outer = cfg.eps_inner = f.eps;
  if (given(cmd, "--max-outer")) cfg.max_outer = f.max_outer;
  if (given(cmd, "--max-inner")) cfg.max_inner = f.max_inner;
  if (given(cmd, "--stop-mode")) cfg.stop_mode = parse_stop_mode(f.stop_mode);
  if (given(cmd, "--psnr-mode")) spec.psnr_mode = parse_psnr_mode(f.psnr_mode);
  if (given(cmd, "--out")) spec.out_dir = f.out;
  if (given(cmd, "--jobs")) spec.jobs = f.jobs;
  if (!f.report.empty())
    spec.report_format = fs::path(f.report).extension() == ".json" ? ReportFormat::json : ReportFormat::csv;

  if (spec.inputs.empty()) throw ParameterError("--input is required");
  if (cfg.rank == 0) throw ParameterError("--rank is required");
  if (spec.jobs < 1) throw ParameterError("--jobs must be at least 1");
  return spec;
}

std::string format_psnr(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// Echoes each row and keeps the report file current, so a failure later in a
// sweep leaves every finished row on disk.
class ReportSink {
public:
  ReportSink(const ExperimentSpec& spec, std::string path) : spec_(spec), path_(std::move(path)) {
    if (!path_.empty()) write_report(path_, spec_.report_format, rows_);
  }

  void operator()(const ReportRow& row) {
    rows_.push_back(row);
    const double shown = spec_.psnr_mode == PsnrMode::standard ? row.psnr_standard : row.psnr_paper;
    std::cout << row.input << "  lambda=" << row.lambda << "  r=" << row.rank << "  sr=" << row.sr
              << "  psnr=" << format_psnr(shown) << " dB  outer=" << row.outer_iters << "  inner=" << row.inner_iters
              << "  time=" << row.wall_time_s << "s\n";
    if (!path_.empty()) write_report(path_, spec_.report_format, rows_);
  }

private:
  const ExperimentSpec& spec_;
  std::string path_;
  std::vector<ReportRow> rows_;
};

int run_psnr(const std::string& input, const std::string& reference, const std::string& mask_file, double sr,
             bool sr_given, std::uint64_t seed, const std::string& mode) {
  const Tensor3 x = load_input(input);
  const Tensor3 ref = load_input(reference);
  if (x.dims() != ref.dims()) throw DimensionError("--input and --reference differ in size");
  ObservationMask omega(ref.dims(), false);
  if (!mask_file.empty()) {
    ExperimentSpec spec;
    spec.mask_file = fs::path(mask_file);
    omega = build_mask(spec, ref.dims());
  } else if (sr_given) {
    omega = random_mask(ref.dims(), sr, seed);
  }
  if (mode.empty() || mode == "standard") std::cout << "psnr_standard " << format_psnr(psnr(x, ref, omega, PsnrMode::standard)) << '\n';
  if (mode.empty() || mode == "paper") std::cout << "psnr_paper " << format_psnr(psnr(x, ref, omega, PsnrMode::paper)) << '\n';
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-rank plus DCT-sparse tensor completion for images and videos"};
  app.require_subcommand(1);

  Flags complete_flags;
  auto* complete = app.add_subcommand("complete", "recover one or more inputs from a mask");
  add_solver_flags(complete, complete_flags);

  Flags sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "recover over a list of lambda, rank or sr values");
  add_solver_flags(sweep, sweep_flags);
  sweep->add_option("--axis", sweep_flags.axis, "lambda, rank or sr")->check(CLI::IsMember({"lambda", "rank", "sr"}));
  sweep->add_option("--values", sweep_flags.values, "comma-separated values")->delimiter(',');

  std::string p_input, p_reference, p_mask, p_mode;
  double p_sr = 0;
  std::uint64_t p_seed = 0;
  auto* psnr_cmd = app.add_subcommand("psnr", "PSNR of a recovered file against a reference");
  psnr_cmd->add_option("--input", p_input, "recovered image or video")->required();
  psnr_cmd->add_option("--reference", p_reference, "original image or video")->required();
  psnr_cmd->add_option("--mask-file", p_mask, "mask defining the missing entries (paper mode)")
      ->check(CLI::ExistingFile);
  auto* p_sr_opt = psnr_cmd->add_option("--sr", p_sr, "rebuild the random mask with this rate (paper mode)");
  psnr_cmd->add_option("--seed", p_seed, "seed of the random mask");
  psnr_cmd->add_option("--psnr-mode", p_mode, "print only standard or paper")
      ->check(CLI::IsMember({"standard", "paper"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*psnr_cmd)
      return run_psnr(p_input, p_reference, p_mask, p_sr, p_sr_opt->count() > 0, p_seed, p_mode);

    const bool is_sweep = bool(*sweep);
    CLI::App* cmd = is_sweep ? sweep : complete;
    const Flags& flags = is_sweep ? sweep_flags : complete_flags;
    SweepSettings settings;
    const ExperimentSpec spec = build_spec(cmd, flags, is_sweep ? &settings : nullptr);
    ReportSink sink(spec, flags.report);
    const RowSink forward = [&sink](const ReportRow& row) { sink(row); };

    if (is_sweep) {
      if (given(cmd, "--axis")) settings.axis = parse_axis(flags.axis);
      if (given(cmd, "--values")) settings.values = flags.values;
      if (!settings.axis) throw ParameterError("--axis is required");
      run_sweep(spec, *settings.axis, settings.values, forward);
    } else {
      run_complete(spec, forward);
    }
    return kExitOk;
  } catch (const DivergenceError& e) {
    std::cerr << "srtd: solver diverged: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const FormatError& e) {
    std::cerr << "srtd: " << e.what() << '\n';
    return kExitFormat;
  } catch (const IoError& e) {
    std::cerr << "srtd: " << e.what() << '\n';
    return kExitFormat;
  } catch (const std::invalid_argument& e) {
    std::cerr << "srtd: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "srtd: internal error: " << e.what() << '\n';
    return 1;
  }
}
