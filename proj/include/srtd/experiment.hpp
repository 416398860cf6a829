#pragma once
// Experiment orchestration behind the command-line tool: load media, build
// masks, run completions (single or swept over one parameter), write the
// recovered media and tabular reports.

#include "srtd/evalkit.hpp"
#include "srtd/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace srtd {

enum class ReportFormat { csv, json };

enum class Axis { lambda, rank, sr };

struct ExperimentSpec {
  /// Images (P5/P6 files) or videos (a directory or a frame pattern with
  /// '*'/'?'), one completion per entry.
  std::vector<std::filesystem::path> inputs;
  /// Text mask graymap; when absent a random mask with `sr` is drawn.
  std::optional<std::filesystem::path> mask_file;
  double sr = 0.5;
  /// Seeds both the random mask and the solver's initial Y.
  std::uint64_t seed = 0;
  SolverConfig solver;
  std::filesystem::path out_dir = ".";
  ReportFormat report_format = ReportFormat::csv;
  PsnrMode psnr_mode = PsnrMode::standard;
  /// Maximum number of concurrent solves in a sweep.
  int jobs = 1;
};

struct ReportRow {
  std::string input;
  std::string mask; ///< "random:<sr>:<seed>" or the mask file name
  double sr = 0.0;  ///< observed fraction of the mask actually used
  double lambda = 0.0;
  std::size_t rank = 0;
  double psnr_standard = 0.0;
  double psnr_paper = 0.0;
  int outer_iters = 0;
  int inner_iters = 0;
  double wall_time_s = 0.0;
  std::uint64_t seed = 0;
};

/// Receives rows in input order as soon as they (and every earlier row) are
/// complete.
using RowSink = std::function<void(const ReportRow&)>;

/// True when `path` names a video source (directory or frame pattern).
bool is_video_source(const std::filesystem::path& path);

/// Image or video as a tensor, dispatching on is_video_source.
Tensor3 load_input(const std::filesystem::path& path);

/// Mask for data of `dims` as described by the spec.
ObservationMask build_mask(const ExperimentSpec& spec, const Dims& dims);

/// One completion per input with spec.solver. Recovered media go to
/// spec.out_dir as <stem>_recovered.{pgm,ppm} (images) or
/// <stem>_recovered/frame_NNNN.pgm (videos). Throws ParameterError on an
/// empty input list; errors from loading or solving propagate after the
/// rows completed so far have been passed to `sink`.
std::vector<ReportRow> run_complete(const ExperimentSpec& spec, const RowSink& sink = {});

/// One completion per (input, value). For the lambda and rank axes all values
/// share the input's mask; for the sr axis each value draws its own mask with
/// the same seed. Up to spec.jobs solves run concurrently; rows keep input
/// order. Media are named <stem>_<axis>_<value>. Throws ParameterError on an
/// empty value list.
std::vector<ReportRow> run_sweep(const ExperimentSpec& spec, Axis axis, const std::vector<double>& values,
                                 const RowSink& sink = {});

/// CSV with a "# srtd-report v1" first line and a fixed column header.
void write_csv(std::ostream& out, const std::vector<ReportRow>& rows);
/// {"format": "srtd-report", "version": 1, "rows": [...]}; infinite PSNR is
/// written as the string "inf".
void write_json(std::ostream& out, const std::vector<ReportRow>& rows);
void write_report(const std::filesystem::path& path, ReportFormat format, const std::vector<ReportRow>& rows);

/// Sweep settings carried by a config file.
struct SweepSettings {
  std::optional<Axis> axis;
  std::vector<double> values;
};

/// Applies a flat JSON config object onto `spec` (and `sweep`, when given).
/// Recognized keys mirror the command-line flags: input, mask_file, sr,
/// seed, lambda, rank, rho, mu_init, mu_max, eps, max_outer, max_inner,
/// stop_mode, psnr_mode, out, report_format, jobs, axis, values. Unknown keys
/// or ill-typed values throw ParameterError; unreadable files IoError;
/// malformed JSON FormatError.
void apply_config_file(const std::filesystem::path& path, ExperimentSpec& spec, SweepSettings* sweep = nullptr);

Axis parse_axis(const std::string& s);
StopMode parse_stop_mode(const std::string& s);
PsnrMode parse_psnr_mode(const std::string& s);
ReportFormat parse_report_format(const std::string& s);
std::string to_string(Axis axis);

} // namespace srtd
