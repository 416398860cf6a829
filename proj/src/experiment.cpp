#include "srtd/experiment.hpp"

#include "srtd/errors.hpp"
#include "srtd/pnm.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <ostream>
#include <stdexcept>

namespace srtd {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Shortest representation that round-trips, so reports are byte-stable.
std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

std::string input_stem(const fs::path& input) {
  if (is_video_source(input)) {
    fs::path p = input;
    if (!fs::is_directory(p)) p = p.parent_path();
    if (p.filename().empty()) p = p.parent_path();
    const std::string name = p.filename().string();
    return name.empty() || name == "." ? "video" : name;
  }
  return input.stem().string();
}

std::string mask_label(const ExperimentSpec& spec) {
  if (spec.mask_file) return spec.mask_file->filename().string();
  return "random:" + format_number(spec.sr) + ":" + std::to_string(spec.seed);
}

void save_recovered(const Tensor3& x, const fs::path& input, const fs::path& out_dir, const std::string& tag) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  const std::string base = input_stem(input) + "_" + tag;
  if (is_video_source(input)) {
    save_video(x, out_dir / base, "frame");
  } else {
    save_image(x, out_dir / (base + (x.n3() == 1 ? ".pgm" : ".ppm")));
  }
}

struct Job {
  fs::path input;
  const Tensor3* data = nullptr;
  const ObservationMask* mask = nullptr;
  std::string mask_label;
  SolverConfig cfg;
  std::string tag;
};

ReportRow run_job(const Job& job, const ExperimentSpec& spec) {
  const Tensor3& m = *job.data;
  const SolveReport rep = srtd_complete(apply_mask(m, *job.mask), *job.mask, job.cfg);

  // The Ω-constraint must hold before quantization.
  const auto flags = job.mask->flags();
  const auto x = rep.recovered.data();
  const auto ref = m.data();
  for (std::size_t i = 0; i < flags.size(); ++i)
    if (flags[i] && x[i] != ref[i]) throw std::logic_error("recovered tensor violates the observed entries");

  save_recovered(rep.recovered, job.input, spec.out_dir, job.tag);

  ReportRow row;
  row.input = job.input.string();
  row.mask = job.mask_label;
  row.sr = job.mask->sampling_rate();
  row.lambda = job.cfg.lambda;
  row.rank = job.cfg.rank;
  row.psnr_standard = psnr(rep.recovered, m, *job.mask, PsnrMode::standard);
  row.psnr_paper = psnr(rep.recovered, m, *job.mask, PsnrMode::paper);
  row.outer_iters = rep.outer_iters;
  row.inner_iters = rep.inner_iters_total;
  row.wall_time_s = rep.wall_time.count();
  row.seed = job.cfg.seed;
  return row;
}

// Runs the jobs at most `jobs` at a time. Rows reach the sink in job order;
// the first failure (in job order) is rethrown after the rows before it.
std::vector<ReportRow> run_jobs(const std::vector<Job>& list, const ExperimentSpec& spec, const RowSink& sink) {
  std::vector<ReportRow> rows;
  const std::size_t width = std::size_t(std::max(1, spec.jobs));
  for (std::size_t start = 0; start < list.size(); start += width) {
    const std::size_t end = std::min(list.size(), start + width);
    std::vector<std::future<ReportRow>> pending;
    for (std::size_t i = start; i < end; ++i) {
      const auto policy = width == 1 ? std::launch::deferred : std::launch::async;
      pending.push_back(std::async(policy, run_job, std::cref(list[i]), std::cref(spec)));
    }
    for (auto& f : pending) {
      rows.push_back(f.get());
      if (sink) sink(rows.back());
    }
  }
  return rows;
}

struct LoadedInput {
  fs::path path;
  Tensor3 data;
};

std::vector<LoadedInput> load_inputs(const ExperimentSpec& spec) {
  if (spec.inputs.empty()) throw ParameterError("no input given");
  std::vector<LoadedInput> loaded;
  for (const auto& p : spec.inputs) loaded.push_back({p, load_input(p)});
  return loaded;
}

} // namespace

bool is_video_source(const fs::path& path) {
  if (fs::is_directory(path)) return true;
  return path.filename().string().find_first_of("*?[") != std::string::npos;
}

Tensor3 load_input(const fs::path& path) {
  if (is_video_source(path)) return load_video(path);
  return load_image(path);
}

ObservationMask build_mask(const ExperimentSpec& spec, const Dims& dims) {
  if (spec.mask_file) {
    ObservationMask mask = mask_from_image(*spec.mask_file, dims.n3);
    if (mask.dims() != dims)
      throw DimensionError("mask " + spec.mask_file->string() + " is " + std::to_string(mask.dims().n2) + "x" +
                           std::to_string(mask.dims().n1) + ", input is " + std::to_string(dims.n2) + "x" +
                           std::to_string(dims.n1));
    return mask;
  }
  return random_mask(dims, spec.sr, spec.seed);
}

std::vector<ReportRow> run_complete(const ExperimentSpec& spec, const RowSink& sink) {
  const auto inputs = load_inputs(spec);
  std::vector<ObservationMask> masks;
  for (const auto& in : inputs) masks.push_back(build_mask(spec, in.data.dims()));

  std::vector<Job> jobs;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    Job job{inputs[i].path, &inputs[i].data, &masks[i], mask_label(spec), spec.solver, "recovered"};
    job.cfg.seed = spec.seed;
    jobs.push_back(std::move(job));
  }
  return run_jobs(jobs, spec, sink);
}

std::vector<ReportRow> run_sweep(const ExperimentSpec& spec, Axis axis, const std::vector<double>& values,
                                 const RowSink& sink) {
  if (values.empty()) throw ParameterError("sweep: no values given");
  for (double v : values) {
    if (!std::isfinite(v)) throw ParameterError("sweep: non-finite value");
    if (axis == Axis::rank && (v < 1 || v != std::floor(v)))
      throw ParameterError("sweep: rank values must be positive integers, got " + format_number(v));
  }
  if (axis == Axis::sr && spec.mask_file) throw ParameterError("sweep: the sr axis needs random masks, not a mask file");

  const auto inputs = load_inputs(spec);
  // Masks are owned here and referenced by the jobs; for the lambda and rank
  // axes one mask per input is shared by all values.
  std::vector<ObservationMask> masks;
  std::vector<std::string> labels;
  masks.reserve(inputs.size() * values.size());
  for (const auto& in : inputs) {
    if (axis == Axis::sr) {
      for (double v : values) {
        ExperimentSpec s = spec;
        s.sr = v;
        masks.push_back(build_mask(s, in.data.dims()));
        labels.push_back(mask_label(s));
      }
    } else {
      masks.push_back(build_mask(spec, in.data.dims()));
      labels.push_back(mask_label(spec));
    }
  }

  std::vector<Job> jobs;
  for (std::size_t i = 0; i < inputs.size(); ++i)
    for (std::size_t j = 0; j < values.size(); ++j) {
      const std::size_t mi = axis == Axis::sr ? i * values.size() + j : i;
      Job job{inputs[i].path, &inputs[i].data, &masks[mi], labels[mi], spec.solver,
              to_string(axis) + "_" + format_number(values[j])};
      job.cfg.seed = spec.seed;
      if (axis == Axis::lambda) job.cfg.lambda = values[j];
      if (axis == Axis::rank) job.cfg.rank = std::size_t(values[j]);
      jobs.push_back(std::move(job));
    }
  return run_jobs(jobs, spec, sink);
}

void write_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << "# srtd-report v1\n";
  out << "input,mask,sr,lambda,rank,psnr_standard,psnr_paper,outer_iters,inner_iters,wall_time_s,seed\n";
  for (const auto& r : rows) {
    out << csv_field(r.input) << ',' << csv_field(r.mask) << ',' << format_number(r.sr) << ','
        << format_number(r.lambda) << ',' << r.rank << ',' << format_number(r.psnr_standard) << ','
        << format_number(r.psnr_paper) << ',' << r.outer_iters << ',' << r.inner_iters << ','
        << format_number(r.wall_time_s) << ',' << r.seed << '\n';
  }
}

void write_json(std::ostream& out, const std::vector<ReportRow>& rows) {
  json list = json::array();
  for (const auto& r : rows) {
    list.push_back({{"input", r.input},
                    {"mask", r.mask},
                    {"sr", r.sr},
                    {"lambda", r.lambda},
                    {"rank", r.rank},
                    {"psnr_standard", json_number(r.psnr_standard)},
                    {"psnr_paper", json_number(r.psnr_paper)},
                    {"outer_iters", r.outer_iters},
                    {"inner_iters", r.inner_iters},
                    {"wall_time_s", r.wall_time_s},
                    {"seed", r.seed}});
  }
  const json doc = {{"format", "srtd-report"}, {"version", 1}, {"rows", std::move(list)}};
  out << doc.dump(2) << '\n';
}

void write_report(const fs::path& path, ReportFormat format, const std::vector<ReportRow>& rows) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write report " + path.string());
  if (format == ReportFormat::csv)
    write_csv(out, rows);
  else
    write_json(out, rows);
  if (!out) throw IoError("error writing report " + path.string());
}

Axis parse_axis(const std::string& s) {
  if (s == "lambda") return Axis::lambda;
  if (s == "rank") return Axis::rank;
  if (s == "sr") return Axis::sr;
  throw ParameterError("unknown sweep axis '" + s + "' (expected lambda, rank or sr)");
}

StopMode parse_stop_mode(const std::string& s) {
  if (s == "relative") return StopMode::relative;
  if (s == "absolute") return StopMode::absolute;
  throw ParameterError("unknown stop mode '" + s + "' (expected relative or absolute)");
}

PsnrMode parse_psnr_mode(const std::string& s) {
  if (s == "standard") return PsnrMode::standard;
  if (s == "paper") return PsnrMode::paper;
  throw ParameterError("unknown PSNR mode '" + s + "' (expected standard or paper)");
}

ReportFormat parse_report_format(const std::string& s) {
  if (s == "csv") return ReportFormat::csv;
  if (s == "json") return ReportFormat::json;
  throw ParameterError("unknown report format '" + s + "' (expected csv or json)");
}

std::string to_string(Axis axis) {
  switch (axis) {
  case Axis::lambda: return "lambda";
  case Axis::rank: return "rank";
  case Axis::sr: return "sr";
  }
  return "?";
}

void apply_config_file(const fs::path& path, ExperimentSpec& spec, SweepSettings* sweep) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("config " + path.string() + ": " + e.what(), e.byte);
  }
  if (!doc.is_object()) throw FormatError("config " + path.string() + " must be a JSON object", 0);

  auto& cfg = spec.solver;
  try {
    for (const auto& [key, v] : doc.items()) {
      if (key == "input") {
        spec.inputs.clear();
        if (v.is_array())
          for (const auto& p : v) spec.inputs.emplace_back(p.get<std::string>());
        else
          spec.inputs.emplace_back(v.get<std::string>());
      } else if (key == "mask_file") {
        spec.mask_file = fs::path(v.get<std::string>());
      } else if (key == "sr") {
        spec.sr = v.get<double>();
      } else if (key == "seed") {
        spec.seed = v.get<std::uint64_t>();
      } else if (key == "lambda") {
        cfg.lambda = v.get<double>();
      } else if (key == "rank") {
        cfg.rank = v.get<std::size_t>();
      } else if (key == "rho") {
        cfg.rho = v.get<double>();
      } else if (key == "mu_init") {
        cfg.mu_init = v.get<double>();
      } else if (key == "mu_max") {
        cfg.mu_max = v.get<double>();
      } else if (key == "eps") {
        cfg.eps_outer = cfg.eps_inner = v.get<double>();
      } else if (key == "max_outer") {
        cfg.max_outer = v.get<int>();
      } else if (key == "max_inner") {
        cfg.max_inner = v.get<int>();
      } else if (key == "stop_mode") {
        cfg.stop_mode = parse_stop_mode(v.get<std::string>());
      } else if (key == "psnr_mode") {
        spec.psnr_mode = parse_psnr_mode(v.get<std::string>());
      } else if (key == "out") {
        spec.out_dir = v.get<std::string>();
      } else if (key == "report_format") {
        spec.report_format = parse_report_format(v.get<std::string>());
      } else if (key == "jobs") {
        spec.jobs = v.get<int>();
      } else if (key == "axis" && sweep) {
        sweep->axis = parse_axis(v.get<std::string>());
      } else if (key == "values" && sweep) {
        sweep->values = v.get<std::vector<double>>();
      } else {
        throw ParameterError("config " + path.string() + ": unknown key '" + key + "'");
      }
    }
  } catch (const json::type_error& e) {
    throw ParameterError("config " + path.string() + ": " + e.what());
  }
}

} // namespace srtd
