// Batch front end: binarize single images, evaluate predictions against
// ground truth, benchmark method suites over DIBCO-style datasets, and
// sweep hybrid parameters.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "docbin/docbin.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadArgs = 1;
constexpr int kExitIo = 2;
constexpr int kExitProcessing = 3;
constexpr int kExitPartialFailure = 4;

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const docbin::IoError*>(&e)) return kExitIo;
  if (dynamic_cast<const docbin::DimensionMismatch*>(&e)) return kExitIo;
  if (dynamic_cast<const docbin::InvalidParams*>(&e)) return kExitBadArgs;
  return kExitProcessing;
}

docbin::RunConfig load_config_or_default(const std::string& path) {
  if (path.empty()) return docbin::RunConfig{};
  return docbin::load_config(path);
}

std::filesystem::path trace_path(const std::filesystem::path& out) {
  std::filesystem::path p = out;
  p.replace_extension(".trace.json");
  return p;
}

std::vector<docbin::Method> parse_methods(const std::string& spec) {
  std::vector<docbin::Method> methods;
  if (spec.empty() || spec == "all") return docbin::all_methods();
  std::string item;
  std::stringstream ss(spec);
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto m = docbin::method_from_name(item);
    if (!m) throw docbin::InvalidParams("unknown method '" + item + "'");
    methods.push_back(*m);
  }
  if (methods.empty()) throw docbin::InvalidParams("no methods requested");
  return methods;
}

int cmd_binarize(const std::string& input, const std::string& method_name, const std::string& out,
                 const std::string& config_path, bool trace) {
  const auto method = docbin::method_from_name(method_name);
  if (!method) {
    std::cerr << "error: unknown method '" << method_name
              << "' (expected otsu|tsmo|niblack|sauvola|nick|bernsen|hybrid)\n";
    return kExitBadArgs;
  }
  const docbin::RunConfig cfg = load_config_or_default(config_path);
  const docbin::GrayImage img = docbin::load_gray(input);
  const docbin::MethodRun run = docbin::run_method(img, *method, cfg);
  docbin::save_binary(run.image, out);
  if (trace) {
    nlohmann::json j = run.trace ? docbin::trace_to_json(*run.trace)
                                 : nlohmann::json{{"method", method_name}};
    j["method"] = method_name;
    j["input"] = input;
    std::ofstream f(trace_path(out));
    if (!f) throw docbin::IoError("cannot write trace: " + trace_path(out).string());
    f << j.dump(2) << "\n";
  }
  return kExitOk;
}

int cmd_evaluate(const std::string& pred_path, const std::string& gt_path, const std::string& format,
                 const std::string& label) {
  const docbin::BinaryImage pred = docbin::load_binary(pred_path);
  const docbin::BinaryImage gt = docbin::load_binary(gt_path);
  const docbin::PairEval e = docbin::evaluate_pair(pred, gt, docbin::MetricToggles{});
  const std::string image = std::filesystem::path(pred_path).filename().string();
  if (format == "json") {
    nlohmann::json j{{"image", image},
                     {"method", label},
                     {"fm", docbin::detail::metric_json(e.fm)},
                     {"fmp", docbin::detail::metric_json(e.pfm)},
                     {"drd", docbin::detail::metric_json(e.drd_value)},
                     {"psnr", docbin::detail::metric_json(e.psnr_value)}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "image,method,fm,fmp,drd,psnr\n";
    std::cout << image << "," << label << "," << docbin::detail::format_metric(e.fm) << ","
              << docbin::detail::format_metric(e.pfm) << ","
              << docbin::detail::format_metric(e.drd_value) << ","
              << docbin::detail::format_metric(e.psnr_value) << "\n";
  }
  return kExitOk;
}

int cmd_bench(const std::string& dir, const std::string& gt_suffix, const std::string& methods_spec,
              const std::string& config_path, const std::string& report_path) {
  const std::vector<docbin::Method> methods = parse_methods(methods_spec);
  const docbin::RunConfig cfg = load_config_or_default(config_path);
  const docbin::DatasetManifest manifest = docbin::discover_dataset(dir, gt_suffix);
  if (manifest.pairs.empty()) {
    std::cerr << "error: no (image, ground-truth) pairs found in " << dir << "\n";
    return kExitIo;
  }
  const docbin::BenchReport report = docbin::bench(manifest, methods, cfg, &std::cerr);

  if (report_path.empty()) {
    docbin::write_report_csv(report, std::cout);
  } else if (docbin::detail::lower_ext(report_path) == ".json") {
    std::ofstream f(report_path);
    if (!f) throw docbin::IoError("cannot write report: " + report_path);
    f << docbin::to_json(report).dump(2) << "\n";
  } else {
    std::ofstream f(report_path);
    if (!f) throw docbin::IoError("cannot write report: " + report_path);
    docbin::write_report_csv(report, f);
  }
  return report.failures.empty() ? kExitOk : kExitPartialFailure;
}

int cmd_sweep(const std::string& dir, const std::string& gt_suffix, const std::string& param,
              const std::vector<double>& values, const std::string& method,
              const std::string& config_path, const std::string& report_path) {
  if (method != "hybrid") {
    std::cerr << "error: sweep supports only the hybrid method\n";
    return kExitBadArgs;
  }
  const docbin::DatasetManifest manifest = docbin::discover_dataset(dir, gt_suffix);
  if (manifest.pairs.empty()) {
    std::cerr << "error: no (image, ground-truth) pairs found in " << dir << "\n";
    return kExitIo;
  }

  nlohmann::json base = nlohmann::json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw docbin::FileNotFound("config file not found: " + config_path);
    try {
      in >> base;
    } catch (const nlohmann::json::exception& e) {
      throw docbin::InvalidParams(std::string("config: parse error: ") + e.what());
    }
  }
  const std::vector<docbin::SweepRow> rows = docbin::sweep(manifest, param, values, base, &std::cerr);

  if (report_path.empty()) {
    docbin::write_sweep_csv(param, rows, std::cout);
  } else if (docbin::detail::lower_ext(report_path) == ".json") {
    nlohmann::json j = nlohmann::json::array();
    for (const docbin::SweepRow& r : rows)
      j.push_back({{"param", param}, {"value", r.value}, {"fm", r.fm}, {"seconds", r.seconds}});
    std::ofstream f(report_path);
    if (!f) throw docbin::IoError("cannot write report: " + report_path);
    f << j.dump(2) << "\n";
  } else {
    std::ofstream f(report_path);
    if (!f) throw docbin::IoError("cannot write report: " + report_path);
    docbin::write_sweep_csv(param, rows, f);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"docbin: document image binarization toolkit"};
  app.require_subcommand(1);

  // binarize
  std::string in_path, method = "hybrid", out_path, config_path;
  bool trace = false;
  CLI::App* binz = app.add_subcommand("binarize", "Binarize one image");
  binz->add_option("input", in_path, "Input image (PNG or PGM)")->required();
  binz->add_option("--method", method, "otsu|tsmo|niblack|sauvola|nick|bernsen|hybrid");
  binz->add_option("--out", out_path, "Output image path")->required();
  binz->add_option("--config", config_path, "JSON run configuration");
  binz->add_flag("--trace", trace, "Write <out>.trace.json with pipeline details");

  // evaluate
  std::string pred_path, gt_path, format = "csv", label = "-";
  CLI::App* eval = app.add_subcommand("evaluate", "Score a prediction against ground truth");
  eval->add_option("pred", pred_path, "Predicted bilevel image")->required();
  eval->add_option("gt", gt_path, "Ground-truth bilevel image")->required();
  eval->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  eval->add_option("--label", label, "Method label for the report row");

  // bench
  std::string bench_dir, gt_suffix = "_GT", methods_spec = "all", bench_config, bench_report;
  CLI::App* bench = app.add_subcommand("bench", "Benchmark methods over a dataset directory");
  bench->add_option("dataset", bench_dir, "Directory with images and *_GT ground truths")->required();
  bench->add_option("--gt-suffix", gt_suffix, "Ground-truth filename suffix (default _GT)");
  bench->add_option("--methods", methods_spec, "Comma list or 'all'");
  bench->add_option("--config", bench_config, "JSON run configuration");
  bench->add_option("--report", bench_report, "Report path (.csv or .json); stdout if omitted");

  // sweep
  std::string sweep_dir, sweep_param, sweep_method = "hybrid", sweep_config, sweep_report;
  std::string sweep_suffix = "_GT";
  std::vector<double> sweep_values;
  CLI::App* sweep = app.add_subcommand("sweep", "Benchmark the hybrid method over parameter values");
  sweep->add_option("dataset", sweep_dir, "Dataset directory")->required();
  sweep->add_option("--param", sweep_param, "Config key, dotted (e.g. hybrid.k_smear)")->required();
  sweep->add_option("--values", sweep_values, "Values to sweep")->required()->delimiter(',');
  sweep->add_option("--method", sweep_method, "Only 'hybrid' is supported");
  sweep->add_option("--gt-suffix", sweep_suffix, "Ground-truth filename suffix");
  sweep->add_option("--config", sweep_config, "Base JSON run configuration");
  sweep->add_option("--report", sweep_report, "Report path (.csv or .json); stdout if omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadArgs;
  }

  try {
    if (binz->parsed()) return cmd_binarize(in_path, method, out_path, config_path, trace);
    if (eval->parsed()) return cmd_evaluate(pred_path, gt_path, format, label);
    if (bench->parsed()) return cmd_bench(bench_dir, gt_suffix, methods_spec, bench_config, bench_report);
    if (sweep->parsed())
      return cmd_sweep(sweep_dir, sweep_suffix, sweep_param, sweep_values, sweep_method, sweep_config,
                       sweep_report);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kExitBadArgs;
}
