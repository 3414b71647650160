#ifndef DOCBIN_PIPELINE_HPP
#define DOCBIN_PIPELINE_HPP

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "docbin/config.hpp"
#include "docbin/dataset.hpp"
#include "docbin/io.hpp"
#include "docbin/metrics.hpp"
#include "docbin/postprocess.hpp"

namespace docbin {

enum class Method { otsu, tsmo, niblack, sauvola, nick, bernsen, hybrid };

inline const std::vector<Method>& all_methods() {
  static const std::vector<Method> m = {Method::otsu, Method::tsmo,    Method::niblack, Method::sauvola,
                                        Method::nick, Method::bernsen, Method::hybrid};
  return m;
}

inline std::string method_name(Method m) {
  switch (m) {
    case Method::otsu: return "otsu";
    case Method::tsmo: return "tsmo";
    case Method::niblack: return "niblack";
    case Method::sauvola: return "sauvola";
    case Method::nick: return "nick";
    case Method::bernsen: return "bernsen";
    case Method::hybrid: return "hybrid";
  }
  return "?";
}

inline std::optional<Method> method_from_name(const std::string& name) {
  for (Method m : all_methods())
    if (method_name(m) == name) return m;
  return std::nullopt;
}

struct MethodRun {
  BinaryImage image;
  std::optional<PipelineTrace> trace;  // hybrid only
};

// Runs one binarization method under the given configuration. The hybrid
// method is the full pipeline (enhancement gate, category thresholding,
// smear second pass, then post-processing); the others are raw baselines.
inline MethodRun run_method(const GrayImage& img, Method method, const RunConfig& cfg) {
  switch (method) {
    case Method::otsu:
      return {apply_threshold(img, otsu(histogram(img)).threshold), std::nullopt};
    case Method::tsmo: {
      const Histogram h = histogram(img);
      try {
        return {apply_threshold(img, tsmo(h, cfg.hybrid.tsmo_groups).t_o2), std::nullopt};
      } catch (const DegenerateHistogram&) {
        return {apply_threshold(img, otsu(h).threshold), std::nullopt};
      }
    }
    case Method::niblack:
      return {niblack(img, cfg.niblack, cfg.local_exec), std::nullopt};
    case Method::sauvola:
      return {sauvola(img, cfg.sauvola, cfg.local_exec), std::nullopt};
    case Method::nick:
      return {nick(img, cfg.nick, cfg.local_exec), std::nullopt};
    case Method::bernsen:
      return {bernsen(img, cfg.bernsen, cfg.local_exec), std::nullopt};
    case Method::hybrid: {
      auto [bin, trace] = hybrid_binarize(img, cfg.hybrid, cfg.local_exec);
      return {postprocess(bin, cfg.post), trace};
    }
  }
  throw InvalidParams("run_method: unknown method");
}

inline nlohmann::json trace_to_json(const PipelineTrace& t) {
  return nlohmann::json{{"input_contrast", t.input_contrast},
                        {"enhanced", t.enhanced},
                        {"working_contrast", t.working_contrast},
                        {"category", std::string(category_name(t.category))},
                        {"degenerate", t.degenerate},
                        {"otsu_threshold", t.otsu_threshold},
                        {"tsmo_low", t.tsmo_low},
                        {"tsmo_high", t.tsmo_high},
                        {"threshold", t.threshold},
                        {"suspicious_tiles", t.suspicious_tiles},
                        {"total_tiles", t.total_tiles}};
}

// Worker cap for batch runs: BINARIZE_THREADS, 0 or unset meaning auto.
inline int worker_count() {
  const char* env = std::getenv("BINARIZE_THREADS");
  long v = env ? std::strtol(env, nullptr, 10) : 0;
  if (v <= 0) v = static_cast<long>(std::thread::hardware_concurrency());
  if (v < 1) v = 1;
  return static_cast<int>(v);
}

namespace detail {

template <typename Fn>
inline void parallel_for(size_t n, Fn&& fn) {
  const int workers = std::min<size_t>(worker_count(), n);
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

struct PairEval {
  double fm = std::numeric_limits<double>::quiet_NaN();
  double pfm = std::numeric_limits<double>::quiet_NaN();
  double drd_value = std::numeric_limits<double>::quiet_NaN();
  double psnr_value = std::numeric_limits<double>::quiet_NaN();
};

inline PairEval evaluate_pair(const BinaryImage& pred, const BinaryImage& gt, const MetricToggles& t) {
  PairEval e;
  if (t.fm) e.fm = f_measure(confusion(pred, gt));
  if (t.pfm) e.pfm = pseudo_f_measure(pred, gt);
  if (t.drd) e.drd_value = drd(pred, gt);
  if (t.psnr) e.psnr_value = psnr(pred, gt);
  return e;
}

struct ImageEval {
  std::string image;
  PairEval eval;
  double seconds = 0;
};

struct MethodReport {
  std::string method;
  double fm = 0;
  double pfm = 0;
  double drd_value = 0;
  double psnr_value = 0;
  double seconds = 0;           // summed binarization wall time over the dataset
  double seconds_per_image = 0;
  int rank = 0;
  int score = 0;
  std::vector<ImageEval> images;
};

struct BenchReport {
  std::string dataset;
  std::vector<MethodReport> methods;      // sorted ascending by score
  std::vector<std::string> failures;      // "image: reason"
  int image_count = 0;
};

// Runs every method over every dataset pair and aggregates per-method
// means plus rank-sum scores. Images are processed concurrently; failures
// are logged and excluded. Timing covers binarization only, not file I/O
// or metric evaluation.
inline BenchReport bench(const DatasetManifest& manifest, const std::vector<Method>& methods,
                         const RunConfig& cfg, std::ostream* log = nullptr) {
  if (manifest.pairs.empty()) throw InvalidParams("bench: dataset has no (image, ground-truth) pairs");
  if (methods.empty()) throw InvalidParams("bench: no methods requested");

  BenchReport report;
  report.dataset = manifest.name;

  // Load all pairs once, shared by every method.
  struct Loaded {
    std::string name;
    GrayImage gray;
    BinaryImage gt;
    bool ok = false;
  };
  std::vector<Loaded> inputs(manifest.pairs.size());
  detail::parallel_for(manifest.pairs.size(), [&](size_t i) {
    const DatasetPair& pair = manifest.pairs[i];
    inputs[i].name = pair.image.filename().string();
    try {
      inputs[i].gray = load_gray(pair.image);
      inputs[i].gt = load_binary(pair.gt);
      if (inputs[i].gt.width() != inputs[i].gray.width() ||
          inputs[i].gt.height() != inputs[i].gray.height())
        throw DimensionMismatch("ground truth dimensions differ from image");
      inputs[i].ok = true;
    } catch (const std::exception& e) {
      inputs[i].ok = false;
      inputs[i].name += std::string(": ") + e.what();
    }
  });
  for (const Loaded& in : inputs) {
    if (!in.ok) report.failures.push_back(in.name);
  }
  report.image_count = static_cast<int>(manifest.pairs.size());

  for (Method method : methods) {
    MethodReport row;
    row.method = method_name(method);
    row.images.assign(inputs.size(), {});
    std::vector<std::string> method_failures(inputs.size());
    detail::parallel_for(inputs.size(), [&](size_t i) {
      if (!inputs[i].ok) return;
      ImageEval& ie = row.images[i];
      ie.image = inputs[i].name;
      try {
        const auto t0 = std::chrono::steady_clock::now();
        MethodRun run = run_method(inputs[i].gray, method, cfg);
        const auto t1 = std::chrono::steady_clock::now();
        ie.seconds = std::chrono::duration<double>(t1 - t0).count();
        ie.eval = evaluate_pair(run.image, inputs[i].gt, cfg.metrics);
      } catch (const std::exception& e) {
        method_failures[i] = inputs[i].name + " [" + row.method + "]: " + e.what();
      }
    });

    int n = 0;
    for (size_t i = 0; i < inputs.size(); ++i) {
      if (!inputs[i].ok) continue;
      if (!method_failures[i].empty()) {
        report.failures.push_back(method_failures[i]);
        row.images[i].image.clear();
        continue;
      }
      const ImageEval& ie = row.images[i];
      row.fm += cfg.metrics.fm ? ie.eval.fm : 0;
      row.pfm += cfg.metrics.pfm ? ie.eval.pfm : 0;
      row.drd_value += cfg.metrics.drd ? ie.eval.drd_value : 0;
      row.psnr_value += cfg.metrics.psnr ? ie.eval.psnr_value : 0;
      row.seconds += ie.seconds;
      ++n;
    }
    if (n > 0) {
      row.fm /= n;
      row.pfm /= n;
      row.drd_value /= n;
      row.psnr_value /= n;
      row.seconds_per_image = row.seconds / n;
    }
    if (!cfg.metrics.fm) row.fm = std::numeric_limits<double>::quiet_NaN();
    if (!cfg.metrics.pfm) row.pfm = std::numeric_limits<double>::quiet_NaN();
    if (!cfg.metrics.drd) row.drd_value = std::numeric_limits<double>::quiet_NaN();
    if (!cfg.metrics.psnr) row.psnr_value = std::numeric_limits<double>::quiet_NaN();
    // Drop slots for failed or skipped images.
    std::erase_if(row.images, [](const ImageEval& ie) { return ie.image.empty(); });
    report.methods.push_back(std::move(row));
  }

  // Rank-sum scores across the enabled criteria.
  if (report.methods.size() >= 2) {
    std::vector<std::string> names;
    std::vector<std::vector<double>> values;
    std::vector<bool> higher;
    if (cfg.metrics.fm) higher.push_back(true);
    if (cfg.metrics.pfm) higher.push_back(true);
    if (cfg.metrics.drd) higher.push_back(false);
    if (cfg.metrics.psnr) higher.push_back(true);
    if (!higher.empty()) {
      for (const MethodReport& r : report.methods) {
        names.push_back(r.method);
        std::vector<double> row;
        if (cfg.metrics.fm) row.push_back(r.fm);
        if (cfg.metrics.pfm) row.push_back(r.pfm);
        if (cfg.metrics.drd) row.push_back(r.drd_value);
        if (cfg.metrics.psnr) row.push_back(r.psnr_value);
        values.push_back(std::move(row));
      }
      const std::vector<MethodRanking> ranked = rank_scores(names, values, higher);
      std::vector<MethodReport> ordered;
      std::vector<bool> consumed(report.methods.size(), false);
      for (const MethodRanking& mr : ranked) {
        for (size_t i = 0; i < report.methods.size(); ++i) {
          if (consumed[i] || report.methods[i].method != mr.method) continue;
          consumed[i] = true;
          report.methods[i].score = mr.score;
          ordered.push_back(std::move(report.methods[i]));
          break;
        }
      }
      // Competition ranks over the sorted scores (ties share the min rank).
      for (size_t i = 0; i < ordered.size(); ++i) {
        if (i > 0 && ordered[i].score == ordered[i - 1].score)
          ordered[i].rank = ordered[i - 1].rank;
        else
          ordered[i].rank = static_cast<int>(i) + 1;
      }
      report.methods = std::move(ordered);
    }
  } else if (report.methods.size() == 1) {
    report.methods[0].rank = 1;
  }

  if (log) {
    for (const std::string& f : report.failures) (*log) << "bench: failed: " << f << "\n";
  }
  return report;
}

namespace detail {

inline std::string format_metric(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

inline nlohmann::json metric_json(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace detail

// CSV report, one row per method: rank,score,method,fm,fmp,drd,psnr,seconds
inline void write_report_csv(const BenchReport& report, std::ostream& out) {
  out << "rank,score,method,fm,fmp,drd,psnr,seconds\n";
  for (const MethodReport& r : report.methods) {
    char sec[64];
    std::snprintf(sec, sizeof(sec), "%.3f", r.seconds);
    out << r.rank << "," << r.score << "," << r.method << "," << detail::format_metric(r.fm) << ","
        << detail::format_metric(r.pfm) << "," << detail::format_metric(r.drd_value) << ","
        << detail::format_metric(r.psnr_value) << "," << sec << "\n";
  }
}

inline nlohmann::json to_json(const BenchReport& report) {
  nlohmann::json methods = nlohmann::json::array();
  for (const MethodReport& r : report.methods) {
    nlohmann::json images = nlohmann::json::array();
    for (const ImageEval& ie : r.images) {
      images.push_back({{"image", ie.image},
                        {"fm", detail::metric_json(ie.eval.fm)},
                        {"fmp", detail::metric_json(ie.eval.pfm)},
                        {"drd", detail::metric_json(ie.eval.drd_value)},
                        {"psnr", detail::metric_json(ie.eval.psnr_value)},
                        {"seconds", ie.seconds}});
    }
    methods.push_back({{"rank", r.rank},
                       {"score", r.score},
                       {"method", r.method},
                       {"fm", detail::metric_json(r.fm)},
                       {"fmp", detail::metric_json(r.pfm)},
                       {"drd", detail::metric_json(r.drd_value)},
                       {"psnr", detail::metric_json(r.psnr_value)},
                       {"seconds", r.seconds},
                       {"seconds_per_image", r.seconds_per_image},
                       {"images", images}});
  }
  return nlohmann::json{{"dataset", report.dataset},
                        {"image_count", report.image_count},
                        {"methods", methods},
                        {"failures", report.failures}};
}

struct SweepRow {
  double value = 0;
  double fm = 0;
  double seconds = 0;
};

// Resolves a dotted config path ("hybrid.k_smear") against the JSON layout.
inline nlohmann::json::json_pointer config_pointer(const std::string& param) {
  std::string p = "/";
  for (char c : param) p += c == '.' ? '/' : c;
  return nlohmann::json::json_pointer(p);
}

// One bench run of the hybrid method per parameter value.
inline std::vector<SweepRow> sweep(const DatasetManifest& manifest, const std::string& param,
                                   const std::vector<double>& values, const nlohmann::json& base_config,
                                   std::ostream* log = nullptr) {
  if (values.empty()) throw InvalidParams("sweep: no values given");
  nlohmann::json base = to_json(parse_config(base_config));  // normalized full document
  const nlohmann::json::json_pointer ptr = config_pointer(param);
  if (!base.contains(ptr)) throw InvalidParams("sweep: unknown config parameter '" + param + "'");
  const bool integral_param = base.at(ptr).is_number_integer();

  std::vector<SweepRow> rows;
  for (double v : values) {
    nlohmann::json doc = base;
    if (integral_param)
      doc[ptr] = static_cast<int64_t>(std::llround(v));
    else
      doc[ptr] = v;
    const RunConfig cfg = parse_config(doc);
    const BenchReport report = bench(manifest, {Method::hybrid}, cfg, log);
    SweepRow row;
    row.value = v;
    row.fm = report.methods.empty() ? 0 : report.methods[0].fm;
    row.seconds = report.methods.empty() ? 0 : report.methods[0].seconds;
    rows.push_back(row);
  }
  return rows;
}

inline void write_sweep_csv(const std::string& param, const std::vector<SweepRow>& rows,
                            std::ostream& out) {
  out << "param,value,fm,seconds\n";
  for (const SweepRow& r : rows) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s,%g,%.4f,%.3f", param.c_str(), r.value, r.fm, r.seconds);
    out << buf << "\n";
  }
}

}  // namespace docbin

#endif  // DOCBIN_PIPELINE_HPP
