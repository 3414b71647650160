#ifndef DOCBIN_CONFIG_HPP
#define DOCBIN_CONFIG_HPP

#include <fstream>
#include <string>

#include "docbin/hybrid.hpp"
#include "docbin/postprocess.hpp"
#include "json.hpp"

namespace docbin {

struct MetricToggles {
  bool fm = true;
  bool pfm = true;
  bool drd = true;
  bool psnr = true;

  bool operator==(const MetricToggles&) const = default;
};

// Full run configuration for the CLI and the batch pipeline. JSON layout
// mirrors this struct; missing keys take the defaults below, unknown keys
// are rejected.
struct RunConfig {
  HybridParams hybrid;
  LocalParams niblack = {.window = 25, .k = -0.2};
  LocalParams sauvola = {.window = 15, .k = 0.5, .r = 128.0};
  LocalParams nick = {.window = 35, .k = -0.1};
  LocalParams bernsen = {.window = 31, .bernsen_contrast_min = 15,
                         .bernsen_low_contrast_class = PixelClass::background};
  PostprocessParams post;
  WindowEngine local_exec = WindowEngine::naive;
  MetricToggles metrics;

  bool operator==(const RunConfig&) const = default;
};

namespace detail {

// Consumes keys of one JSON object; whatever remains unread is an error.
class JsonReader {
 public:
  JsonReader(const nlohmann::json& j, std::string path) : obj_(j), path_(std::move(path)) {
    if (!obj_.is_object()) throw InvalidParams("config: " + path_ + " must be an object");
  }

  void read_double(const char* key, double& out) {
    auto it = obj_.find(key);
    if (it == obj_.end()) return;
    if (!it->is_number()) throw InvalidParams("config: " + path_ + key + " must be a number");
    out = it->get<double>();
    obj_.erase(it);
  }

  void read_int(const char* key, int& out) {
    auto it = obj_.find(key);
    if (it == obj_.end()) return;
    if (!it->is_number_integer()) throw InvalidParams("config: " + path_ + key + " must be an integer");
    out = it->get<int>();
    obj_.erase(it);
  }

  void read_bool(const char* key, bool& out) {
    auto it = obj_.find(key);
    if (it == obj_.end()) return;
    if (!it->is_boolean()) throw InvalidParams("config: " + path_ + key + " must be a boolean");
    out = it->get<bool>();
    obj_.erase(it);
  }

  void read_string(const char* key, std::string& out) {
    auto it = obj_.find(key);
    if (it == obj_.end()) return;
    if (!it->is_string()) throw InvalidParams("config: " + path_ + key + " must be a string");
    out = it->get<std::string>();
    obj_.erase(it);
  }

  bool child(const char* key, nlohmann::json& out) {
    auto it = obj_.find(key);
    if (it == obj_.end()) return false;
    out = *it;
    obj_.erase(it);
    return true;
  }

  void finish() const {
    if (!obj_.empty())
      throw InvalidParams("config: unknown key '" + path_ + obj_.begin().key() + "'");
  }

 private:
  nlohmann::json obj_;
  std::string path_;
};

inline void parse_window_params(const nlohmann::json& j, const std::string& path, LocalParams& p,
                                bool with_r, bool with_bernsen) {
  JsonReader r(j, path);
  r.read_int("window", p.window);
  if (with_bernsen) {
    r.read_int("contrast_min", p.bernsen_contrast_min);
    std::string cls = p.bernsen_low_contrast_class == PixelClass::foreground ? "foreground" : "background";
    r.read_string("low_contrast_class", cls);
    if (cls == "foreground")
      p.bernsen_low_contrast_class = PixelClass::foreground;
    else if (cls == "background")
      p.bernsen_low_contrast_class = PixelClass::background;
    else
      throw InvalidParams("config: " + path + "low_contrast_class must be foreground|background");
  } else {
    r.read_double("k", p.k);
    if (with_r) r.read_double("r", p.r);
  }
  r.finish();
}

}  // namespace detail

inline void validate_config(const RunConfig& cfg) {
  detail::validate_hybrid(cfg.hybrid);
  detail::validate_local(cfg.niblack);
  detail::validate_local(cfg.sauvola);
  detail::validate_local(cfg.nick);
  detail::validate_local(cfg.bernsen);
  if (cfg.bernsen.bernsen_contrast_min < 0)
    throw InvalidParams("config: bernsen.contrast_min must be >= 0");
  if (cfg.post.lambda <= 0) throw InvalidParams("config: postprocess.lambda must be positive");
  if (cfg.hybrid.clahe.tile_cols < 1 || cfg.hybrid.clahe.tile_rows < 1 ||
      cfg.hybrid.clahe.clip_limit <= 0 || cfg.hybrid.clahe.epsilon <= 0)
    throw InvalidParams("config: bad clahe parameters");
  if (cfg.hybrid.tsmo_groups < 2 || 256 % cfg.hybrid.tsmo_groups != 0)
    throw InvalidParams("config: tsmo_groups must divide 256 and be >= 2");
}

inline RunConfig parse_config(const nlohmann::json& j) {
  RunConfig cfg;
  detail::JsonReader top(j, "");
  nlohmann::json sub;

  if (top.child("hybrid", sub)) {
    detail::JsonReader h(sub, "hybrid.");
    h.read_double("t1", cfg.hybrid.t1);
    h.read_double("t2", cfg.hybrid.t2);
    h.read_double("t3", cfg.hybrid.t3);
    h.read_double("d_min", cfg.hybrid.d_min);
    h.read_double("d_max", cfg.hybrid.d_max);
    h.read_double("p", cfg.hybrid.p_factor);
    h.read_double("k_smear", cfg.hybrid.k_smear);
    h.read_int("segment", cfg.hybrid.segment);
    h.read_double("t_ctr", cfg.hybrid.t_ctr);
    nlohmann::json inner;
    if (h.child("nick", inner))
      detail::parse_window_params(inner, "hybrid.nick.", cfg.hybrid.nick, false, false);
    if (h.child("clahe", inner)) {
      detail::JsonReader c(inner, "hybrid.clahe.");
      c.read_int("tile_cols", cfg.hybrid.clahe.tile_cols);
      c.read_int("tile_rows", cfg.hybrid.clahe.tile_rows);
      c.read_double("clip_limit", cfg.hybrid.clahe.clip_limit);
      c.read_double("epsilon", cfg.hybrid.clahe.epsilon);
      c.finish();
    }
    h.finish();
  }

  if (top.child("niblack", sub)) detail::parse_window_params(sub, "niblack.", cfg.niblack, false, false);
  if (top.child("sauvola", sub)) detail::parse_window_params(sub, "sauvola.", cfg.sauvola, true, false);
  if (top.child("nick", sub)) detail::parse_window_params(sub, "nick.", cfg.nick, false, false);
  if (top.child("bernsen", sub)) detail::parse_window_params(sub, "bernsen.", cfg.bernsen, false, true);

  if (top.child("postprocess", sub)) {
    detail::JsonReader pp(sub, "postprocess.");
    pp.read_double("lambda", cfg.post.lambda);
    pp.finish();
  }
  cfg.hybrid.lambda = cfg.post.lambda;

  top.read_int("tsmo_groups", cfg.hybrid.tsmo_groups);

  std::string exec = cfg.local_exec == WindowEngine::integral ? "integral" : "naive";
  top.read_string("local_exec", exec);
  if (exec == "integral")
    cfg.local_exec = WindowEngine::integral;
  else if (exec == "naive")
    cfg.local_exec = WindowEngine::naive;
  else
    throw InvalidParams("config: local_exec must be integral|naive");

  if (top.child("metrics", sub)) {
    detail::JsonReader m(sub, "metrics.");
    m.read_bool("fm", cfg.metrics.fm);
    m.read_bool("pfm", cfg.metrics.pfm);
    m.read_bool("drd", cfg.metrics.drd);
    m.read_bool("psnr", cfg.metrics.psnr);
    m.finish();
  }

  top.finish();
  validate_config(cfg);
  return cfg;
}

inline nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["hybrid"] = {
      {"t1", cfg.hybrid.t1},
      {"t2", cfg.hybrid.t2},
      {"t3", cfg.hybrid.t3},
      {"d_min", cfg.hybrid.d_min},
      {"d_max", cfg.hybrid.d_max},
      {"p", cfg.hybrid.p_factor},
      {"k_smear", cfg.hybrid.k_smear},
      {"segment", cfg.hybrid.segment},
      {"t_ctr", cfg.hybrid.t_ctr},
      {"nick", {{"window", cfg.hybrid.nick.window}, {"k", cfg.hybrid.nick.k}}},
      {"clahe",
       {{"tile_cols", cfg.hybrid.clahe.tile_cols},
        {"tile_rows", cfg.hybrid.clahe.tile_rows},
        {"clip_limit", cfg.hybrid.clahe.clip_limit},
        {"epsilon", cfg.hybrid.clahe.epsilon}}},
  };
  j["niblack"] = {{"window", cfg.niblack.window}, {"k", cfg.niblack.k}};
  j["sauvola"] = {{"window", cfg.sauvola.window}, {"k", cfg.sauvola.k}, {"r", cfg.sauvola.r}};
  j["nick"] = {{"window", cfg.nick.window}, {"k", cfg.nick.k}};
  j["bernsen"] = {
      {"window", cfg.bernsen.window},
      {"contrast_min", cfg.bernsen.bernsen_contrast_min},
      {"low_contrast_class",
       cfg.bernsen.bernsen_low_contrast_class == PixelClass::foreground ? "foreground" : "background"}};
  j["postprocess"] = {{"lambda", cfg.post.lambda}};
  j["tsmo_groups"] = cfg.hybrid.tsmo_groups;
  j["local_exec"] = cfg.local_exec == WindowEngine::integral ? "integral" : "naive";
  j["metrics"] = {{"fm", cfg.metrics.fm},
                  {"pfm", cfg.metrics.pfm},
                  {"drd", cfg.metrics.drd},
                  {"psnr", cfg.metrics.psnr}};
  return j;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound("config file not found: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParams("config: parse error in " + path.string() + ": " + e.what());
  }
  return parse_config(j);
}

}  // namespace docbin

#endif  // DOCBIN_CONFIG_HPP
