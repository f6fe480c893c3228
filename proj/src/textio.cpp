#include "misspec/textio.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace misspec {

std::string fmt17(double x) {
  if (x == 0.0) return "0";
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite value in output");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  // split mantissa / exponent, then place the decimal point by hand
  const char* e = std::strchr(buf, 'e');
  int exp10 = std::atoi(e + 1);
  std::string digits;
  bool negative = false;
  for (const char* p = buf; p != e; ++p) {
    if (*p == '-') negative = true;
    else if (*p >= '0' && *p <= '9') digits.push_back(*p);
  }
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();

  std::string out;
  if (exp10 >= int(digits.size()) - 1) {
    out = digits + std::string(std::size_t(exp10) - digits.size() + 1, '0');
  } else if (exp10 >= 0) {
    out = digits.substr(0, std::size_t(exp10) + 1) + "." + digits.substr(std::size_t(exp10) + 1);
  } else {
    out = "0." + std::string(std::size_t(-exp10) - 1, '0') + digits;
  }
  return negative ? "-" + out : out;
}

void JsonWriter::comma() {
  if (need_comma_) out_ += ",";
  need_comma_ = false;
}

JsonWriter& JsonWriter::begin_object() {
  comma();
  out_ += "{";
  return *this;
}

JsonWriter& JsonWriter::begin_nested_object(const std::string& key) {
  comma();
  out_ += "\"" + key + "\":{";
  return *this;
}

JsonWriter& JsonWriter::raw(const std::string& text) {
  out_ += text;
  need_comma_ = !text.empty();
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += "}";
  need_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::begin_array(const std::string& key) {
  comma();
  out_ += "\"" + key + "\":[";
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += "]";
  need_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::begin_object_in_array() {
  comma();
  out_ += "{";
  return *this;
}

JsonWriter& JsonWriter::key_value(const std::string& key, double v) {
  comma();
  out_ += "\"" + key + "\":" + fmt17(v);
  need_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::key_value(const std::string& key, std::int64_t v) {
  comma();
  out_ += "\"" + key + "\":" + std::to_string(v);
  need_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::key_value(const std::string& key, std::uint64_t v) {
  comma();
  out_ += "\"" + key + "\":" + std::to_string(v);
  need_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::key_value(const std::string& key, bool v) {
  comma();
  out_ += "\"" + key + "\":" + (v ? "true" : "false");
  need_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::key_value(const std::string& key, const std::string& v) {
  comma();
  std::string escaped;
  for (char c : v) {
    if (c == '"' || c == '\\') escaped += '\\';
    escaped += c;
  }
  out_ += "\"" + key + "\":\"" + escaped + "\"";
  need_comma_ = true;
  return *this;
}

std::string report_to_json(const McReport& r) {
  JsonWriter w;
  w.begin_object();
  w.key_value("scenario", r.scenario);
  w.key_value("seed", std::uint64_t(r.seed));
  w.key_value("regime", r.regime);
  w.key_value("rate_exponent", r.rate_exp);
  w.key_value("theta0", r.theta0);
  w.key_value("theta_hat", r.theta_hat);
  w.key_value("phi_hat", r.phi_hat);
  w.key_value("jump_delta", r.jump_delta);
  w.key_value("curvature", r.curvature);
  w.key_value("curvature_quadratic", r.curvature_quadratic);
  w.key_value("gamma", r.gamma);
  w.key_value("minorant_kappa", r.minorant);
  if (r.mm_residual) w.key_value("mm_residual", *r.mm_residual);
  if (r.fisher) w.key_value("fisher", *r.fisher);
  if (r.d_squared) w.key_value("d_squared", *r.d_squared);
  w.begin_array("rungs");
  for (const auto& rung : r.rungs) {
    w.begin_object_in_array();
    w.key_value("eps", rung.eps);
    w.key_value("grid_steps", std::int64_t(rung.grid_steps));
    w.key_value("replications", std::int64_t(rung.replications));
    w.key_value("median_abs_err", rung.median_abs_err);
    w.key_value("median_abs_err_theta0", rung.median_abs_err_theta0);
    w.key_value("mean_err", rung.mean_err);
    w.key_value("norm_abs_mom1", rung.norm_abs_mom1);
    w.key_value("norm_abs_mom2", rung.norm_abs_mom2);
    w.key_value("boundary_frac", rung.boundary_frac);
    w.key_value("unreliable", rung.unreliable);
    w.end_object();
  }
  w.end_array();
  if (r.slope) w.key_value("slope", *r.slope);
  if (r.slope_stderr) w.key_value("slope_stderr", *r.slope_stderr);
  if (r.ks_stat) {
    w.key_value("ks_stat", *r.ks_stat);
    w.key_value("ks_sample", std::uint64_t(r.ks_sample));
    w.key_value("ks_reference_n", std::uint64_t(r.ks_reference_n));
  }
  if (!r.ks_reference.empty()) w.key_value("ks_reference", r.ks_reference);
  w.begin_array("targets");
  for (const auto& t : r.targets) {
    w.begin_object_in_array();
    w.key_value("name", t.name);
    w.key_value("value", t.value);
    w.key_value("constraint", t.constraint);
    w.key_value("pass", t.pass);
    w.key_value("gated", t.gated);
    w.end_object();
  }
  w.end_array();
  w.key_value("gating", r.gating_enabled ? std::string("enabled")
                                         : std::string("low-N: targets not evaluated"));
  w.key_value("pass", r.all_pass);
  w.end_object();
  return w.str() + "\n";
}

std::string records_to_csv(const std::vector<EstimateRecord>& records) {
  std::string out = "rep,eps,theta_mle,theta_bayes,theta_tfe,loglr,boundary_flag\n";
  for (const auto& rec : records) {
    out += std::to_string(rec.replication);
    out += "," + fmt17(rec.eps);
    out += "," + fmt17(rec.theta_mle);
    out += ",";
    if (rec.theta_bayes) out += fmt17(*rec.theta_bayes);
    out += ",";
    if (rec.theta_tfe) out += fmt17(*rec.theta_tfe);
    out += "," + fmt17(rec.loglr_at_mle);
    out += ",";
    out += rec.boundary ? "1" : "0";
    out += "\n";
  }
  return out;
}

std::string path_to_csv(const ObservationPath& path) {
  std::string out = "t,X\n";
  for (std::int64_t i = 0; i <= path.grid.steps; ++i)
    out += fmt17(path.grid.node(i)) + "," + fmt17(path.values[std::size_t(i)]) + "\n";
  return out;
}

std::string samples_to_csv(const std::vector<double>& samples) {
  std::string out = "u\n";
  for (double v : samples) out += fmt17(v) + "\n";
  return out;
}

std::string scan_to_csv(const std::vector<double>& thetas, const std::vector<double>& phis) {
  std::string out = "theta,phi\n";
  for (std::size_t i = 0; i < thetas.size(); ++i)
    out += fmt17(thetas[i]) + "," + fmt17(phis[i]) + "\n";
  return out;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << contents;
  if (!f) throw std::runtime_error("write failed: " + path);
}

namespace {

void write_affine(JsonWriter& w, const std::string& key, const Affine& a) {
  w.begin_array(key);
  // raw affine coefficients (a0, a1); comma handling via key_value is object
  // oriented, so splice the two numbers manually
  std::string arr = fmt17(a.a0) + "," + fmt17(a.a1);
  w.raw(arr);
  w.end_array();
}

void write_signal(JsonWriter& w, const std::string& key, const SignalSpec& s) {
  w.begin_nested_object(key);
  w.key_value("family", s.family_tag());
  switch (s.family) {
    case Family::kSine:
      w.key_value("amp", s.amp);
      w.key_value("omega", s.omega);
      break;
    case Family::kPowerSgn:
      w.key_value("kappa", s.kappa);
      break;
    case Family::kCusp:
      w.key_value("amp", s.amp);
      w.key_value("kappa", s.kappa);
      break;
    case Family::kChangePoint:
      if (!s.is_sgn()) {
        write_affine(w, "h", s.h);
        write_affine(w, "g", s.g);
        if (!s.q.is_zero()) write_affine(w, "q", s.q);
        if (!s.r.is_zero()) write_affine(w, "r", s.r);
      }
      break;
    default:
      break;
  }
  w.end_object();
}

}  // namespace

std::string config_to_json(const RunConfig& config) {
  const Scenario& s = config.scenario;
  JsonWriter w;
  w.begin_object();
  w.begin_nested_object("scenario");
  w.key_value("name", s.name);
  w.key_value("horizon", s.horizon);
  w.key_value("base_steps", std::int64_t(s.base_steps));
  w.key_value("cp_grid_rule", s.cp_grid_rule);
  write_signal(w, "truth", s.truth);
  w.key_value("theta0", s.theta0);
  write_signal(w, "assumed", s.assumed);
  w.begin_nested_object("window");
  w.key_value("lo", s.window.lo);
  w.key_value("hi", s.window.hi);
  w.end_object();
  w.begin_array("ladder");
  {
    std::string arr;
    for (std::size_t i = 0; i < s.ladder.size(); ++i)
      arr += (i ? "," : "") + fmt17(s.ladder[i]);
    w.raw(arr);
  }
  w.end_array();
  w.key_value("replications", std::int64_t(s.replications));
  w.key_value("seed", std::uint64_t(s.master_seed));
  {
    std::string est;
    if (s.estimators.mle) est += "\"mle\"";
    if (s.estimators.bayes) est += std::string(est.empty() ? "" : ",") + "\"bayes\"";
    if (s.estimators.tfe) est += std::string(est.empty() ? "" : ",") + "\"tfe\"";
    w.begin_array("estimators");
    w.raw(est);
    w.end_array();
  }
  w.begin_nested_object("regime");
  w.key_value("kind", s.regime.str());
  if (s.regime.kappa != 0.0) w.key_value("kappa", s.regime.kappa);
  w.end_object();
  w.begin_nested_object("targets");
  if (s.targets.slope_min) w.key_value("slope_min", *s.targets.slope_min);
  if (s.targets.slope_max) w.key_value("slope_max", *s.targets.slope_max);
  if (s.targets.ks_max) w.key_value("ks_max", *s.targets.ks_max);
  w.key_value("ks_gate_eps", s.targets.ks_gate_eps);
  w.end_object();
  w.end_object();
  if (!config.output_dir.empty()) w.key_value("output_dir", config.output_dir);
  w.key_value("emit_paths", config.emit_paths);
  w.key_value("threads", std::int64_t(config.threads));
  w.end_object();
  return w.str() + "\n";
}

}  // namespace misspec

#include <json.hpp>

namespace misspec {

namespace {

using nlohmann::json;

Affine parse_affine(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2)
    throw InvalidSpecError("signal field '" + field + "' must be [a0, a1]");
  return Affine{j[0].get<double>(), j[1].get<double>()};
}

SignalSpec parse_signal(const json& j, const std::string& which) {
  if (!j.contains("family"))
    throw InvalidSpecError("signal '" + which + "' is missing its family tag");
  const std::string family = j.at("family").get<std::string>();
  if (family == "linear-drift") return SignalSpec::linear_drift();
  if (family == "sine")
    return SignalSpec::sine(j.value("amp", 1.0), j.value("omega", 1.0));
  if (family == "power-sgn") return SignalSpec::power_sgn(j.value("kappa", 1.0));
  if (family == "cusp") return SignalSpec::cusp(j.value("amp", 1.0), j.value("kappa", 0.25));
  if (family == "sgn") return SignalSpec::sgn();
  if (family == "step-hg") {
    SignalSpec s = SignalSpec::change_point(
        j.contains("h") ? parse_affine(j.at("h"), "h") : Affine{1.0, 0.0},
        j.contains("g") ? parse_affine(j.at("g"), "g") : Affine{-1.0, 0.0});
    if (j.contains("q")) s.q = parse_affine(j.at("q"), "q");
    if (j.contains("r")) s.r = parse_affine(j.at("r"), "r");
    return s;
  }
  throw InvalidSpecError("unknown signal family tag: " + family);
}

}  // namespace

RunConfig config_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidSpecError(std::string("config parse error: ") + e.what());
  }
  try {
    RunConfig cfg;
    const json& sj = root.at("scenario");
    Scenario& s = cfg.scenario;
    s.name = sj.value("name", std::string("custom"));
    s.horizon = sj.at("horizon").get<double>();
    s.base_steps = sj.value("base_steps", std::int64_t(1) << 14);
    s.cp_grid_rule = sj.value("cp_grid_rule", false);
    s.truth = parse_signal(sj.at("truth"), "truth");
    s.theta0 = sj.at("theta0").get<double>();
    s.assumed = parse_signal(sj.at("assumed"), "assumed");
    s.window.lo = sj.at("window").at("lo").get<double>();
    s.window.hi = sj.at("window").at("hi").get<double>();
    s.ladder = sj.value("ladder", std::vector<double>{});
    s.replications = sj.value("replications", 1000);
    s.master_seed = sj.value("seed", std::uint64_t(1));
    if (sj.contains("estimators")) {
      s.estimators = EstimatorSet{false, false, false};
      for (const auto& e : sj.at("estimators")) {
        const std::string name = e.get<std::string>();
        if (name == "mle") s.estimators.mle = true;
        else if (name == "bayes") s.estimators.bayes = true;
        else if (name == "tfe") s.estimators.tfe = true;
        else throw InvalidSpecError("unknown estimator: " + name);
      }
    }
    if (sj.contains("regime")) {
      const json& rj = sj.at("regime");
      s.regime = RegimeTag::parse(rj.at("kind").get<std::string>(), rj.value("kappa", 0.0));
    }
    if (sj.contains("targets")) {
      const json& tj = sj.at("targets");
      if (tj.contains("slope_min")) s.targets.slope_min = tj.at("slope_min").get<double>();
      if (tj.contains("slope_max")) s.targets.slope_max = tj.at("slope_max").get<double>();
      if (tj.contains("ks_max")) s.targets.ks_max = tj.at("ks_max").get<double>();
      s.targets.ks_gate_eps = tj.value("ks_gate_eps", 0.05);
    }
    cfg.output_dir = root.value("output_dir", std::string());
    cfg.emit_paths = root.value("emit_paths", false);
    cfg.threads = root.value("threads", 0);
    return cfg;
  } catch (const json::exception& e) {
    throw InvalidSpecError(std::string("config field error: ") + e.what());
  }
}

}  // namespace misspec

