#pragma once

#include <string>
#include <vector>

#include "misspec/experiments.hpp"

namespace misspec {

// 17-significant-digit plain decimal (never scientific notation), enough to
// round-trip any double and keep emitted files byte-stable.
std::string fmt17(double x);

// Minimal JSON writer that emits keys in insertion order with fmt17 numbers.
class JsonWriter {
public:
  JsonWriter& begin_object();
  JsonWriter& begin_nested_object(const std::string& key);
  JsonWriter& end_object();
  JsonWriter& begin_array(const std::string& key);
  JsonWriter& end_array();
  JsonWriter& begin_object_in_array();
  JsonWriter& raw(const std::string& text);
  JsonWriter& key_value(const std::string& key, double v);
  JsonWriter& key_value(const std::string& key, std::int64_t v);
  JsonWriter& key_value(const std::string& key, std::uint64_t v);
  JsonWriter& key_value(const std::string& key, bool v);
  JsonWriter& key_value(const std::string& key, const std::string& v);
  std::string str() const { return out_; }

private:
  void comma();
  std::string out_;
  bool need_comma_ = false;
};

std::string report_to_json(const McReport& report);

// CSV with the fixed header (rep, eps, theta_mle, theta_bayes, theta_tfe,
// loglr, boundary_flag); absent estimators are empty fields.
std::string records_to_csv(const std::vector<EstimateRecord>& records);

std::string path_to_csv(const ObservationPath& path);

std::string samples_to_csv(const std::vector<double>& samples);

std::string scan_to_csv(const std::vector<double>& thetas, const std::vector<double>& phis);

void write_file(const std::string& path, const std::string& contents);

// Run configuration file: nested JSON mirroring the Scenario fields.
struct RunConfig {
  Scenario scenario;
  std::string output_dir;
  bool emit_paths = false;
  int threads = 0;  // 0 = hardware default
};

std::string config_to_json(const RunConfig& config);
RunConfig config_from_json(const std::string& text);

}  // namespace misspec
