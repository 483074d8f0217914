#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "wmstat/csv.hpp"

namespace wmstat {

using ParamMap = std::map<std::string, std::string>;

struct ExperimentConfig {
  std::string experiment;
  ParamMap params;  // raw values, validated against the experiment schema
  std::uint64_t seed = 0;
  std::string output;
};

enum class ParamKind { kReal, kInt, kRealList, kIntList, kString, kBool };

// One accepted key. Numeric values (and every element of a list) must lie
// in [lo, hi], with the open flags excluding an endpoint.
struct ParamSpec {
  std::string name;
  ParamKind kind = ParamKind::kReal;
  std::string default_value;
  double lo = -1e300;
  double hi = 1e300;
  bool lo_open = false;
  bool hi_open = false;
  std::string help;
};

struct ExperimentInfo {
  std::string name;
  std::string summary;
  std::vector<ParamSpec> params;
};

const std::vector<ExperimentInfo>& experiment_registry();
// Throws ConfigError("experiment", ...) for unknown names.
const ExperimentInfo& find_experiment(std::string_view name);

// key=value lines; blank lines and '#' comments are skipped. A repeated key
// or a line without '=' is a ConfigError.
ParamMap parse_config(std::istream& in);
ParamMap load_config(const std::string& path);

// Merges overrides onto base, later values winning.
ParamMap merge_params(ParamMap base, const ParamMap& overrides);

// Checks every key and value against the schema; the ConfigError names the
// offending key.
void validate_config(const ExperimentConfig& cfg);

// Runs the experiment. The table depends only on (experiment, params, seed);
// `workers` changes wall time only. Throws ConfigError or
// ResourceLimitError.
CsvTable run(const ExperimentConfig& cfg, unsigned workers = 1);

}  // namespace wmstat
