#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "smm/harness.hpp"

namespace smm {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CaseName { Mms, DiffusionLimit, CrookedPipe };

CaseName parse_case(const std::string& s);
std::string to_string(CaseName c);

/// Everything one `solver <case>` invocation needs. Defaults reproduce the
/// published benchmark settings; a YAML file may override any of them.
struct RunConfig {
  CaseName name = CaseName::Mms;
  std::vector<harness::MethodEntry> methods;
  harness::MmsOptions mms;
  harness::DiffusionLimitOptions diffusion;
  harness::CrookedPipeOptions crooked;

  OuterConfig& outer();
};

RunConfig default_config(CaseName c);

/// Reads a YAML file with optional sections
///   mesh, materials, regions, source, inflow, quadrature, methods,
///   tolerances, solver, and case-specific keys (sizes, eps, delta).
/// Unknown top-level keys are rejected.
RunConfig load_config(const std::string& path, CaseName c);
RunConfig parse_config(const std::string& yaml_text, CaseName c);

}  // namespace smm
