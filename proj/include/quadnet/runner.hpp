#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "quadnet/error.hpp"
#include "quadnet/scenario.hpp"

namespace quadnet {

/// Requested preset name is not registered. The message lists valid names.
class UnknownPresetError : public Error {
 public:
  explicit UnknownPresetError(const std::string& name);
};

enum class Status { Pass, Fail, Inconclusive };

std::string to_string(Status s);

struct CheckResult {
  std::string name;
  Status status = Status::Fail;
  std::string details;
  std::optional<std::string> witness;
  double millis = 0;
};

struct Report {
  std::string version;
  std::string scenario;
  std::vector<CheckResult> checks;

  /// Fail if any check failed, else inconclusive if any was, else pass.
  Status verdict() const;
};

struct RunOptions {
  /// Main prime for modular linear algebra and the first smoothness prime.
  std::uint64_t prime = 65521;
  /// Set when the user chose `prime`; smoothness then tries it first.
  bool prime_given = false;
  /// Graded-piece dimensions over Q instead of mod p.
  bool exact = false;
  unsigned jobs = 1;
};

const char* tool_version();

/// Runs every `check` line of the scenario. Independent checks run on up to
/// `jobs` threads; results keep the scenario order.
Report run_scenario(const Scenario& scenario, const RunOptions& options = {});

/// Names accepted by run_preset, including "all".
std::vector<std::string> preset_names();
/// Directory holding the preset files: $QUADNET_PRESET_DIR if set, else the
/// directory configured at build time.
std::filesystem::path preset_dir();
/// Throws UnknownPresetError.
std::filesystem::path preset_path(std::string_view name);
Scenario load_preset(std::string_view name);
/// "all" runs every preset and prefixes check names with the preset name.
Report run_preset(std::string_view name, const RunOptions& options = {});
/// Preset text with includes inlined.
std::string dump_preset(std::string_view name);

nlohmann::ordered_json to_json(const Report& report);
/// Human-readable form; failed checks first, then inconclusive, then passed.
std::string to_text(const Report& report);
/// 0 pass, 1 fail, 2 inconclusive.
int exit_code(const Report& report);

}  // namespace quadnet
