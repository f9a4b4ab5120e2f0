#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "quadnet/runner.hpp"

namespace {

constexpr int kUsage = 64;

bool is_preset(const std::string& s) {
  for (const auto& n : quadnet::preset_names())
    if (n == s) return true;
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact verification of quadric-net computations"};
  app.set_version_flag("--version", std::string(quadnet::tool_version()));
  app.require_subcommand(1);

  std::string target, format = "text", out;
  quadnet::RunOptions options;
  auto* verify = app.add_subcommand("verify", "Run a preset or scenario file");
  verify->add_option("target", target, "Preset name or scenario path")->required();
  auto* prime = verify->add_option("--prime", options.prime, "Prime for modular linear algebra")
                    ->check(CLI::Range(std::uint64_t{3}, std::uint64_t{(1ull << 31) - 1}));
  verify->add_flag("--exact", options.exact, "Certify piece dimensions over Q");
  verify->add_option("--jobs", options.jobs, "Concurrent checks")->check(CLI::Range(1u, 256u));
  verify->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}));
  verify->add_option("--out", out, "Write the report to FILE");

  std::string dump_name;
  auto* dump = app.add_subcommand("dump-preset", "Print a preset with includes inlined");
  dump->add_option("name", dump_name, "Preset name")->required();

  auto* list = app.add_subcommand("list-presets", "List preset names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*list) {
      for (const auto& n : quadnet::preset_names()) std::cout << n << "\n";
      return 0;
    }
    if (*dump) {
      std::cout << quadnet::dump_preset(dump_name);
      return 0;
    }
    options.prime_given = prime->count() > 0;
    if (options.prime_given) {
      auto p = options.prime;
      bool composite = p % 2 == 0;
      for (std::uint64_t d = 3; !composite && d * d <= p; d += 2) composite = p % d == 0;
      if (composite) {
        std::cerr << "--prime: " << p << " is not an odd prime\n";
        return kUsage;
      }
    }
    const bool file = !is_preset(target) && std::filesystem::exists(target);
    const quadnet::Report report = file ? quadnet::run_scenario(quadnet::load_scenario(target), options)
                                        : quadnet::run_preset(target, options);
    const std::string text = format == "json" ? quadnet::to_json(report).dump(2) + "\n" : quadnet::to_text(report);
    if (out.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(out);
      if (!(f << text)) {
        std::cerr << "cannot write " << out << "\n";
        return kUsage;
      }
    }
    return quadnet::exit_code(report);
  } catch (const quadnet::UnknownPresetError& e) {
    std::cerr << e.what() << " (and no scenario file of that name)\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
