#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "icw/io.hpp"

namespace icw::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInternal = 3;

struct RunConfig {
  std::string command;
  double psd_tol = 1e-8;
  double eig_tol = 1e-8;
  double gap_tol = 0.05;
  std::size_t budget = 2'000'000;
  std::uint64_t seed = 0;
  std::string format = "json";  // or "csv"
  std::string output;           // empty: stdout
};

/// 2e6 unless ICW_ELEMENT_BUDGET holds a positive integer.
std::size_t default_budget();

/// Resolves a function spec: any make_family spec, "random_pd:dim=D[,seed=S]",
/// or a '*'-separated product of those.
GroupFunction resolve_function(const GroupModel& model, const std::string& spec, std::uint64_t seed);

/// "gensum" or a group ring expression such as "a + 2*b^-1 - e".
GroupRingElement resolve_element(const GroupModel& model, const std::string& text);

/// Expands integer ranges "a..b" in the last parameter: "haagerup:n=1..3" gives
/// three specs. Semicolons separate independent specs.
std::vector<std::string> expand_family(const std::string& spec);

/// Flat CSV: the report's "table" rows when present, else key,value pairs.
std::string to_csv(const ordered_json& report);

/// Runs one command; args exclude the program name. The report goes to `out`
/// (or the --output file), diagnostics to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, char** argv);

}  // namespace icw::cli
