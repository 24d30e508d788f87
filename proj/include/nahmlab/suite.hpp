#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nahmlab/builtins.hpp"

namespace nahmlab {

// One line of a suite file:
//   id: LHS == RHS [@ depth] [deep=N] [expect=fail]
//   id: builtin name(arg; arg; ...) [@ depth] [deep=N] [expect=fail]
struct CheckSpec {
  std::string id;
  bool builtin = false;
  std::string lhs, rhs;          // identity
  std::string name;              // builtin
  std::vector<std::string> args;
  std::optional<Exponent> depth;
  std::optional<Exponent> deep;  // depth used under --deep
  bool expect_fail = false;
  std::size_t line = 0;
  std::string malformed;  // reported as an error when the check runs
};

struct SuiteDefinition {
  std::string id;
  std::string description;
  Exponent depth{100};
  std::string ring = "rational";
  std::vector<CheckSpec> checks;
  std::string source;  // file text, part of the config hash
};

// Header lines: suite, description, depth, ring. '#' starts a comment.
// Throws ParseError on bad headers, ids or options and on duplicate ids; a
// malformed check body only marks that check.
SuiteDefinition parse_suite(std::string_view text);

std::filesystem::path suite_directory();  // NAHMLAB_SUITES or the installed suites
std::vector<std::string> list_suites();
SuiteDefinition load_suite(const std::string& id);  // DomainError for unknown ids

struct RunOptions {
  std::optional<Exponent> depth;  // replaces every check depth
  std::optional<std::string> ring;
  mpfr_prec_t prec = 192;
  bool deep = false;
  int jobs = 0;  // 0: OpenMP default
};

struct CheckResult {
  std::string id;
  std::string status;  // pass | fail | error
  Exponent depth;
  double elapsed_ms = 0;
  std::optional<Mismatch> mismatch;
  std::string message;
  bool expect_fail = false;
  nlohmann::json detail;
};

struct VerificationReport {
  std::string suite;
  std::string version;
  std::string config_hash;
  std::vector<CheckResult> checks;  // sorted by id
  bool ok() const;
  std::size_t passed() const;
};

// Identity check of two grammar expressions in the given ring.
CheckOutcome check_identity(const std::string& lhs, const std::string& rhs, Exponent depth, const std::string& ring,
                            mpfr_prec_t prec);

VerificationReport run_suite(const SuiteDefinition& suite, const RunOptions& opt);
VerificationReport run_suite(const std::string& id, const RunOptions& opt);

// FNV-1a over the suite text and the options that change results
std::string config_hash(const SuiteDefinition& suite, const RunOptions& opt);

nlohmann::json to_json(const VerificationReport& r, bool timing = true);
std::string to_text(const VerificationReport& r);

}  // namespace nahmlab
