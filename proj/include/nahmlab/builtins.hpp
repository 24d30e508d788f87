#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nahmlab/rings.hpp"
#include "nahmlab/series.hpp"

namespace nahmlab {

struct Mismatch {
  std::optional<std::string> exponent;  // q-exponent for series checks
  std::string lhs;                      // computed
  std::string rhs;                      // expected
};

struct CheckOutcome {
  bool pass = false;
  std::optional<Mismatch> mismatch;
  std::string message;
  nlohmann::json detail;
};

struct BuiltinContext {
  Exponent depth;
  mpfr_prec_t prec = 192;
};

// Arguments are the ';'-separated fields inside NAME(...).
using Builtin = std::function<CheckOutcome(const std::vector<std::string>& args, const BuiltinContext& ctx)>;

const Builtin* find_builtin(std::string_view name);
std::vector<std::string> builtin_names();

template <class R>
Mismatch mismatch_of(const MatchReport<R>& m) {
  return {m.exponent ? std::optional<std::string>(m.exponent->to_string()) : std::nullopt,
          RingTraits<R>::to_string(m.lhs), RingTraits<R>::to_string(m.rhs)};
}

}  // namespace nahmlab
