#pragma once

#include "forge/closure.hpp"
#include "forge/construction.hpp"
#include "forge/graphon.hpp"
#include "forge/verify.hpp"

#include <json.hpp>

namespace forge {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "forge 0.1.0";

/// Every artifact embeds the configuration that produced it, so re-running
/// with the embedded config reproduces the artifact byte for byte.
struct RunConfig {
  std::string command;
  std::uint64_t seed = 0;
  long stages = 40;
  int n = 0;
  long draws = 0;
  std::string measure = "cauchy";
  double location = 0.0;
  double scale = 1.0;
  int bits = 96;
  int bound = 4;
  int width = 3;
};

Json to_json(const RunConfig& c);
RunConfig run_config_from_json(const Json& j);

Json to_json(const Signature& sig);
Signature signature_from_json(const Json& j);

Json to_json(const FiniteStructure& s);
FiniteStructure structure_from_json(const Json& j);

Json to_json(const QfFormula& f);
QfFormula qf_formula_from_json(const Json& j);

Json to_json(const CompiledTheory& th);
TheoryRef theory_from_json(const Json& j);

Json to_json(const ConstructionTrace& tr);
ConstructionTrace trace_from_json(const Json& j);

Json to_json(const StepGraphon& w);
StepGraphon graphon_from_json(const Json& j);

Json to_json(const VerificationReport& r);

Json to_json(const AmalgamReport& r);
Json to_json(const DuplicationReport& r);

/// Static picture of the trace's intervals: rationals as ticks, boundaries
/// as bars, witness intervals annotated by the axiom that created them.
std::string trace_svg(const ConstructionTrace& tr);

}  // namespace forge
