#pragma once

#include <string>

#include "ctx/hidden.hpp"
#include "ctx/pba.hpp"
#include "ctx/possibilistic.hpp"
#include "ctx/quantum.hpp"
#include "ctx/sampling.hpp"
#include "ctx/scenario.hpp"

namespace ctx {

/// All parsers throw ParseError with a location message on malformed input.
/// Serializers emit canonical bytes: sorted object keys, two-space indent,
/// rationals in lowest terms, trailing newline. parse(serialize(x)) == x.

EmpiricalModel parse_model(const std::string& text);
std::string serialize_model(const EmpiricalModel& model);

QuantumRealization parse_realization(const std::string& text);
std::string serialize_realization(const QuantumRealization& realization);

VectorConfiguration parse_configuration(const std::string& text);
std::string serialize_configuration(const VectorConfiguration& configuration);

FinitePartialBooleanAlgebra parse_pba(const std::string& text);
std::string serialize_pba(const FinitePartialBooleanAlgebra& pba);

/// Weights file: {"A0,B0": "1/4", ...}; must cover the scenario's contexts.
std::map<Context, Rational> parse_context_weights(const std::string& text,
                                                  const MeasurementScenario& scenario);

std::string serialize_certificate(const FeasibilityCertificate& certificate);
std::string serialize_classification(const Classification& classification);
std::string serialize_ks_coloring(const KsColoring& coloring);
std::string serialize_sampling(const EmpiricalModel& model, const SamplingConfig& config,
                               const SamplingResult& result);

} // namespace ctx
