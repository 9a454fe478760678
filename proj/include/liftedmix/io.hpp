#pragma once

#include <json.hpp>

#include "liftedmix/averaging.hpp"
#include "liftedmix/flows.hpp"
#include "liftedmix/lifting.hpp"

namespace liftedmix {

using Json = nlohmann::ordered_json;

/// "%.17g": round-trips every double exactly.
std::string format_double(double v);
double parse_double(const std::string& s);

Json to_json(const Chain& c);
/// Inverse of to_json(Chain); the graph is not part of the record.
Chain chain_from_json(const Json& j);

Json to_json(const LiftedChain& lc);
Json to_json(const FlowDecomposition& fd);
Json to_json(const ExpanderSpec& ex);
Json to_json(const GraphMetrics& m);
Json to_json(const MixingReport& r);
Json to_json(const SpectralReport& r);
Json to_json(const ConductanceResult& r);
Json to_json(const RunReport& r);
Json to_json(const LiftValidity& v);
Json to_json(const StoppingRuleReport& r);

}  // namespace liftedmix
