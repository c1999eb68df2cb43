#pragma once

#include <json.hpp>

#include "embedlab/classify.hpp"
#include "embedlab/embed.hpp"
#include "embedlab/structure.hpp"

namespace embedlab::cli {

using Json = nlohmann::ordered_json;

Json matrix_json(const RealMatrix& m);
Json tolerances_json(const ToleranceConfig& cfg);
Json class_report_json(const ClassReport& r);
Json structure_json(const StructureDecomposition& d);
Json necessary_json(const NecessaryConditionReport& r);
Json bound_json(const BranchBound& b);
Json embed_json(const EmbeddabilityReport& r);
Json divisibility_json(const DivisibilityReport& r);

}  // namespace embedlab::cli
