#ifndef CQAD_JSON_IO_HPP
#define CQAD_JSON_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "cqad/device.hpp"
#include "cqad/dressed.hpp"
#include "cqad/fock.hpp"
#include "cqad/spectrum.hpp"

namespace cqad {

using json = nlohmann::json;

// Strict parsers: unknown keys are rejected. Complex values encode as a
// number (real) or a [re, im] pair.

json to_json(cplx value);
cplx cplx_from_json(const json& j);

DeviceConfig device_from_json(const json& j);
json to_json(const DeviceConfig& config);

std::vector<DriveTone> drives_from_json(const json& j);
json to_json(const std::vector<DriveTone>& drives);

json to_json(const EngineeredCoupling& coupling);
json to_json(const DrivePlan& plan);
json to_json(const CollisionReport& report);
json to_json(const ValidationReport& report);

GateSpec gate_from_json(const json& j);
json to_json(const GateSpec& gate);
json state_to_json(const SparseFockState& state);

DeviceConfig load_device(const std::string& path);
json load_json(const std::string& path);

}  // namespace cqad

#endif
