#pragma once

#include <json.hpp>

#include "lharq/policy.hpp"

// Internal JSON mapping shared by the policy serializers. The on-disk format
// is dispatched on the "scheme" field, so the optimizer policies and the
// fixed-outage policies share one file format.

namespace lharq::detail {

inline constexpr const char* kPolicyFormatTag = "lharq-policy";
inline constexpr int kPolicyFormatVersion = 1;

nlohmann::json policy_to_json(const Policy& p);
Policy policy_from_json(const nlohmann::json& j);

nlohmann::json action_set_to_json(const ActionSet& a);
ActionSet action_set_from_json(const nlohmann::json& j);

}  // namespace lharq::detail
