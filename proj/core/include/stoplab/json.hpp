#pragma once

#include <nlohmann/json.hpp>

namespace stoplab {

/// Insertion-ordered JSON; every serialized record keeps a stable field order.
using Json = nlohmann::ordered_json;

}  // namespace stoplab
