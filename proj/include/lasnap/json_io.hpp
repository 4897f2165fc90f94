#pragma once

#include "json.hpp"

#include "lasnap/lattice.hpp"

namespace lasnap {

/// {"cells": [[writes, "payload"], ...], "counters": [...]}
nlohmann::json vector_to_json(const AsoVector& x);
AsoVector vector_from_json(const nlohmann::json& j);

}  // namespace lasnap
