#pragma once

// Discrete probability kernel: spaces, states, predicates, channels and
// their compositions.

#include "chaininf/core/ket.hpp"
#include "chaininf/core/ops.hpp"
#include "chaininf/core/space.hpp"
#include "chaininf/core/types.hpp"
#include "chaininf/errors.hpp"
