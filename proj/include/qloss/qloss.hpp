#pragma once

#include "qloss/cavity.hpp"
#include "qloss/channel.hpp"
#include "qloss/core.hpp"
#include "qloss/correction.hpp"
#include "qloss/gate.hpp"
#include "qloss/gbp_code.hpp"
#include "qloss/leakage.hpp"
#include "qloss/loss.hpp"
#include "qloss/montecarlo.hpp"
#include "qloss/rng.hpp"
#include "qloss/serialization.hpp"
#include "qloss/state.hpp"
#include "qloss/version.hpp"
