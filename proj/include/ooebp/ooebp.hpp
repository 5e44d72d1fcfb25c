#pragma once

#include "ooebp/adversary.hpp"
#include "ooebp/analysis.hpp"
#include "ooebp/aptas.hpp"
#include "ooebp/core.hpp"
#include "ooebp/instance_io.hpp"
#include "ooebp/offline_exact.hpp"
#include "ooebp/online.hpp"
#include "ooebp/params.hpp"
#include "ooebp/random.hpp"
#include "ooebp/rational.hpp"
#include "ooebp/real.hpp"
