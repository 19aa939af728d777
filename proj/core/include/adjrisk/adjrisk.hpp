#pragma once

#include "adjrisk/adjusted.hpp"
#include "adjrisk/backtest.hpp"
#include "adjrisk/distributions.hpp"
#include "adjrisk/duality.hpp"
#include "adjrisk/extreal.hpp"
#include "adjrisk/families.hpp"
#include "adjrisk/measures.hpp"
#include "adjrisk/profiles.hpp"
#include "adjrisk/verify.hpp"
