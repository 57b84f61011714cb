#pragma once

#include "contcalc/adjunction.hpp"
#include "contcalc/catalog.hpp"
#include "contcalc/chain.hpp"
#include "contcalc/container.hpp"
#include "contcalc/fixpoint.hpp"
#include "contcalc/invariant.hpp"
#include "contcalc/io.hpp"
#include "contcalc/laws.hpp"
#include "contcalc/points.hpp"
#include "contcalc/report.hpp"
#include "contcalc/signature.hpp"
#include "contcalc/zipper.hpp"
