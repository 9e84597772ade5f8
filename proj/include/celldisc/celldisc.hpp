// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "celldisc/analytic.hpp"
#include "celldisc/campaign.hpp"
#include "celldisc/codebook.hpp"
#include "celldisc/context_db.hpp"
#include "celldisc/geometry.hpp"
#include "celldisc/output.hpp"
#include "celldisc/radio.hpp"
#include "celldisc/rendezvous.hpp"
#include "celldisc/scenario.hpp"
#include "celldisc/search.hpp"
