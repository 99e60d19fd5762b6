#pragma once

#include "ctf/cleaning.hpp"
#include "ctf/config.hpp"
#include "ctf/errors.hpp"
#include "ctf/event.hpp"
#include "ctf/finding.hpp"
#include "ctf/harness/bench.hpp"
#include "ctf/harness/fit.hpp"
#include "ctf/harness/match.hpp"
#include "ctf/harness/plot.hpp"
#include "ctf/helix.hpp"
#include "ctf/io/config_io.hpp"
#include "ctf/io/event_io.hpp"
#include "ctf/io/track_io.hpp"
#include "ctf/kalman.hpp"
#include "ctf/pipeline.hpp"
#include "ctf/quantum/finding.hpp"
#include "ctf/quantum/ledger.hpp"
#include "ctf/quantum/search.hpp"
#include "ctf/quantum/seeding.hpp"
#include "ctf/quantum/superposition.hpp"
#include "ctf/seed_fit.hpp"
#include "ctf/seeding.hpp"
#include "ctf/selection.hpp"
#include "ctf/smoother.hpp"
#include "ctf/track.hpp"
