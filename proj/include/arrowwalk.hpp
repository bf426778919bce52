#pragma once

#include "arrowwalk/arrow.hpp"
#include "arrowwalk/arrow_system.hpp"
#include "arrowwalk/cookie.hpp"
#include "arrowwalk/counterexamples.hpp"
#include "arrowwalk/couplings.hpp"
#include "arrowwalk/envelope.hpp"
#include "arrowwalk/identities.hpp"
#include "arrowwalk/io.hpp"
#include "arrowwalk/local_time.hpp"
#include "arrowwalk/montecarlo.hpp"
#include "arrowwalk/path_order.hpp"
#include "arrowwalk/stacks.hpp"
#include "arrowwalk/trajectory.hpp"
#include "arrowwalk/uniform_field.hpp"
#include "arrowwalk/verifier.hpp"
