#pragma once

#include "cbsim/rng.hpp"
#include "cbsim/instance.hpp"
#include "cbsim/transcript.hpp"
#include "cbsim/regret.hpp"
#include "cbsim/batched.hpp"
#include "cbsim/collab.hpp"
#include "cbsim/hard_family.hpp"
#include "cbsim/likelihood.hpp"
#include "cbsim/events.hpp"
#include "cbsim/projection.hpp"
#include "cbsim/experiment.hpp"
