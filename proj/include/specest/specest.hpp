#pragma once

#include "specest/chebyshev.hpp"
#include "specest/errors.hpp"
#include "specest/experiment.hpp"
#include "specest/linalg.hpp"
#include "specest/lp.hpp"
#include "specest/moments.hpp"
#include "specest/recovery.hpp"
#include "specest/synth.hpp"
#include "specest/variance.hpp"
#include "specest/wasserstein.hpp"
