#pragma once

#include "qclust/errors.hpp"
#include "qclust/rational.hpp"
#include "qclust/exact_operator.hpp"
#include "qclust/basis.hpp"
#include "qclust/rep_core.hpp"
#include "qclust/hypotheses.hpp"
#include "qclust/numeric.hpp"
#include "qclust/cost_functions.hpp"
#include "qclust/optimal_povm.hpp"
#include "qclust/monte_carlo.hpp"
#include "qclust/quadrature.hpp"
#include "qclust/priors.hpp"
#include "qclust/known_states.hpp"
#include "qclust/classical.hpp"
