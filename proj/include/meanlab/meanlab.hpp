#pragma once

// Umbrella header for the generalized-means toolkit: mean evaluation,
// limit-theorem parameters, Monte Carlo verification, structural checks
// and mean-based congressional apportionment.

#include "meanlab/apportionment.hpp"
#include "meanlab/asymptotics.hpp"
#include "meanlab/distribution.hpp"
#include "meanlab/experiment.hpp"
#include "meanlab/generator.hpp"
#include "meanlab/interval.hpp"
#include "meanlab/means.hpp"
#include "meanlab/moments.hpp"
#include "meanlab/parallel.hpp"
#include "meanlab/quadrature.hpp"
#include "meanlab/rng.hpp"
#include "meanlab/sample.hpp"
#include "meanlab/sampling.hpp"
#include "meanlab/stats.hpp"
#include "meanlab/structure.hpp"
#include "meanlab/summation.hpp"
#include "meanlab/theory.hpp"
