#pragma once

#include "gssl/config.hpp"
#include "gssl/error.hpp"
#include "gssl/experiments.hpp"
#include "gssl/graph.hpp"
#include "gssl/io.hpp"
#include "gssl/models.hpp"
#include "gssl/numeric.hpp"
#include "gssl/plot.hpp"
#include "gssl/quadrature.hpp"
#include "gssl/rng.hpp"
#include "gssl/sampling.hpp"
#include "gssl/spectral.hpp"
