#pragma once

// Umbrella header for the whole library: graph structures, partition
// refinement against exact and noisy oracles, the graph signal sampling
// model, spectral recovery of the planted classes, the planted graph
// generator, and the evaluation harness.

#include "blindep/config_model.hpp"
#include "blindep/eig.hpp"
#include "blindep/experiment.hpp"
#include "blindep/gmm.hpp"
#include "blindep/graph.hpp"
#include "blindep/matrix.hpp"
#include "blindep/metrics.hpp"
#include "blindep/oracle.hpp"
#include "blindep/parallel.hpp"
#include "blindep/partition.hpp"
#include "blindep/quotient.hpp"
#include "blindep/refine.hpp"
#include "blindep/robust.hpp"
#include "blindep/seeds.hpp"
#include "blindep/signal.hpp"
#include "blindep/spectral.hpp"
